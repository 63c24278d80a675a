//! CSV and JSON writers for coefficient tables, bound curves and regions.
//!
//! File columns use one-based user indices to match the usual channel
//! numbering in transmission diagrams; the API itself is zero-based.

use crate::bounds::BoundCurve;
use crate::coeffs::CoefficientTable;
use crate::error::Result;
use crate::regions::RateRegion;
use std::io::Write;

/// Coefficient table CSV: `(k, w, m, c_real, S_raw_re, S_raw_im)`, SI units.
pub fn write_coefficient_csv<W: Write>(table: &CoefficientTable, mut w: W) -> Result<()> {
    writeln!(w, "k,w,m,c_real,S_raw_re,S_raw_im")?;
    let mem = table.memory() as i64;
    for k in 0..table.num_users() {
        for u in 0..table.num_users() {
            if k == u {
                continue;
            }
            for m in -mem..=mem {
                let c = table.c(k, u, m);
                let raw = table.raw(k, u, m);
                writeln!(
                    w,
                    "{},{},{},{:.17e},{:.17e},{:.17e}",
                    k + 1,
                    u + 1,
                    m,
                    c,
                    raw.re,
                    raw.im
                )?;
            }
        }
    }
    Ok(())
}

/// Bound curve CSV: one row per power point.
pub fn write_bound_curve_csv<W: Write>(curves: &[BoundCurve], mut w: W) -> Result<()> {
    writeln!(w, "user,power_dbm,tin,inner,outer,awgn_diag,sigma_nli")?;
    for curve in curves {
        for i in 0..curve.power_dbm.len() {
            writeln!(
                w,
                "{},{:.4},{:.12},{:.12},{:.12},{:.12},{:.17e}",
                curve.user + 1,
                curve.power_dbm[i],
                curve.tin[i],
                curve.inner[i],
                curve.outer[i],
                curve.awgn_diag[i],
                curve.sigma_nli[i]
            )?;
        }
    }
    Ok(())
}

/// Bound curves as JSON with full provenance metadata.
pub fn write_bound_curve_json<W: Write>(curves: &[BoundCurve], w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, curves)
        .map_err(|e| crate::error::Error::Format(e.to_string()))?;
    Ok(())
}

/// Region JSON: kind, vertices, halfspaces and tolerances.
pub fn write_region_json<W: Write>(region: &RateRegion, provenance: &serde_json::Value, w: W) -> Result<()> {
    let doc = serde_json::json!({
        "kind": region.kind,
        "vertices": region.vertices,
        "halfspaces": region.halfspaces,
        "vertex_tolerance": region.vertex_tolerance,
        "provenance": provenance,
    });
    serde_json::to_writer_pretty(w, &doc)
        .map_err(|e| crate::error::Error::Format(e.to_string()))?;
    Ok(())
}

/// Plot-ready facet polygons for 3-D rendering: each facet of the region is
/// emitted as its vertex cycle, one row per polygon corner.
pub fn write_facet_csv<W: Write>(region: &RateRegion, mut w: W) -> Result<()> {
    writeln!(w, "facet,corner,r1,r2,r3")?;
    if region.vertices.first().map(|v| v.dim()) != Some(3) {
        return Ok(());
    }
    for (fi, h) in region.halfspaces.iter().enumerate() {
        // Corners of this facet: vertices that meet the halfspace with
        // equality.
        let mut corners: Vec<&crate::regions::RateTuple> = region
            .vertices
            .iter()
            .filter(|v| {
                let s: f64 = h
                    .normal
                    .iter()
                    .zip(v.0.iter())
                    .map(|(a, b)| a * b)
                    .sum();
                (s - h.offset).abs() <= 1e-9 * h.offset.abs().max(1.0)
            })
            .collect();
        if corners.len() < 3 {
            continue;
        }
        // Order the corners around the facet centroid.
        let centroid: Vec<f64> = (0..3)
            .map(|d| corners.iter().map(|c| c.0[d]).sum::<f64>() / corners.len() as f64)
            .collect();
        // Build a 2-D frame in the facet plane.
        let n = &h.normal;
        let mut u = if n[0].abs() < 0.9 {
            vec![1.0, 0.0, 0.0]
        } else {
            vec![0.0, 1.0, 0.0]
        };
        let dot_un: f64 = u.iter().zip(n.iter()).map(|(a, b)| a * b).sum();
        for d in 0..3 {
            u[d] -= dot_un * n[d];
        }
        let un: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in u.iter_mut() {
            *x /= un;
        }
        let v = vec![
            n[1] * u[2] - n[2] * u[1],
            n[2] * u[0] - n[0] * u[2],
            n[0] * u[1] - n[1] * u[0],
        ];
        corners.sort_by(|a, b| {
            let ang = |c: &crate::regions::RateTuple| {
                let rel: Vec<f64> = (0..3).map(|d| c.0[d] - centroid[d]).collect();
                let x: f64 = rel.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
                let y: f64 = rel.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                y.atan2(x)
            };
            ang(a).partial_cmp(&ang(b)).unwrap()
        });
        for (ci, c) in corners.iter().enumerate() {
            writeln!(
                w,
                "{},{},{:.12},{:.12},{:.12}",
                fi, ci, c.0[0], c.0[1], c.0[2]
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::outer_region;

    #[test]
    fn coefficient_csv_row_count() {
        let table = CoefficientTable::from_values(
            3,
            2,
            vec![vec![0.1; 5], vec![0.05; 5]],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_coefficient_csv(&table, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        // Header plus 6 ordered pairs x 5 lags.
        assert_eq!(text.lines().count(), 1 + 6 * 5);
        assert!(text.lines().nth(1).unwrap().starts_with("1,2,-2,"));
    }

    #[test]
    fn facet_csv_emits_cuboid_faces() {
        let table = CoefficientTable::from_values(
            3,
            0,
            vec![vec![1.0], vec![0.5]],
        )
        .unwrap();
        let region = outer_region(&[1e-3; 3], &table, 1e-4);
        let mut buf = Vec::new();
        write_facet_csv(&region, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        // Three cap facets with four corners each.
        assert_eq!(text.lines().count(), 1 + 3 * 4);
    }
}
