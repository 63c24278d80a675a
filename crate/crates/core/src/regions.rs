//! Rate-region geometry: cuboids, time-sharing polytopes, membership.
//!
//! Every region is downward closed and convex, held in dual form as a vertex
//! list plus a halfspace list. Cuboids are exact for any K; the time-sharing
//! hull is exact for K <= 3 (beyond that the halfspace list is a sampled
//! outer description, which membership treats conservatively).

use crate::bounds::{inner_bound, psk_interferer_rate, tin_bound};
use crate::coeffs::CoefficientTable;
use crate::error::{Error, Result};
use serde::Serialize;

/// A point in rate space, bits per symbol per user.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateTuple(pub Vec<f64>);

impl RateTuple {
    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Closed halfspace `normal . x <= offset`.
#[derive(Debug, Clone, Serialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionKind {
    OuterCuboid,
    TinCuboid,
    TimesharePolytope,
}

/// A downward-closed convex rate region in vertex + halfspace form.
#[derive(Debug, Clone, Serialize)]
pub struct RateRegion {
    pub kind: RegionKind,
    pub vertices: Vec<RateTuple>,
    pub halfspaces: Vec<Halfspace>,
    /// Per-coordinate uncertainty of Monte-Carlo vertices; zero for exact
    /// regions. Membership assertions widen by this amount.
    pub vertex_tolerance: Vec<f64>,
}

const SLACK: f64 = 1e-9;

fn cuboid(kind: RegionKind, edges: &[f64], tolerance: Vec<f64>) -> RateRegion {
    let k = edges.len();
    let mut vertices = Vec::with_capacity(1 << k);
    for mask in 0u32..(1 << k) {
        let v: Vec<f64> = (0..k)
            .map(|d| if mask & (1 << d) != 0 { edges[d] } else { 0.0 })
            .collect();
        vertices.push(RateTuple(v));
    }
    let halfspaces = (0..k)
        .map(|d| {
            let mut normal = vec![0.0; k];
            normal[d] = 1.0;
            Halfspace {
                normal,
                offset: edges[d],
            }
        })
        .collect();
    RateRegion {
        kind,
        vertices,
        halfspaces,
        vertex_tolerance: tolerance,
    }
}

/// Axis-aligned outer-bound cuboid `[0, U_1] x ... x [0, U_K]`.
pub fn outer_region(powers_w: &[f64], table: &CoefficientTable, sigma_sq: f64) -> RateRegion {
    let edges: Vec<f64> = (0..table.num_users())
        .map(|k| crate::bounds::outer_bound(k, powers_w, table, sigma_sq))
        .collect();
    cuboid(RegionKind::OuterCuboid, &edges, vec![0.0; edges.len()])
}

/// Cuboid of rates all users achieve simultaneously when each treats the
/// interference as Gaussian noise.
pub fn tin_region(
    powers_w: &[f64],
    sigma_sq: f64,
    nli_variances: &[f64],
) -> Result<RateRegion> {
    if powers_w.len() != nli_variances.len() {
        return Err(Error::Dimension(
            "one NLI variance per user is required".into(),
        ));
    }
    let edges: Vec<f64> = powers_w
        .iter()
        .zip(nli_variances.iter())
        .map(|(&p, &v)| tin_bound(p, sigma_sq, v))
        .collect();
    Ok(cuboid(
        RegionKind::TinCuboid,
        &edges,
        vec![0.0; powers_w.len()],
    ))
}

/// The K single-user strategy vertices: vertex k gives user k its inner
/// bound while every other user runs constant-envelope PSK whose rate is
/// Monte-Carlo estimated. Returns the vertices with per-coordinate standard
/// errors.
pub fn timeshare_vertices(
    powers_w: &[f64],
    table: &CoefficientTable,
    sigma_sq: f64,
    psk_order: u32,
    mc_samples: usize,
    seed: u64,
) -> Result<(Vec<RateTuple>, Vec<f64>)> {
    let k_users = table.num_users();
    let mut vertices = Vec::with_capacity(k_users);
    let mut tol = vec![0.0f64; k_users];
    for focus in 0..k_users {
        let mut coords = vec![0.0; k_users];
        coords[focus] = inner_bound(focus, powers_w, table, sigma_sq);
        for w in 0..k_users {
            if w == focus {
                continue;
            }
            let est = psk_interferer_rate(
                w, focus, powers_w, table, sigma_sq, psk_order, mc_samples, seed,
            )?;
            coords[w] = est.bits_per_symbol;
            tol[w] = tol[w].max(3.0 * est.std_error);
        }
        vertices.push(RateTuple(coords));
    }
    Ok((vertices, tol))
}

/// Downward closure of the convex hull of `vertices` and the origin.
///
/// Exact facet enumeration for K <= 3: axis caps, pair facets parallel to an
/// axis, and the top facet through each vertex triple, each kept only when
/// its outward normal is nonnegative, with offsets set to the support value
/// so every vertex satisfies every halfspace.
pub fn timeshare_region(vertices: &[RateTuple]) -> Result<RateRegion> {
    if vertices.is_empty() {
        return Err(Error::Dimension("at least one vertex required".into()));
    }
    let k = vertices[0].dim();
    if vertices.iter().any(|v| v.dim() != k) {
        return Err(Error::Dimension("vertices of mixed dimension".into()));
    }

    let support = |normal: &[f64]| -> f64 {
        vertices
            .iter()
            .map(|v| dot(normal, &v.0))
            .fold(0.0f64, f64::max)
    };

    let mut halfspaces: Vec<Halfspace> = Vec::new();
    let push = |normal: Vec<f64>, halfspaces: &mut Vec<Halfspace>| {
        let norm = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return;
        }
        let unit: Vec<f64> = normal.iter().map(|x| x / norm).collect();
        if unit.iter().any(|&x| x < -1e-12) {
            return;
        }
        if halfspaces.iter().any(|h| {
            h.normal
                .iter()
                .zip(unit.iter())
                .all(|(a, b)| (a - b).abs() < 1e-9)
        }) {
            return;
        }
        let offset = support(&unit);
        halfspaces.push(Halfspace {
            normal: unit,
            offset,
        });
    };

    // Axis caps.
    for d in 0..k {
        let mut n = vec![0.0; k];
        n[d] = 1.0;
        push(n, &mut halfspaces);
    }

    // Facets containing a pair of vertices and parallel to one axis.
    if k >= 2 {
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                for axis in 0..k {
                    let others: Vec<usize> = (0..k).filter(|&d| d != axis).collect();
                    if others.len() != 2 {
                        // K = 2: the "pair facet" is the segment's own normal.
                        if k == 2 {
                            let dx = vertices[j].0[0] - vertices[i].0[0];
                            let dy = vertices[j].0[1] - vertices[i].0[1];
                            push(vec![dy, -dx], &mut halfspaces);
                            push(vec![-dy, dx], &mut halfspaces);
                        }
                        continue;
                    }
                    let (a, b) = (others[0], others[1]);
                    let da = vertices[j].0[a] - vertices[i].0[a];
                    let db = vertices[j].0[b] - vertices[i].0[b];
                    let mut n = vec![0.0; k];
                    n[a] = db;
                    n[b] = -da;
                    push(n.clone(), &mut halfspaces);
                    for v in n.iter_mut() {
                        *v = -*v;
                    }
                    push(n, &mut halfspaces);
                }
            }
        }
    }

    // Top facets through vertex triples (K = 3).
    if k == 3 {
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                for l in j + 1..vertices.len() {
                    let u: Vec<f64> = (0..3)
                        .map(|d| vertices[j].0[d] - vertices[i].0[d])
                        .collect();
                    let w: Vec<f64> = (0..3)
                        .map(|d| vertices[l].0[d] - vertices[i].0[d])
                        .collect();
                    let n = vec![
                        u[1] * w[2] - u[2] * w[1],
                        u[2] * w[0] - u[0] * w[2],
                        u[0] * w[1] - u[1] * w[0],
                    ];
                    push(n.clone(), &mut halfspaces);
                    push(n.iter().map(|x| -x).collect(), &mut halfspaces);
                }
            }
        }
    }

    let mut all_vertices = vertices.to_vec();
    all_vertices.push(RateTuple(vec![0.0; k]));

    Ok(RateRegion {
        kind: RegionKind::TimesharePolytope,
        vertices: all_vertices,
        halfspaces,
        vertex_tolerance: vec![0.0; k],
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Halfspace membership with 1e-9 slack, widened by the region's vertex
/// tolerance.
pub fn contains(region: &RateRegion, point: &RateTuple) -> bool {
    let k = point.dim();
    if region.vertices.first().map(|v| v.dim()) != Some(k) {
        return false;
    }
    if point.0.iter().any(|&x| x < -SLACK) {
        return false;
    }
    let widen: f64 = region
        .vertex_tolerance
        .iter()
        .fold(0.0f64, |acc, &t| acc.max(t));
    region
        .halfspaces
        .iter()
        .all(|h| dot(&h.normal, &point.0) <= h.offset + SLACK + widen)
}
