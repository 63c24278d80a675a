// Temporary numeric probe used while pinning conventions and regression
// constants; not part of the deliverable surface.
use wdmcap_core::*;

fn main() {
    let cfg = SystemConfig::reference_link();
    let t0 = std::time::Instant::now();
    let table = compute_coefficient_table(&cfg).unwrap();
    println!("table computed in {:.1?}", t0.elapsed());

    let mem = cfg.memory as i64;
    println!("\n# spacing a=1 (c and raw, both lag signs)");
    let c0 = table.c(0, 1, 0);
    for m in -mem..=mem {
        let raw = table.raw(0, 1, m);
        println!(
            "m={:+3}  c={:.6e}  c/c0={:.4e}  raw=({:.6e}, {:.3e})",
            m,
            table.c(0, 1, m),
            table.c(0, 1, m) / c0,
            raw.re,
            raw.im
        );
    }
    println!("\n# spacing a=2");
    for m in 0..=mem {
        println!(
            "m={:+3}  c1={:.6e} c2={:.6e}  c2<=c1: {}",
            m,
            table.c(0, 1, m),
            table.c(0, 2, m),
            table.c(0, 2, m) <= table.c(0, 1, m)
        );
    }
    let sum1 = table.lag_sum(1);
    let sum2 = table.lag_sum(2);
    println!("\nlag sums: C1 = {:.6e}, C2 = {:.6e} (1/W)", sum1, sum2);

    let sigma = ase_variance(&cfg);
    println!("sigma^2 = {:.9e} W per complex dim", sigma);

    for dbm in [-10.0, -3.3, 1.1, 5.0] {
        let p = units::dbm_to_watts(dbm);
        let powers = vec![p; 3];
        let a = aggregate_gain(1, &powers, &table);
        let u = outer_bound(1, &powers, &table, sigma);
        let l = inner_bound(1, &powers, &table, sigma);
        println!(
            "P = {:+5.1} dBm: A = {:.4e}, U2 = {:.4}, L2 = {:.4}, gap = {:.4}",
            dbm,
            a,
            u,
            l,
            u - l
        );
    }

    // TIN curve peak scan.
    let p0 = 1e-3;
    let law = InputLaw::PeakRing { peak_w: p0 };
    let est = nli_variance(1, &[p0; 3], &table, &law, 200_000, 1).unwrap();
    println!(
        "\nNLI var @0dBm: mc={:.4e} cf={:.4e} se={:.1e}",
        est.mc, est.closed_form, est.std_error
    );
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..141 {
        let dbm = -15.0 + 0.25 * i as f64;
        let p = units::dbm_to_watts(dbm);
        let tin = tin_bound(p, sigma, est.closed_form * (p / p0).powi(3));
        if tin > best.0 {
            best = (tin, dbm);
        }
    }
    println!("TIN peak on [-15,20]: {:.4} bits at {:+.2} dBm", best.0, best.1);
    let p11 = units::dbm_to_watts(1.1);
    println!(
        "TIN(1.1 dBm) = {:.4}",
        tin_bound(p11, sigma, est.closed_form * (p11 / p0).powi(3))
    );

    // Dominance probe over the full lag range via batched sweeps.
    let t1 = std::time::Instant::now();
    let ms: Vec<i64> = (0..=11).collect();
    let s0 = coeffs::compute_s_batch(0, 1, 0, 0, &ms, &cfg).unwrap();
    let s1 = coeffs::compute_s_batch(0, 1, 1, 0, &ms, &cfg).unwrap();
    let s2 = coeffs::compute_s_batch(0, 1, 2, 0, &ms, &cfg).unwrap();
    // p = 1, l = m, third index m+1: delta = l - m_index = -1 over lags m+1.
    let ms_shift: Vec<i64> = (1..=12).collect();
    let s3 = coeffs::compute_s_batch(0, 1, 1, -1, &ms_shift, &cfg).unwrap();
    for (i, &m) in ms.iter().enumerate() {
        println!(
            "m={:2}: |S0mm|={:.4e}  |S1mm|={:.4e}  |S2mm|={:.4e}  |S1m(m+1)|={:.4e}  dominant: {}",
            m,
            s0[i].norm(),
            s1[i].norm(),
            s2[i].norm(),
            s3[i].norm(),
            s0[i].norm() >= s1[i].norm()
                && s0[i].norm() >= s2[i].norm()
                && s0[i].norm() >= s3[i].norm()
        );
    }
    println!("dominance probe took {:.1?}", t1.elapsed());

    // Cross-check batch vs single path on one value.
    let single = compute_s(0, 1, 1, 3, 4, &cfg).unwrap();
    println!("single S(1,3,4) = {:?} vs batch {:?}", single, s3[3]);
}
