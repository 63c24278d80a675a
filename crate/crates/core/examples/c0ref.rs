use wdmcap_core::*;
fn main() {
    let mut cfg = SystemConfig::reference_link();
    cfg.z_steps = 2048;
    let half = compute_s(0, 1, 0, 0, 0, &cfg).unwrap();
    cfg.z_steps = 4096;
    let full = compute_s(0, 1, 0, 0, 0, &cfg).unwrap();
    println!("S0 z2048 = {:.12e} {:+.3e}i", half.re, half.im);
    println!("S0 z4096 = {:.12e} {:+.3e}i", full.re, full.im);
    println!("c0 ref   = {:.12e}", cfg.gamma_per_w_km * full.re);
    println!("halving rel diff = {:.3e}", (half - full).norm() / full.norm());
    let mut cfg_prod = SystemConfig::reference_link();
    cfg_prod.z_steps = 1000;
    let prod = compute_s(0, 1, 0, 0, 0, &cfg_prod).unwrap();
    println!("c0 prod  = {:.12e} (rel dev {:.3e})",
        cfg.gamma_per_w_km * prod.re,
        (prod.re - full.re).abs() / full.re);
}
