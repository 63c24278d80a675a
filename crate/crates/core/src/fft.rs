//! Thin wrapper over rustfft with a process-wide plan cache.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

enum Direction {
    Forward,
    Inverse,
}

fn plan(n: usize, dir: Direction) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<Mutex<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().unwrap();
    let forward = matches!(dir, Direction::Forward);
    let (planner, map) = &mut *guard;
    map.entry((n, forward))
        .or_insert_with(|| {
            if forward {
                planner.plan_fft_forward(n)
            } else {
                planner.plan_fft_inverse(n)
            }
        })
        .clone()
}

/// In-place unnormalized forward DFT.
pub fn forward(buf: &mut [Complex64]) {
    plan(buf.len(), Direction::Forward).process(buf);
}

/// In-place inverse DFT, normalized by 1/N so that `inverse(forward(x)) = x`.
pub fn inverse(buf: &mut [Complex64]) {
    plan(buf.len(), Direction::Inverse).process(buf);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// DFT bin frequencies in Hz for an `n`-point grid with sample spacing `dt`,
/// in rustfft bin order (non-negative bins first, then negative).
pub fn bin_frequencies(n: usize, dt: f64) -> Vec<f64> {
    let df = 1.0 / (n as f64 * dt);
    (0..n)
        .map(|i| {
            let k = if i <= (n - 1) / 2 {
                i as f64
            } else {
                i as f64 - n as f64
            };
            k * df
        })
        .collect()
}
