//! Cross-phase-modulation coupling coefficients by numerical quadrature.
//!
//! A coefficient couples the intensity of an interfering channel at symbol
//! lag `m` into the phase of the probe channel. It is the distance integral,
//! weighted by fiber loss, of the overlap between four copies of the
//! dispersed symbol waveform; the two-channel group-delay walk-off enters as
//! a distance-proportional delay on two of the copies.
//!
//! Conventions fixed here once:
//!
//! * The time integral is taken per symbol duration (`dt/T` quadrature
//!   weight). With the unit-energy pulse this makes `gamma * S` a plain
//!   1/W quantity acting on squared symbol amplitudes in watts.
//! * The distance integral is a composite trapezoid over `z_steps`
//!   equal intervals including both endpoints.
//! * All time shifts, including the fractional-sample walk-off, are exact
//!   frequency-domain phase ramps.
//! * The table is symmetrized in lag: the collision side (positive lags for
//!   anomalous dispersion) is computed and mirrored, matching the model's
//!   stated lag symmetry. Raw complex values for both lag signs are kept
//!   for diagnostics.

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::fft;
use crate::pulse;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Coupling coefficients for every user pair and lag.
///
/// Entries depend on the pair only through the spectral distance |k - w|,
/// so storage is per spacing. Lags run from -M to M.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    num_users: usize,
    memory: usize,
    /// Index `a - 1` holds spacing `a = |k - w|`.
    spacings: Vec<SpacingCoefficients>,
}

/// Coefficients for one spectral distance.
#[derive(Debug, Clone)]
pub struct SpacingCoefficients {
    /// Clamped real coefficients in 1/W, index `m + memory`.
    pub c: Vec<f64>,
    /// Raw complex quadrature values before symmetrization and clamping,
    /// index `m + memory`.
    pub raw: Vec<Complex64>,
}

impl CoefficientTable {
    /// Number of users the table was built for.
    pub fn num_users(&self) -> usize {
        self.num_users
    }

    /// Single-sided memory M.
    pub fn memory(&self) -> usize {
        self.memory
    }

    /// Coefficient c\[k\]\[w\]\[m\] in 1/W. Users are zero-based and must
    /// differ; `m` runs in -M..=M.
    pub fn c(&self, k: usize, w: usize, m: i64) -> f64 {
        let a = k.abs_diff(w);
        debug_assert!(a >= 1 && k < self.num_users && w < self.num_users);
        debug_assert!(m.unsigned_abs() as usize <= self.memory);
        self.spacings[a - 1].c[(m + self.memory as i64) as usize]
    }

    /// Raw complex value for diagnostics.
    pub fn raw(&self, k: usize, w: usize, m: i64) -> Complex64 {
        let a = k.abs_diff(w);
        self.spacings[a - 1].raw[(m + self.memory as i64) as usize]
    }

    /// Sum over lags of c\[k\]\[w\]\[m\] for a pair at spacing `a`.
    pub fn lag_sum(&self, a: usize) -> f64 {
        self.spacings[a - 1].c.iter().sum()
    }

    /// Per-spacing view.
    pub fn spacing(&self, a: usize) -> &SpacingCoefficients {
        &self.spacings[a - 1]
    }

    /// A table of the same shape with every entry zero.
    pub fn zeros(num_users: usize, memory: usize) -> Self {
        let len = 2 * memory + 1;
        CoefficientTable {
            num_users,
            memory,
            spacings: (0..num_users - 1)
                .map(|_| SpacingCoefficients {
                    c: vec![0.0; len],
                    raw: vec![Complex64::new(0.0, 0.0); len],
                })
                .collect(),
        }
    }

    /// Build a table from per-spacing real coefficients (used by tests and
    /// synthetic scenarios). `per_spacing[a-1][m + M]` gives the entries.
    pub fn from_values(num_users: usize, memory: usize, per_spacing: Vec<Vec<f64>>) -> Result<Self> {
        if per_spacing.len() != num_users - 1 {
            return Err(Error::Dimension(format!(
                "expected {} spacings, got {}",
                num_users - 1,
                per_spacing.len()
            )));
        }
        let len = 2 * memory + 1;
        let mut spacings = Vec::with_capacity(per_spacing.len());
        for c in per_spacing {
            if c.len() != len {
                return Err(Error::Dimension(format!(
                    "expected {} lags, got {}",
                    len,
                    c.len()
                )));
            }
            if c.iter().any(|&v| v < 0.0) {
                return Err(Error::Config("coefficients must be nonnegative".into()));
            }
            let raw = c.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            spacings.push(SpacingCoefficients { c, raw });
        }
        Ok(CoefficientTable {
            num_users,
            memory,
            spacings,
        })
    }
}

/// Trapezoid nodes and weights over [0, L] with `intervals` equal steps.
fn trapezoid(l_km: f64, intervals: usize) -> impl Iterator<Item = (f64, f64)> {
    let dz = l_km / intervals as f64;
    (0..=intervals).map(move |j| {
        let w = if j == 0 || j == intervals { 0.5 } else { 1.0 } * dz;
        (j as f64 * dz, w)
    })
}

/// Numerically evaluate the four-pulse overlap coefficient
/// S_{k,w}^{p,l,m} for zero-based users `k != w`.
pub fn compute_s(
    k: usize,
    w: usize,
    p: i64,
    l: i64,
    m: i64,
    config: &SystemConfig,
) -> Result<Complex64> {
    Ok(compute_s_batch(k, w, p, l - m, &[m], config)?[0])
}

/// Evaluate S_{k,w}^{p, m + delta, m} for a whole list of lags `m` at fixed
/// `p` and `delta = l - m` in one quadrature sweep.
///
/// At each distance node the integrand factors into two pair products of the
/// dispersed pulse, `h_p(t) = g*(t) g(t - pT)` and its `delta` counterpart
/// delayed by the lag plus the accumulated walk-off; the time integral over
/// all requested lags comes out of one pair of spectra via a phase-ramp
/// recursion. Integer-symbol shifts are exact circular rotations, the
/// fractional walk-off an exact spectral phase ramp.
pub fn compute_s_batch(
    k: usize,
    w: usize,
    p: i64,
    delta: i64,
    ms: &[i64],
    config: &SystemConfig,
) -> Result<Vec<Complex64>> {
    if k == w {
        return Err(Error::Config("compute_s requires k != w".into()));
    }
    if config.z_steps < 2 {
        return Err(Error::Quadrature("z_steps must be >= 2".into()));
    }
    if ms.is_empty() {
        return Ok(Vec::new());
    }
    let pulse = pulse::rrc_pulse(config)?;
    let n = pulse.samples.len();
    let dt = pulse.dt;
    let t_sym = config.symbol_duration();
    let sps = config.samples_per_symbol;
    let spacing = k.abs_diff(w) as f64;
    let walkoff = config.walkoff_s_per_km() * spacing;

    let m_min = *ms.iter().min().unwrap();
    let m_max = *ms.iter().max().unwrap();
    let max_lag = p
        .abs()
        .max((m_min + delta).abs())
        .max((m_max + delta).abs())
        .max(m_min.abs())
        .max(m_max.abs()) as f64;
    let max_shift = max_lag * t_sym + walkoff.abs() * config.span_length_km;
    if max_shift > 0.25 * n as f64 * dt {
        return Err(Error::WindowTooSmall(format!(
            "requested shift {:.3e} s exceeds a quarter of the window",
            max_shift
        )));
    }

    let mut spectrum = pulse.samples.clone();
    fft::forward(&mut spectrum);
    let alpha = config.alpha_per_km();
    let freqs = fft::bin_frequencies(n, dt);

    // g*(t) g(t - dT) for an integer symbol shift d, as a spectrum.
    let pair_spectrum = |g: &[Complex64], d: i64| -> Vec<Complex64> {
        let shift = (d * sps as i64).rem_euclid(n as i64) as usize;
        let mut prod: Vec<Complex64> = (0..n)
            .map(|i| g[i].conj() * g[(i + n - shift) % n])
            .collect();
        fft::forward(&mut prod);
        prod
    };

    let nodes: Vec<(f64, f64)> = trapezoid(config.span_length_km, config.z_steps).collect();
    let per_node: Vec<Vec<Complex64>> = nodes
        .par_iter()
        .map(|&(z, wz)| {
            let loss = (-alpha * z).exp();
            if loss == 0.0 {
                return vec![Complex64::new(0.0, 0.0); ms.len()];
            }
            let disp = pulse::dispersion_phase(n, dt, z, config);
            let mut g: Vec<Complex64> = spectrum
                .iter()
                .zip(disp.iter())
                .map(|(s, d)| s * d)
                .collect();
            fft::inverse(&mut g);

            let hp = pair_spectrum(&g, p);
            let kd = pair_spectrum(&g, delta);

            // sum_t h_p(t) k_d(t - s) = (1/N) sum_j Hp[j] Kd[-j] e^{+2 pi i f_j s}
            // with s = m T + walkoff z; advance m by phase-ramp recursion.
            let off = walkoff * z;
            let scale = wz * loss * dt * t_sym / n as f64;
            let mut acc: Vec<Complex64> = (0..n)
                .map(|j| {
                    let prod = hp[j] * kd[(n - j) % n];
                    let phase = 2.0 * PI * freqs[j] * (off + m_min as f64 * t_sym);
                    prod * Complex64::from_polar(scale, phase)
                })
                .collect();
            let step: Vec<Complex64> = freqs
                .iter()
                .map(|&f| Complex64::from_polar(1.0, 2.0 * PI * f * t_sym))
                .collect();
            let span = (m_max - m_min) as usize;
            let mut by_m = vec![Complex64::new(0.0, 0.0); span + 1];
            for slot in by_m.iter_mut() {
                let mut sum = Complex64::new(0.0, 0.0);
                for v in acc.iter() {
                    sum += v;
                }
                *slot = sum;
                for (v, s) in acc.iter_mut().zip(step.iter()) {
                    *v *= *s;
                }
            }
            ms.iter()
                .map(|&m| by_m[(m - m_min) as usize])
                .collect()
        })
        .collect();

    // Deterministic summation order regardless of the parallel schedule.
    let mut out = vec![Complex64::new(0.0, 0.0); ms.len()];
    for node in &per_node {
        for (acc, v) in out.iter_mut().zip(node.iter()) {
            *acc += *v;
        }
    }
    Ok(out)
}

/// Compute the full coefficient table for `config`.
///
/// Exploits the dependence on |k - w| only, batches all lags of a spacing
/// through one intensity autocorrelation per distance node, asserts
/// near-realness of the quadrature values and clamps rounding-level
/// negatives.
pub fn compute_coefficient_table(config: &SystemConfig) -> Result<CoefficientTable> {
    config.validate()?;
    let pulse = pulse::rrc_pulse(config)?;
    let n = pulse.samples.len();
    let dt = pulse.dt;
    let t_sym = config.symbol_duration();
    let mem = config.memory as i64;
    let lags = (2 * config.memory + 1) as usize;
    let alpha = config.alpha_per_km();
    let num_spacings = config.num_users - 1;

    let mut spectrum = pulse.samples.clone();
    fft::forward(&mut spectrum);

    // Phase ramp advancing the correlation lag by one symbol.
    let freqs = fft::bin_frequencies(n, dt);
    let lag_step: Vec<Complex64> = freqs
        .iter()
        .map(|&f| Complex64::from_polar(1.0, -2.0 * PI * f * t_sym))
        .collect();

    let nodes: Vec<(f64, f64)> = trapezoid(config.span_length_km, config.z_steps).collect();
    let per_node: Vec<Vec<Complex64>> = nodes
        .par_iter()
        .map(|&(z, wz)| {
            let loss = (-alpha * z).exp();
            let mut out = vec![Complex64::new(0.0, 0.0); num_spacings * lags];
            if loss == 0.0 {
                return out;
            }
            // Dispersed waveform at z.
            let disp = pulse::dispersion_phase(n, dt, z, config);
            let mut g: Vec<Complex64> = spectrum
                .iter()
                .zip(disp.iter())
                .map(|(s, d)| s * d)
                .collect();
            fft::inverse(&mut g);
            // Intensity spectrum; |I~|^2 is the correlation kernel.
            let mut intensity: Vec<Complex64> = g
                .iter()
                .map(|v| Complex64::new(v.norm_sqr(), 0.0))
                .collect();
            fft::forward(&mut intensity);
            let kernel: Vec<f64> = intensity.iter().map(|v| v.norm_sqr()).collect();

            let scale = wz * loss * dt * t_sym / n as f64;
            for a in 1..=num_spacings {
                let off = config.walkoff_s_per_km() * a as f64 * z;
                // Start the lag ramp at m = -M.
                let mut acc: Vec<Complex64> = freqs
                    .iter()
                    .zip(kernel.iter())
                    .map(|(&f, &k2)| {
                        let phase = -2.0 * PI * f * (off - mem as f64 * t_sym);
                        Complex64::from_polar(k2, phase)
                    })
                    .collect();
                for mi in 0..lags {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for v in acc.iter() {
                        sum += v;
                    }
                    out[(a - 1) * lags + mi] = sum * scale;
                    if mi + 1 < lags {
                        for (v, s) in acc.iter_mut().zip(lag_step.iter()) {
                            *v *= *s;
                        }
                    }
                }
            }
            out
        })
        .collect();

    // Ordered reduction over distance nodes.
    let mut raw_flat = vec![Complex64::new(0.0, 0.0); num_spacings * lags];
    for node in &per_node {
        for (acc, v) in raw_flat.iter_mut().zip(node.iter()) {
            *acc += *v;
        }
    }

    // The collision side of the lag axis: walk-off sweeps the interferer
    // through positive lags when beta2 * spacing is negative.
    let collision_sign: i64 = if config.walkoff_s_per_km() <= 0.0 { 1 } else { -1 };

    let mut spacings = Vec::with_capacity(num_spacings);
    for a in 1..=num_spacings {
        let raw = raw_flat[(a - 1) * lags..a * lags].to_vec();
        let mut c = vec![0.0f64; lags];
        let scale_ref = raw
            .iter()
            .map(|v| v.norm())
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        for m in 0..=mem {
            let side = (collision_sign * m + mem) as usize;
            let s = raw[side];
            if s.norm() > 1e-9 * scale_ref && s.im.abs() > 1e-3 * s.norm() {
                return Err(Error::Quadrature(format!(
                    "coefficient at spacing {} lag {} is not numerically real: {:?}",
                    a, m, s
                )));
            }
            let mut value = s.re * config.gamma_per_w_km;
            if value < 0.0 {
                if value > -1e-12 * scale_ref.max(1.0) * config.gamma_per_w_km {
                    value = 0.0;
                } else {
                    return Err(Error::Quadrature(format!(
                        "coefficient at spacing {} lag {} is negative beyond rounding: {}",
                        a, m, value
                    )));
                }
            }
            c[(m + mem) as usize] = value;
            c[(-m + mem) as usize] = value;
        }
        spacings.push(SpacingCoefficients { c, raw });
    }

    Ok(CoefficientTable {
        num_users: config.num_users,
        memory: config.memory,
        spacings,
    })
}
