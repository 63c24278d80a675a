//! Single-user rate bounds for the finite-memory interference channel.
//!
//! Three quantities per user and power point:
//!
//! * the treat-interference-as-noise lower bound,
//! * an entropy-power-inequality inner bound achieved with constant-amplitude
//!   interferers and a peak-constrained ring input, and
//! * a genie-aided outer bound.
//!
//! Inner and outer bound share the aggregate nonlinear gain `A`, the worst
//! case of the coefficient-weighted interferer power over all peak-feasible
//! sequences; their ratio of SNR arguments is exactly `e`, so the rate gap is
//! at most log2(e) bits. All rate formulas run through `log2_1p` to keep
//! precision over 30+ dB power sweeps.

use crate::channel::user_stream;
use crate::coeffs::CoefficientTable;
use crate::error::{Error, Result};
use crate::laws::InputLaw;
use crate::units::{dbm_to_watts, log2_1p};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::E;

/// Aggregate nonlinear gain `A[k] = sum_{w != k} P_w sum_m c[k][w][m]`.
///
/// This is the maximum of the coefficient-weighted interferer power over all
/// peak-feasible sequences, attained by constant-amplitude signaling.
pub fn aggregate_gain(user: usize, powers_w: &[f64], table: &CoefficientTable) -> f64 {
    debug_assert_eq!(powers_w.len(), table.num_users());
    let mut a = 0.0;
    for w in 0..table.num_users() {
        if w == user {
            continue;
        }
        a += powers_w[w] * table.lag_sum(user.abs_diff(w));
    }
    a
}

/// Genie-aided outer bound in bits per symbol:
/// `U_k = log2(1 + P_k/(2 sigma^2) (1 + A_k^2))`.
pub fn outer_bound(user: usize, powers_w: &[f64], table: &CoefficientTable, sigma_sq: f64) -> f64 {
    let a = aggregate_gain(user, powers_w, table);
    log2_1p(powers_w[user] / (2.0 * sigma_sq) * (1.0 + a * a))
}

/// Entropy-power-inequality inner bound in bits per symbol:
/// `L_k = log2(1 + P_k/(2 sigma^2 e) (1 + A_k^2))`.
///
/// Achieved with constant-amplitude interferers and a uniform-phase input
/// whose amplitude density is 2r/P on [0, sqrt(P)].
pub fn inner_bound(user: usize, powers_w: &[f64], table: &CoefficientTable, sigma_sq: f64) -> f64 {
    let a = aggregate_gain(user, powers_w, table);
    log2_1p(powers_w[user] / (2.0 * sigma_sq * E) * (1.0 + a * a))
}

/// Treat-interference-as-noise bound in bits per symbol:
/// `log2(1 + P_k / (2 (sigma^2 + sigma_nli^2) e))`.
pub fn tin_bound(peak_power_w: f64, sigma_sq: f64, sigma_nli_sq: f64) -> f64 {
    log2_1p(peak_power_w / (2.0 * (sigma_sq + sigma_nli_sq) * E))
}

/// Monte-Carlo and closed-form estimates of the nonlinear interference
/// variance, per complex dimension.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NliVarianceEstimate {
    /// MC estimate of the per-dimension variance (total over both real
    /// dimensions divided by two).
    pub mc: f64,
    /// Closed-form value from the input-law moments.
    pub closed_form: f64,
    /// Standard error of the MC estimate.
    pub std_error: f64,
    pub samples: usize,
}

/// Estimate the variance of the interference term
/// `j X_k sum_m sum_w c |X_w[i-m]|^2` with all symbols i.i.d. under
/// `input_law` scaled to each user's power.
///
/// Returns the per-complex-dimension variance together with the closed-form
/// moment evaluation: with `mu` and `v` the mean and variance of the
/// coefficient-weighted interferer sum, the total variance is
/// `E|X_k|^2 (mu^2 + v)`.
pub fn nli_variance(
    user: usize,
    powers_w: &[f64],
    table: &CoefficientTable,
    input_law: &InputLaw,
    mc_samples: usize,
    seed: u64,
) -> Result<NliVarianceEstimate> {
    if mc_samples < 10_000 {
        return Err(Error::Config(format!(
            "mc_samples must be >= 10000, got {mc_samples}"
        )));
    }
    let k_users = table.num_users();
    let mem = table.memory() as i64;

    // Law for each user at its own power.
    let law_for = |power: f64| -> InputLaw {
        match input_law {
            InputLaw::PeakRing { .. } => InputLaw::PeakRing { peak_w: power },
            InputLaw::Psk { order, .. } => InputLaw::Psk {
                order: *order,
                power_w: power,
            },
            InputLaw::ConstantAmplitude { .. } => InputLaw::ConstantAmplitude { power_w: power },
        }
    };

    // Closed form: interferer symbols at distinct (w, m) are independent.
    let mut mean = 0.0;
    let mut var = 0.0;
    for w in 0..k_users {
        if w == user {
            continue;
        }
        let law = law_for(powers_w[w]);
        let m2 = law.second_moment();
        let m4 = law.fourth_moment();
        for m in -mem..=mem {
            let c = table.c(user, w, m);
            mean += c * m2;
            var += c * c * (m4 - m2 * m2);
        }
    }
    let focus_law = law_for(powers_w[user]);
    let closed_total = focus_law.second_moment() * (mean * mean + var);

    let mut rng = user_stream(seed, user);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let interferer_laws: Vec<(usize, InputLaw)> = (0..k_users)
        .filter(|&w| w != user)
        .map(|w| (w, law_for(powers_w[w])))
        .collect();
    for _ in 0..mc_samples {
        let xk = focus_law.sample(&mut rng);
        let mut theta = 0.0;
        for (w, law) in &interferer_laws {
            for m in -mem..=mem {
                let c = table.c(user, *w, m);
                if c != 0.0 {
                    theta += c * law.sample(&mut rng).norm_sqr();
                }
            }
        }
        // NLI sample j * X_k * theta; its mean is zero by phase symmetry.
        let z2 = xk.norm_sqr() * theta * theta;
        sum += z2;
        sum_sq += z2 * z2;
    }
    let n = mc_samples as f64;
    let mc_total = sum / n;
    let var_of_mean = ((sum_sq / n) - mc_total * mc_total) / n;

    Ok(NliVarianceEstimate {
        mc: mc_total / 2.0,
        closed_form: closed_total / 2.0,
        std_error: var_of_mean.max(0.0).sqrt() / 2.0,
        samples: mc_samples,
    })
}

/// A Monte-Carlo rate estimate with its standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PskRateEstimate {
    pub bits_per_symbol: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Achievable rate of PSK user `user` while `focus` transmits the
/// peak-constrained ring law and every remaining user transmits
/// constant-envelope PSK, all interference treated as noise through a
/// memoryless Gaussian auxiliary channel.
///
/// This mismatched-decoding estimate supplies the nonzero interferer
/// coordinates of the time-sharing vertices. Deterministic given `seed`.
#[allow(clippy::too_many_arguments)]
pub fn psk_interferer_rate(
    user: usize,
    focus: usize,
    powers_w: &[f64],
    table: &CoefficientTable,
    sigma_sq: f64,
    psk_order: u32,
    mc_samples: usize,
    seed: u64,
) -> Result<PskRateEstimate> {
    if psk_order < 2 {
        return Err(Error::Config("psk_order must be >= 2".into()));
    }
    if user == focus {
        return Err(Error::Config("rate user must differ from focus user".into()));
    }
    let k_users = table.num_users();
    let mem = table.memory() as i64;
    let law = InputLaw::Psk {
        order: psk_order,
        power_w: powers_w[user],
    };

    let mut rng = user_stream(seed.wrapping_add(0x9e37_79b9_7f4a_7c15), user);

    // Memoryless channel samples for the PSK user, with fresh i.i.d.
    // interferer windows per sample.
    let mut xs = Vec::with_capacity(mc_samples);
    let mut ys = Vec::with_capacity(mc_samples);
    for _ in 0..mc_samples {
        let x = law.sample(&mut rng);
        let mut theta = 0.0;
        for w in 0..k_users {
            if w == user {
                continue;
            }
            let wlaw = if w == focus {
                InputLaw::PeakRing {
                    peak_w: powers_w[w],
                }
            } else {
                InputLaw::Psk {
                    order: psk_order,
                    power_w: powers_w[w],
                }
            };
            for m in -mem..=mem {
                let c = table.c(user, w, m);
                if c != 0.0 {
                    theta += c * wlaw.sample(&mut rng).norm_sqr();
                }
            }
        }
        let noise = crate::channel::complex_gaussian(&mut rng, sigma_sq);
        ys.push(x * Complex64::new(1.0, theta) + noise);
        xs.push(x);
    }

    let constellation = law.constellation().expect("psk law");
    Ok(psk_gmi(&xs, &ys, &constellation))
}

/// Gaussian-auxiliary mismatched-decoding information rate for a discrete
/// constellation: fit `y = h x + z`, then average
/// `log2 q(y|x) - log2 sum_x' q(y|x')/Q` over the samples.
pub(crate) fn psk_gmi(
    xs: &[Complex64],
    ys: &[Complex64],
    constellation: &[Complex64],
) -> PskRateEstimate {
    let n = xs.len();
    let (h, resid_per_dim) = fit_affine(xs, ys);
    // q(y|x) = CN(h x, 2 resid_per_dim); the total-variance normalizers cancel
    // between numerator and mixture.
    let inv_var = 1.0 / (2.0 * resid_per_dim).max(1e-300);
    let q = constellation.len() as f64;

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut exps = vec![0.0f64; constellation.len()];
    for (x, y) in xs.iter().zip(ys.iter()) {
        let d = (y - h * x).norm_sqr() * inv_var;
        let mut max_exp = f64::NEG_INFINITY;
        for (e, c) in exps.iter_mut().zip(constellation.iter()) {
            *e = -(y - h * c).norm_sqr() * inv_var;
            if *e > max_exp {
                max_exp = *e;
            }
        }
        let mix: f64 = exps.iter().map(|e| (e - max_exp).exp()).sum::<f64>();
        let log_mix = max_exp + mix.ln() - q.ln();
        let bits = (-d - log_mix) / std::f64::consts::LN_2;
        sum += bits;
        sum_sq += bits * bits;
    }
    let mean = sum / n as f64;
    let var = (sum_sq / n as f64 - mean * mean).max(0.0);
    PskRateEstimate {
        bits_per_symbol: mean,
        std_error: (var / n as f64).sqrt(),
        samples: n,
    }
}

/// Least-squares fit of `y ~ h x`; returns `h` and the residual variance per
/// complex dimension.
pub(crate) fn fit_affine(xs: &[Complex64], ys: &[Complex64]) -> (Complex64, f64) {
    let mut xy = Complex64::new(0.0, 0.0);
    let mut xx = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        xy += y * x.conj();
        xx += x.norm_sqr();
    }
    let h = if xx > 0.0 {
        xy / xx
    } else {
        Complex64::new(0.0, 0.0)
    };
    let resid: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| (y - h * x).norm_sqr())
        .sum::<f64>()
        / xs.len() as f64;
    (h, resid / 2.0)
}

/// Per-user bound curve over a power grid.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCurve {
    pub user: usize,
    pub power_dbm: Vec<f64>,
    pub tin: Vec<f64>,
    pub inner: Vec<f64>,
    pub outer: Vec<f64>,
    /// Diagnostic log2(1 + P/(2 sigma^2)) curve with the nonlinear gain
    /// forced to zero.
    pub awgn_diag: Vec<f64>,
    pub sigma_nli: Vec<f64>,
    pub sigma_sq: f64,
    pub metadata: CurveMetadata,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveMetadata {
    pub config_hash: String,
    pub mc_samples: usize,
    pub seed: u64,
    /// Carrier frequency assumed by the amplifier-noise model.
    pub noise_carrier_hz: f64,
    pub input_law: String,
}

/// Evaluate TIN, inner and outer bounds for every user over an equal-power
/// dBm grid.
///
/// The interference variance is Monte-Carlo estimated once at a reference
/// power and rescaled by the exact cubic power law of the equal-power sweep;
/// the closed-form moment value is cross-checked at estimation time.
pub fn sweep_bounds(
    powers_dbm: &[f64],
    table: &CoefficientTable,
    sigma_sq: f64,
    config_hash: &str,
    mc_samples: usize,
    seed: u64,
) -> Result<Vec<BoundCurve>> {
    let k_users = table.num_users();
    let p_ref = dbm_to_watts(0.0);
    let ref_powers = vec![p_ref; k_users];

    let mut curves = Vec::with_capacity(k_users);
    for user in 0..k_users {
        let law = InputLaw::PeakRing { peak_w: p_ref };
        let est = nli_variance(user, &ref_powers, table, &law, mc_samples, seed)?;
        if est.closed_form > 0.0 {
            let dev = (est.mc - est.closed_form).abs();
            if dev > 5.0 * est.std_error.max(1e-30) && dev > 1e-6 * est.closed_form {
                return Err(Error::Quadrature(format!(
                    "NLI variance MC {:.6e} disagrees with closed form {:.6e}",
                    est.mc, est.closed_form
                )));
            }
        }

        let mut tin = Vec::with_capacity(powers_dbm.len());
        let mut inner = Vec::with_capacity(powers_dbm.len());
        let mut outer = Vec::with_capacity(powers_dbm.len());
        let mut awgn = Vec::with_capacity(powers_dbm.len());
        let mut nli = Vec::with_capacity(powers_dbm.len());
        for &dbm in powers_dbm {
            let p = dbm_to_watts(dbm);
            let powers = vec![p; k_users];
            // Equal-power scaling: every |X|^2 scales linearly with P, the
            // squared interferer sum quadratically, the variance cubically.
            let sigma_nli_sq = est.mc * (p / p_ref).powi(3);
            tin.push(tin_bound(p, sigma_sq, sigma_nli_sq));
            inner.push(inner_bound(user, &powers, table, sigma_sq));
            outer.push(outer_bound(user, &powers, table, sigma_sq));
            awgn.push(log2_1p(p / (2.0 * sigma_sq)));
            nli.push(sigma_nli_sq);
        }
        curves.push(BoundCurve {
            user,
            power_dbm: powers_dbm.to_vec(),
            tin,
            inner,
            outer,
            awgn_diag: awgn,
            sigma_nli: nli,
            sigma_sq,
            metadata: CurveMetadata {
                config_hash: config_hash.to_string(),
                mc_samples,
                seed,
                noise_carrier_hz: crate::units::CARRIER_FREQUENCY_HZ,
                input_law: "peak-ring".into(),
            },
        });
    }
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn symmetric_table(k: usize, mem: usize, base: f64) -> CoefficientTable {
        let lags = 2 * mem + 1;
        let per_spacing = (1..k)
            .map(|a| {
                (0..lags)
                    .map(|i| {
                        let m = (i as i64 - mem as i64).abs() as f64;
                        base / a as f64 * (-0.4 * m).exp()
                    })
                    .collect()
            })
            .collect();
        CoefficientTable::from_values(k, mem, per_spacing).unwrap()
    }

    #[test]
    fn aggregate_gain_is_direct_substitution() {
        let table = symmetric_table(3, 2, 0.3);
        let p = 1.7;
        let powers = vec![p; 3];
        let expect = p * (table.lag_sum(1) + table.lag_sum(1));
        assert_relative_eq!(aggregate_gain(1, &powers, &table), expect, epsilon = 1e-15);
        assert_eq!(aggregate_gain(1, &[0.0; 3], &table), 0.0);
        // Monotone in every interferer power.
        let mut bumped = powers.clone();
        bumped[0] *= 2.0;
        assert!(aggregate_gain(1, &bumped, &table) > aggregate_gain(1, &powers, &table));
    }

    #[test]
    fn outer_bound_reduces_to_awgn_without_coupling() {
        let table = CoefficientTable::zeros(3, 2);
        let powers = vec![1e-3; 3];
        let sigma = 2e-4;
        assert_relative_eq!(
            outer_bound(1, &powers, &table, sigma),
            log2_1p(1e-3 / (2.0 * sigma)),
            epsilon = 1e-14
        );
        // Doubling an interferer power strictly increases the bound when the
        // coupling is nonzero.
        let coupled = symmetric_table(3, 2, 0.3);
        let base = outer_bound(1, &powers, &coupled, sigma);
        let mut bumped = powers.clone();
        bumped[2] *= 2.0;
        assert!(outer_bound(1, &bumped, &coupled, sigma) > base);
    }

    #[test]
    fn inner_bound_hits_one_bit_at_unit_argument() {
        let table = CoefficientTable::zeros(2, 0);
        let sigma = 0.25;
        let p = 2.0 * sigma * E;
        assert_relative_eq!(
            inner_bound(0, &[p, p], &table, sigma),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn gap_is_bounded_by_log2_e_and_grows_toward_it() {
        let table = symmetric_table(3, 4, 0.8);
        let sigma = 1e-4;
        let log2e = std::f64::consts::LOG2_E;
        let mut prev_gap = 0.0;
        for dbm in [-20.0, -10.0, 0.0, 10.0, 20.0, 30.0] {
            let p = dbm_to_watts(dbm);
            let powers = vec![p; 3];
            let u = outer_bound(1, &powers, &table, sigma);
            let l = inner_bound(1, &powers, &table, sigma);
            let gap = u - l;
            assert!(gap >= 0.0 && gap <= log2e + 1e-9, "gap = {gap}");
            assert!(gap >= prev_gap - 1e-12, "gap must grow with power");
            prev_gap = gap;
        }
        assert!(prev_gap > 0.999 * log2e);
    }

    #[test]
    fn scaling_invariance_of_the_nonlinear_gain() {
        let mem = 3;
        let table = symmetric_table(3, mem, 0.5);
        let lambda = 7.3;
        let scaled = {
            let per_spacing = (1..3)
                .map(|a| {
                    (-(mem as i64)..=(mem as i64))
                        .map(|m| lambda * table.c(0, a, m))
                        .collect()
                })
                .collect();
            CoefficientTable::from_values(3, mem, per_spacing).unwrap()
        };
        let p = 2e-3;
        // Coefficients scaled by lambda with interferer powers divided by
        // lambda leave A, and hence U and L, unchanged.
        let a1 = aggregate_gain(1, &[p; 3], &table);
        let a2 = aggregate_gain(1, &[p / lambda; 3], &scaled);
        assert_relative_eq!(a1, a2, max_relative = 1e-12);
    }

    #[test]
    fn tin_reduces_to_inner_without_nli() {
        let table = CoefficientTable::zeros(3, 1);
        let sigma = 3e-4;
        let p = 1e-3;
        assert_relative_eq!(
            tin_bound(p, sigma, 0.0),
            inner_bound(0, &[p; 3], &table, sigma),
            epsilon = 1e-14
        );
    }

    #[test]
    fn nli_variance_zero_coefficients() {
        let table = CoefficientTable::zeros(3, 2);
        let est = nli_variance(
            1,
            &[1e-3; 3],
            &table,
            &InputLaw::PeakRing { peak_w: 1e-3 },
            10_000,
            1,
        )
        .unwrap();
        assert_eq!(est.mc, 0.0);
        assert_eq!(est.closed_form, 0.0);
    }

    #[test]
    fn nli_variance_single_coefficient_moment_oracle() {
        // Two users, memoryless, one coefficient: the second moment of the
        // interference is E|X_k|^2 c^2 E|X_w|^4 = (P/2) c^2 (P^2/3).
        let c = 0.4;
        let table = CoefficientTable::from_values(2, 0, vec![vec![c]]).unwrap();
        let p = 1.5;
        let est = nli_variance(
            0,
            &[p, p],
            &table,
            &InputLaw::PeakRing { peak_w: p },
            400_000,
            7,
        )
        .unwrap();
        let expect_total = (p / 2.0) * c * c * (p * p / 3.0);
        assert_relative_eq!(est.closed_form, expect_total / 2.0, max_relative = 1e-12);
        assert!(
            (est.mc - est.closed_form).abs() <= 3.0 * est.std_error,
            "mc = {}, closed = {}, se = {}",
            est.mc,
            est.closed_form,
            est.std_error
        );
    }

    #[test]
    fn nli_variance_seed_stability() {
        let table = symmetric_table(3, 2, 5.0);
        let powers = vec![1e-3; 3];
        let law = InputLaw::PeakRing { peak_w: 1e-3 };
        let a = nli_variance(1, &powers, &table, &law, 200_000, 1).unwrap();
        let b = nli_variance(1, &powers, &table, &law, 200_000, 2).unwrap();
        assert!(
            (a.mc - b.mc).abs() < 0.02 * a.mc,
            "estimates across seeds differ by more than 2%"
        );
    }

    #[test]
    fn psk_rate_saturates_at_log2_order_without_interference() {
        let table = CoefficientTable::zeros(3, 1);
        let powers = vec![1.0; 3];
        let est = psk_interferer_rate(0, 1, &powers, &table, 1e-6, 8, 20_000, 3).unwrap();
        assert!(
            (est.bits_per_symbol - 3.0).abs() < 0.01,
            "rate = {}",
            est.bits_per_symbol
        );
    }

    #[test]
    fn psk_rate_invariant_under_common_rotation() {
        // Rotating inputs, outputs and constellation by one common phase
        // leaves the mismatched rate unchanged.
        let law = InputLaw::Psk {
            order: 4,
            power_w: 1.0,
        };
        let mut rng = user_stream(5, 0);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for _ in 0..20_000 {
            let x = law.sample(&mut rng);
            let noise = crate::channel::complex_gaussian(&mut rng, 0.2);
            ys.push(x * Complex64::new(1.0, 0.35) + noise);
            xs.push(x);
        }
        let constellation = law.constellation().unwrap();
        let base = psk_gmi(&xs, &ys, &constellation);

        let rot = Complex64::from_polar(1.0, 0.777);
        let xs_r: Vec<Complex64> = xs.iter().map(|v| v * rot).collect();
        let ys_r: Vec<Complex64> = ys.iter().map(|v| v * rot).collect();
        let cons_r: Vec<Complex64> = constellation.iter().map(|v| v * rot).collect();
        let rotated = psk_gmi(&xs_r, &ys_r, &cons_r);
        assert_relative_eq!(
            rotated.bits_per_symbol,
            base.bits_per_symbol,
            epsilon = 1e-9
        );
    }

    #[test]
    fn sweep_has_expected_shape() {
        let table = symmetric_table(3, 2, 0.5);
        let grid: Vec<f64> = (0..41).map(|i| -15.0 + 0.5 * i as f64).collect();
        let curves = sweep_bounds(&grid, &table, 2e-4, "test", 20_000, 9).unwrap();
        assert_eq!(curves.len(), 3);
        for curve in &curves {
            assert_eq!(curve.power_dbm.len(), 41);
            for i in 0..41 {
                assert!(curve.outer[i] >= curve.inner[i]);
                assert!(curve.outer[i] - curve.inner[i] <= std::f64::consts::LOG2_E + 1e-9);
                if i > 0 {
                    assert!(curve.inner[i] >= curve.inner[i - 1]);
                    assert!(curve.outer[i] >= curve.outer[i - 1]);
                }
            }
        }
    }

    #[test]
    fn tin_is_unimodal_over_a_wide_grid() {
        // Probe far enough in power to bracket the interference-limited
        // rollover: the curve must rise, peak strictly inside the grid and
        // fall beyond it.
        let table = symmetric_table(3, 2, 5.0);
        let sigma = 2e-4;
        let est_p0 = 1e-3;
        let law = InputLaw::PeakRing { peak_w: est_p0 };
        let est = nli_variance(1, &[est_p0; 3], &table, &law, 50_000, 2).unwrap();
        let grid: Vec<f64> = (0..71).map(|i| -20.0 + 0.5 * i as f64).collect();
        let tin: Vec<f64> = grid
            .iter()
            .map(|&dbm| {
                let p = dbm_to_watts(dbm);
                tin_bound(p, sigma, est.closed_form * (p / est_p0).powi(3))
            })
            .collect();
        let peak_idx = tin
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert!(peak_idx > 0 && peak_idx < grid.len() - 1, "interior peak");
        for i in 1..=peak_idx {
            assert!(tin[i] >= tin[i - 1] - 1e-12);
        }
        for i in peak_idx + 1..grid.len() {
            assert!(tin[i] <= tin[i - 1] + 1e-12);
        }
    }
}
