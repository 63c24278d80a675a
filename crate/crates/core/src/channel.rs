//! The finite-memory perturbative interference channel and its noise model.
//!
//! The simplified model multiplies each probe symbol by `1 + j*theta`, where
//! `theta` collects the coefficient-weighted squared amplitudes of the
//! interferers over the memory window, then adds circular complex Gaussian
//! amplifier noise. Symbols outside the frame contribute zero.

use crate::coeffs::CoefficientTable;
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::laws::InputLaw;
use crate::units;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::io::{Read, Write};

/// A block of channel-input or channel-output symbols for all users.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFrame {
    /// `symbols[k][i]` is user k's symbol at time i.
    pub symbols: Vec<Vec<Complex64>>,
    /// Per-user peak power constraint in watts.
    pub peak_power: Vec<f64>,
}

impl SymbolFrame {
    /// Number of users.
    pub fn num_users(&self) -> usize {
        self.symbols.len()
    }

    /// Block length.
    pub fn len(&self) -> usize {
        self.symbols.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Draw an i.i.d. frame with one law per user.
    pub fn random(laws: &[InputLaw], n: usize, seed: u64) -> Self {
        let symbols = laws
            .iter()
            .enumerate()
            .map(|(k, law)| {
                let mut rng = user_stream(seed, k);
                (0..n).map(|_| law.sample(&mut rng)).collect()
            })
            .collect();
        SymbolFrame {
            symbols,
            peak_power: laws.iter().map(|l| l.peak_power()).collect(),
        }
    }

    /// Check every symbol against its user's peak power constraint.
    pub fn validate_peaks(&self) -> Result<()> {
        for (k, (row, &limit)) in self.symbols.iter().zip(self.peak_power.iter()).enumerate() {
            for s in row {
                let p = s.norm_sqr();
                if p > limit * (1.0 + 1e-12) {
                    return Err(Error::PeakPowerViolation {
                        user: k,
                        power: p,
                        limit,
                    });
                }
            }
        }
        Ok(())
    }

    /// Symbol with the out-of-range convention: zero outside 0..n.
    #[inline]
    pub fn at(&self, user: usize, i: i64) -> Complex64 {
        if i < 0 || i >= self.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.symbols[user][i as usize]
        }
    }

    /// Binary export: little-endian header (magic, K, n, peak powers)
    /// followed by interleaved (re, im) f64 samples per user.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(b"WDMF")?;
        w.write_all(&(self.num_users() as u32).to_le_bytes())?;
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        for p in &self.peak_power {
            w.write_all(&p.to_le_bytes())?;
        }
        for row in &self.symbols {
            for s in row {
                w.write_all(&s.re.to_le_bytes())?;
                w.write_all(&s.im.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Inverse of [`SymbolFrame::write_binary`].
    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != b"WDMF" {
            return Err(Error::Format("bad frame magic".into()));
        }
        let mut b4 = [0u8; 4];
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b4)?;
        let k = u32::from_le_bytes(b4) as usize;
        r.read_exact(&mut b8)?;
        let n = u64::from_le_bytes(b8) as usize;
        let mut peak_power = Vec::with_capacity(k);
        for _ in 0..k {
            r.read_exact(&mut b8)?;
            peak_power.push(f64::from_le_bytes(b8));
        }
        let mut symbols = Vec::with_capacity(k);
        for _ in 0..k {
            let mut row = Vec::with_capacity(n);
            for _ in 0..n {
                r.read_exact(&mut b8)?;
                let re = f64::from_le_bytes(b8);
                r.read_exact(&mut b8)?;
                let im = f64::from_le_bytes(b8);
                row.push(Complex64::new(re, im));
            }
            symbols.push(row);
        }
        Ok(SymbolFrame {
            symbols,
            peak_power,
        })
    }

    /// CSV export for small frames: one row per (user, index).
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "user,index,re,im")?;
        for (k, row) in self.symbols.iter().enumerate() {
            for (i, s) in row.iter().enumerate() {
                writeln!(w, "{},{},{:.17e},{:.17e}", k + 1, i, s.re, s.im)?;
            }
        }
        Ok(())
    }
}

/// Additive noise description: per-user variance per complex dimension plus
/// the seed that makes every simulation reproducible.
#[derive(Debug, Clone)]
pub struct NoiseModel {
    pub sigma_sq: Vec<f64>,
    pub rng_seed: u64,
}

impl NoiseModel {
    /// Equal noise for all users, as produced by [`ase_variance`].
    pub fn uniform(num_users: usize, sigma_sq: f64, rng_seed: u64) -> Self {
        NoiseModel {
            sigma_sq: vec![sigma_sq; num_users],
            rng_seed,
        }
    }

    /// Noise-free channel (used by analytic tests).
    pub fn none(num_users: usize) -> Self {
        NoiseModel {
            sigma_sq: vec![0.0; num_users],
            rng_seed: 0,
        }
    }
}

/// Independent RNG stream for one user derived from a frame seed, so
/// parallel and serial evaluation orders agree.
pub(crate) fn user_stream(seed: u64, user: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(user as u64 + 1);
    rng
}

/// One circular complex Gaussian draw with the given per-dimension variance.
#[inline]
pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, sigma_sq: f64) -> Complex64 {
    let s = sigma_sq.sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Amplifier noise variance per complex dimension in watts.
///
/// A single lumped amplifier exactly compensates the span loss
/// (G = 10^(alpha L / 10)); spontaneous emission at the 1550 nm carrier over
/// one symbol-rate bandwidth gives
/// sigma^2 = (1/2) n_sp (G - 1) h nu Rs with n_sp = 10^(NF/10) / 2.
/// The carrier assumption is recorded in every exported result file.
pub fn ase_variance(config: &SystemConfig) -> f64 {
    let gain = units::db_to_linear(config.alpha_db_per_km * config.span_length_km);
    let n_sp = units::db_to_linear(config.noise_figure_db) / 2.0;
    0.5 * n_sp
        * (gain - 1.0)
        * units::PLANCK
        * units::CARRIER_FREQUENCY_HZ
        * config.symbol_rate_baud
}

/// Simulate the simplified finite-memory model:
/// `Y_k[i] = X_k[i] (1 + j sum_m sum_{w != k} c[k][w][m] |X_w[i-m]|^2) + N_k[i]`.
///
/// Deterministic given the noise seed; per-user noise comes from independent
/// seeded substreams.
pub fn simulate_simplified(
    frame: &SymbolFrame,
    table: &CoefficientTable,
    noise: &NoiseModel,
) -> Result<SymbolFrame> {
    let k_users = frame.num_users();
    if table.num_users() != k_users {
        return Err(Error::Dimension(format!(
            "table built for {} users, frame has {}",
            table.num_users(),
            k_users
        )));
    }
    if noise.sigma_sq.len() != k_users {
        return Err(Error::Dimension("noise model user count mismatch".into()));
    }
    frame.validate_peaks()?;

    let n = frame.len();
    let mem = table.memory() as i64;

    // Squared amplitudes once per user.
    let intensity: Vec<Vec<f64>> = frame
        .symbols
        .iter()
        .map(|row| row.iter().map(|s| s.norm_sqr()).collect())
        .collect();

    let mut out = Vec::with_capacity(k_users);
    for k in 0..k_users {
        let mut rng = user_stream(noise.rng_seed, k);
        let sigma = noise.sigma_sq[k];
        let mut row = Vec::with_capacity(n);
        for i in 0..n as i64 {
            let mut theta = 0.0;
            for w in 0..k_users {
                if w == k {
                    continue;
                }
                let iw = &intensity[w];
                let lo = (i - mem).max(0);
                let hi = (i + mem).min(n as i64 - 1);
                let mut acc = 0.0;
                for j in lo..=hi {
                    // j = i - m, so m = i - j.
                    acc += table.c(k, w, i - j) * iw[j as usize];
                }
                theta += acc;
            }
            let gain = Complex64::new(1.0, theta);
            let noise_sample = if sigma > 0.0 {
                complex_gaussian(&mut rng, sigma)
            } else {
                Complex64::new(0.0, 0.0)
            };
            row.push(frame.symbols[k][i as usize] * gain + noise_sample);
        }
        out.push(row);
    }
    Ok(SymbolFrame {
        symbols: out,
        peak_power: frame.peak_power.clone(),
    })
}

/// Dense complex coefficient cube for the first-order model, per spectral
/// distance: index order `[p + t][l + t][m + t]` with truncation `t`.
#[derive(Debug, Clone)]
pub struct FirstOrderTable {
    truncation: usize,
    num_users: usize,
    /// `values[a - 1][((p)(2t+1) + l)(2t+1) + m]` with shifted indices.
    values: Vec<Vec<Complex64>>,
}

impl FirstOrderTable {
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    #[inline]
    fn idx(&self, p: i64, l: i64, m: i64) -> usize {
        let t = self.truncation as i64;
        let side = (2 * t + 1) as usize;
        let pi = (p + t) as usize;
        let li = (l + t) as usize;
        let mi = (m + t) as usize;
        (pi * side + li) * side + mi
    }

    /// S_{k,w}^{p,l,m} for zero-based users.
    pub fn s(&self, k: usize, w: usize, p: i64, l: i64, m: i64) -> Complex64 {
        let a = k.abs_diff(w);
        self.values[a - 1][self.idx(p, l, m)]
    }

    /// Evaluate the full cube by quadrature. Desk-scale diagnostics only:
    /// cost grows with the cube of the truncation.
    pub fn compute(config: &SystemConfig, truncation: usize) -> Result<Self> {
        if truncation > config.memory {
            return Err(Error::Config(format!(
                "truncation {} exceeds configured memory {}",
                truncation, config.memory
            )));
        }
        let t = truncation as i64;
        let side = (2 * truncation + 1) as usize;
        let mut values = Vec::with_capacity(config.num_users - 1);
        for a in 1..config.num_users {
            let mut cube = vec![Complex64::new(0.0, 0.0); side * side * side];
            for p in -t..=t {
                for l in -t..=t {
                    for m in -t..=t {
                        let s = crate::coeffs::compute_s(0, a, p, l, m, config)?;
                        let pi = (p + t) as usize;
                        let li = (l + t) as usize;
                        let mi = (m + t) as usize;
                        cube[(pi * side + li) * side + mi] = s;
                    }
                }
            }
            values.push(cube);
        }
        Ok(FirstOrderTable {
            truncation,
            num_users: config.num_users,
            values,
        })
    }

    /// Build a diagonal cube from a simplified table: S^{0,m,m} = c/gamma,
    /// zero elsewhere. The two models then coincide by construction.
    pub fn from_diagonal(table: &CoefficientTable, gamma: f64, truncation: usize) -> Result<Self> {
        if truncation > table.memory() {
            return Err(Error::Config("truncation exceeds table memory".into()));
        }
        if gamma <= 0.0 {
            return Err(Error::Config("gamma must be positive".into()));
        }
        let t = truncation as i64;
        let side = (2 * truncation + 1) as usize;
        let mut out = FirstOrderTable {
            truncation,
            num_users: table.num_users(),
            values: vec![vec![Complex64::new(0.0, 0.0); side * side * side]; table.num_users() - 1],
        };
        for a in 1..table.num_users() {
            for m in -t..=t {
                let idx = out.idx(0, m, m);
                out.values[a - 1][idx] = Complex64::new(table.c(0, a, m) / gamma, 0.0);
            }
        }
        Ok(out)
    }
}

/// Simulate the first-order perturbative model with a truncated triple sum:
/// `Y_k[i] = X_k[i] + N + j gamma sum_p X_k[i-p] sum_{l,m,w} S X_w[i-l] X_w*[i-m]`.
pub fn simulate_first_order(
    frame: &SymbolFrame,
    table: &FirstOrderTable,
    gamma: f64,
    noise: &NoiseModel,
) -> Result<SymbolFrame> {
    let k_users = frame.num_users();
    if table.num_users != k_users {
        return Err(Error::Dimension("first-order table user mismatch".into()));
    }
    frame.validate_peaks()?;
    let n = frame.len() as i64;
    let t = table.truncation as i64;

    let mut out = Vec::with_capacity(k_users);
    for k in 0..k_users {
        let mut rng = user_stream(noise.rng_seed, k);
        let sigma = noise.sigma_sq[k];
        let mut row = Vec::with_capacity(n as usize);
        for i in 0..n {
            let mut nli = Complex64::new(0.0, 0.0);
            for p in -t..=t {
                let xp = frame.at(k, i - p);
                if xp == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut pair = Complex64::new(0.0, 0.0);
                for w in 0..k_users {
                    if w == k {
                        continue;
                    }
                    for l in -t..=t {
                        let xl = frame.at(w, i - l);
                        if xl == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for m in -t..=t {
                            let xm = frame.at(w, i - m);
                            pair += table.s(k, w, p, l, m) * xl * xm.conj();
                        }
                    }
                }
                nli += xp * pair;
            }
            let noise_sample = if sigma > 0.0 {
                complex_gaussian(&mut rng, sigma)
            } else {
                Complex64::new(0.0, 0.0)
            };
            let x = frame.symbols[k][i as usize];
            row.push(x + Complex64::new(0.0, gamma) * nli + noise_sample);
        }
        out.push(row);
    }
    Ok(SymbolFrame {
        symbols: out,
        peak_power: frame.peak_power.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn test_table(k: usize, mem: usize, scale: f64) -> CoefficientTable {
        let lags = 2 * mem + 1;
        let per_spacing = (1..k)
            .map(|a| {
                (0..lags)
                    .map(|i| {
                        let m = i as i64 - mem as i64;
                        scale / a as f64 / (1.0 + m.abs() as f64)
                    })
                    .collect()
            })
            .collect();
        CoefficientTable::from_values(k, mem, per_spacing).unwrap()
    }

    #[test]
    fn ase_variance_reference_value() {
        let cfg = SystemConfig::reference_link();
        // 1/2 * (10^0.3 / 2) * (10^5 - 1) * h * 193.414 THz * 32 GBd,
        // frozen after first evaluation.
        assert_relative_eq!(ase_variance(&cfg), 2.045_641_756_6e-4, max_relative = 1e-9);
    }

    #[test]
    fn ase_variance_is_zero_without_a_span_and_linear_in_rate() {
        let mut cfg = SystemConfig::reference_link();
        cfg.span_length_km = 1e-12;
        assert!(ase_variance(&cfg) < 1e-20);

        let mut a = SystemConfig::reference_link();
        let base = ase_variance(&a);
        a.symbol_rate_baud *= 2.0;
        assert_relative_eq!(ase_variance(&a), 2.0 * base, max_relative = 1e-12);
    }

    #[test]
    fn zero_table_gives_awgn() {
        let table = CoefficientTable::zeros(3, 4);
        let laws = vec![InputLaw::PeakRing { peak_w: 1.0 }; 3];
        let frame = SymbolFrame::random(&laws, 128, 11);
        let noise = NoiseModel::uniform(3, 0.01, 42);
        let out = simulate_simplified(&frame, &table, &noise).unwrap();
        let out2 = simulate_simplified(&frame, &table, &noise).unwrap();
        assert_eq!(out, out2, "same seed must be bit-exact");
        // Noise-free run returns the input unchanged.
        let clean = simulate_simplified(&frame, &table, &NoiseModel::none(3)).unwrap();
        assert_eq!(clean.symbols, frame.symbols);
    }

    #[test]
    fn constant_amplitude_interferers_give_fixed_gain() {
        let mem = 3;
        let table = test_table(3, mem, 0.05);
        let p = 1.4;
        let laws = vec![
            InputLaw::ConstantAmplitude { power_w: p },
            InputLaw::PeakRing { peak_w: 1.0 },
            InputLaw::ConstantAmplitude { power_w: p },
        ];
        let n = 256;
        let frame = SymbolFrame::random(&laws, n, 5);
        let out = simulate_simplified(&frame, &table, &NoiseModel::none(3)).unwrap();
        // Away from the frame edges every lag sees the constant power, so the
        // focus user is scaled by exactly 1 + j * P * (sum_m c[1][0][m] + c[1][2][m]).
        let theta: f64 = p * (table.lag_sum(1) + table.lag_sum(1));
        let gain = Complex64::new(1.0, theta);
        for i in mem..n - mem {
            let expect = frame.symbols[1][i] * gain;
            let got = out.symbols[1][i];
            assert!((got - expect).norm() <= 1e-12 * expect.norm());
        }
    }

    #[test]
    fn phase_rotation_covariance() {
        let table = test_table(3, 2, 0.1);
        let laws = vec![InputLaw::PeakRing { peak_w: 1.0 }; 3];
        let frame = SymbolFrame::random(&laws, 64, 9);
        let rot = Complex64::from_polar(1.0, 1.234);
        let mut rotated = frame.clone();
        for s in rotated.symbols[0].iter_mut() {
            *s *= rot;
        }
        let base = simulate_simplified(&frame, &table, &NoiseModel::none(3)).unwrap();
        let out = simulate_simplified(&rotated, &table, &NoiseModel::none(3)).unwrap();
        for i in 0..frame.len() {
            let expect = base.symbols[0][i] * rot;
            assert!((out.symbols[0][i] - expect).norm() < 1e-12);
            // Interferer magnitudes unchanged up to rounding of the rotated
            // squared amplitudes, so other users see the same output.
            let d = (out.symbols[1][i] - base.symbols[1][i]).norm();
            assert!(d <= 1e-12 * base.symbols[1][i].norm().max(1e-6));
        }
    }

    #[test]
    fn noiseless_model_never_attenuates() {
        let table = test_table(3, 2, 0.2);
        let laws = vec![InputLaw::PeakRing { peak_w: 2.0 }; 3];
        let frame = SymbolFrame::random(&laws, 128, 3);
        let out = simulate_simplified(&frame, &table, &NoiseModel::none(3)).unwrap();
        for k in 0..3 {
            for i in 0..frame.len() {
                assert!(out.symbols[k][i].norm() >= frame.symbols[k][i].norm() - 1e-15);
            }
        }
    }

    #[test]
    fn peak_violation_is_rejected() {
        let table = CoefficientTable::zeros(2, 1);
        let frame = SymbolFrame {
            symbols: vec![
                vec![Complex64::new(2.0, 0.0)],
                vec![Complex64::new(0.1, 0.0)],
            ],
            peak_power: vec![1.0, 1.0],
        };
        let got = simulate_simplified(&frame, &table, &NoiseModel::none(2));
        assert!(matches!(got, Err(Error::PeakPowerViolation { user: 0, .. })));
    }

    #[test]
    fn diagonal_first_order_matches_simplified() {
        let table = test_table(3, 2, 0.07);
        let gamma = 1.2;
        let fo = FirstOrderTable::from_diagonal(&table, gamma, 2).unwrap();
        let laws = vec![InputLaw::PeakRing { peak_w: 1.0 }; 3];
        let frame = SymbolFrame::random(&laws, 96, 21);
        let simple = simulate_simplified(&frame, &table, &NoiseModel::none(3)).unwrap();
        let full = simulate_first_order(&frame, &fo, gamma, &NoiseModel::none(3)).unwrap();
        for k in 0..3 {
            for i in 0..frame.len() {
                let d = (simple.symbols[k][i] - full.symbols[k][i]).norm();
                assert!(d <= 1e-12 * simple.symbols[k][i].norm().max(1e-3), "d = {d}");
            }
        }
    }

    #[test]
    fn frame_binary_round_trip() {
        let laws = vec![
            InputLaw::PeakRing { peak_w: 1.0 },
            InputLaw::Psk {
                order: 4,
                power_w: 0.5,
            },
        ];
        let frame = SymbolFrame::random(&laws, 33, 17);
        let mut buf = Vec::new();
        frame.write_binary(&mut buf).unwrap();
        let back = SymbolFrame::read_binary(buf.as_slice()).unwrap();
        assert_eq!(frame, back);
    }
}
