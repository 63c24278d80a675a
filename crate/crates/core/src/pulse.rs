//! Pulse shaping and linear propagation on the waveform grid.
//!
//! The fundamental symbol waveform is a unit-energy root-raised-cosine pulse
//! built directly in the frequency domain, so its spectrum is exactly flat
//! inside the passband and exactly zero beyond the roll-off edge (up to grid
//! resolution). Dispersion and time shifts are frequency-domain
//! multiplications; fractional-sample shifts are therefore exact phase ramps
//! rather than interpolations.

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::fft;
use num_complex::Complex64;
use std::f64::consts::PI;

/// A complex waveform on a uniform time grid.
#[derive(Debug, Clone)]
pub struct SampledWaveform {
    pub samples: Vec<Complex64>,
    /// Sample spacing in seconds.
    pub dt: f64,
    /// Time of the first sample in seconds.
    pub t0: f64,
}

impl SampledWaveform {
    /// Total energy: integral of |g|^2 dt.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * self.dt
    }

    /// Time coordinate of sample `i`.
    pub fn time_at(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    /// Root-mean-square temporal width about the energy centroid.
    pub fn rms_width(&self) -> f64 {
        let e = self.energy();
        let mean = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, s)| self.time_at(i) * s.norm_sqr())
            .sum::<f64>()
            * self.dt
            / e;
        let second = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let t = self.time_at(i) - mean;
                t * t * s.norm_sqr()
            })
            .sum::<f64>()
            * self.dt
            / e;
        second.sqrt()
    }

    /// Fraction of energy within `guard` seconds of either window edge.
    pub fn edge_energy_fraction(&self, guard: f64) -> f64 {
        let total: f64 = self.samples.iter().map(|s| s.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let t_end = self.t0 + (self.samples.len() - 1) as f64 * self.dt;
        let edge: f64 = self
            .samples
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let t = self.time_at(*i);
                t < self.t0 + guard || t > t_end - guard
            })
            .map(|(_, s)| s.norm_sqr())
            .sum();
        edge / total
    }
}

/// Raised-cosine power spectrum value at frequency `f` for symbol duration
/// `t_sym` and roll-off `beta`, normalized to unit pulse energy. At zero
/// roll-off the band-edge discontinuity takes the half-amplitude midpoint,
/// which keeps the sampled pulse exactly Nyquist.
fn raised_cosine_spectrum(f: f64, t_sym: f64, beta: f64) -> f64 {
    let f = f.abs();
    let f1 = (1.0 - beta) / (2.0 * t_sym);
    let f2 = (1.0 + beta) / (2.0 * t_sym);
    if beta == 0.0 {
        // Half amplitude (a quarter of the power) at the fold-over frequency
        // keeps the folded amplitude spectrum flat.
        let edge = 0.5 / t_sym;
        if (f - edge).abs() <= 1e-9 * edge {
            return 0.25 * t_sym;
        }
        return if f < edge { t_sym } else { 0.0 };
    }
    if f <= f1 {
        t_sym
    } else if f < f2 {
        0.5 * t_sym * (1.0 + (PI * t_sym / beta * (f - f1)).cos())
    } else {
        0.0
    }
}

/// Unit-energy root-raised-cosine taps with the pulse peak at index 0,
/// wrapping circularly. This is the form circular convolutions want.
pub(crate) fn rrc_taps_origin(n: usize, dt: f64, t_sym: f64, rolloff: f64) -> Vec<Complex64> {
    let freqs = fft::bin_frequencies(n, dt);
    let mut buf: Vec<Complex64> = freqs
        .iter()
        .map(|&f| Complex64::new(raised_cosine_spectrum(f, t_sym, rolloff).sqrt(), 0.0))
        .collect();
    fft::inverse(&mut buf);
    let scale = 1.0 / dt;
    for v in buf.iter_mut() {
        *v *= scale;
    }
    let energy: f64 = buf.iter().map(|s| s.norm_sqr()).sum::<f64>() * dt;
    let norm = 1.0 / energy.sqrt();
    for v in buf.iter_mut() {
        *v *= norm;
    }
    buf
}

/// Build the unit-energy root-raised-cosine symbol waveform on the grid
/// defined by `config`, centered at t = 0.
pub fn rrc_pulse(config: &SystemConfig) -> Result<SampledWaveform> {
    config.validate()?;
    let n = config.grid_len();
    let dt = config.dt();
    let t_sym = config.symbol_duration();
    let freqs = fft::bin_frequencies(n, dt);

    // sqrt of the raised-cosine spectrum; (-1)^j recenters time zero in the
    // middle of the window.
    let mut buf: Vec<Complex64> = freqs
        .iter()
        .enumerate()
        .map(|(j, &f)| {
            let mag = raised_cosine_spectrum(f, t_sym, config.rolloff).sqrt();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(mag * sign, 0.0)
        })
        .collect();
    fft::inverse(&mut buf);
    let scale = 1.0 / dt;
    for v in buf.iter_mut() {
        *v *= scale;
    }

    let mut pulse = SampledWaveform {
        samples: buf,
        dt,
        t0: -(n as f64 / 2.0) * dt,
    };

    // Exact unit-energy normalization; the spectral construction is already
    // within rounding of it.
    let e = pulse.energy();
    if !(e > 0.0) {
        return Err(Error::Quadrature("degenerate pulse energy".into()));
    }
    let norm = 1.0 / e.sqrt();
    for v in pulse.samples.iter_mut() {
        *v *= norm;
    }

    check_window(&pulse, config)?;
    Ok(pulse)
}

/// Verify that the dispersed, maximally walked-off pulse keeps its energy
/// away from the window edges (relative leakage below 1e-6).
pub fn check_window(pulse: &SampledWaveform, config: &SystemConfig) -> Result<()> {
    let l = config.span_length_km;
    let dispersed = propagate_dispersion(pulse, l, config)?;
    let max_shift = config.memory as f64 * config.symbol_duration()
        + config.walkoff_s_per_km().abs() * (config.num_users - 1) as f64 * l;
    let window = pulse.samples.len() as f64 * pulse.dt;
    if 2.0 * max_shift > 0.5 * window {
        return Err(Error::WindowTooSmall(format!(
            "maximum coefficient shift {:.3e} s exceeds a quarter of the {:.3e} s window",
            max_shift, window
        )));
    }
    let guard = max_shift + 0.01 * window;
    let frac = dispersed.edge_energy_fraction(guard);
    if frac > 1e-6 {
        return Err(Error::WindowTooSmall(format!(
            "dispersed pulse leaks {:.3e} of its energy within {:.3e} s of the window edge",
            frac, guard
        )));
    }
    Ok(())
}

/// Propagate through `z` km of dispersion only: multiply the spectrum by
/// exp(+j (beta2/2) w^2 z). Loss is carried separately by the coefficient
/// integral, so this operator is unitary.
pub fn propagate_dispersion(
    pulse: &SampledWaveform,
    z_km: f64,
    config: &SystemConfig,
) -> Result<SampledWaveform> {
    if z_km < 0.0 {
        return Err(Error::Config("propagation distance must be >= 0".into()));
    }
    let mut out = pulse.clone();
    if z_km == 0.0 {
        return Ok(out);
    }
    let spec = dispersion_phase(pulse.samples.len(), pulse.dt, z_km, config);
    apply_spectral_filter(&mut out.samples, &spec);
    Ok(out)
}

/// The dispersion transfer function exp(+j (beta2/2) w^2 z) on the grid.
pub(crate) fn dispersion_phase(
    n: usize,
    dt: f64,
    z_km: f64,
    config: &SystemConfig,
) -> Vec<Complex64> {
    let beta2 = config.beta2_s2_per_km();
    fft::bin_frequencies(n, dt)
        .iter()
        .map(|&f| {
            let w = 2.0 * PI * f;
            Complex64::from_polar(1.0, 0.5 * beta2 * w * w * z_km)
        })
        .collect()
}

/// Multiply the waveform's spectrum by `filter` (given in bin order).
pub(crate) fn apply_spectral_filter(samples: &mut [Complex64], filter: &[Complex64]) {
    fft::forward(samples);
    for (s, h) in samples.iter_mut().zip(filter.iter()) {
        *s *= h;
    }
    fft::inverse(samples);
}

/// Spectrum-domain phase ramp realizing an exact delay by `shift` seconds,
/// in bin order: exp(-j 2 pi f shift).
pub(crate) fn delay_phase(n: usize, dt: f64, shift: f64) -> Vec<Complex64> {
    fft::bin_frequencies(n, dt)
        .iter()
        .map(|&f| Complex64::from_polar(1.0, -2.0 * PI * f * shift))
        .collect()
}
