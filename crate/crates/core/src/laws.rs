//! Input symbol distributions used by the bounds, simulations and tests.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A per-symbol input law under a peak power constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InputLaw {
    /// Uniform phase, amplitude density 2r/P on [0, sqrt(P)]. This is the
    /// entropy-maximizing continuous law under a peak constraint; its squared
    /// amplitude is uniform on [0, P].
    PeakRing { peak_w: f64 },
    /// Uniform M-ary phase-shift keying at constant squared amplitude P.
    Psk { order: u32, power_w: f64 },
    /// Constant squared amplitude P with uniform continuous phase.
    ConstantAmplitude { power_w: f64 },
}

impl InputLaw {
    /// Peak squared amplitude of the law in watts.
    pub fn peak_power(&self) -> f64 {
        match *self {
            InputLaw::PeakRing { peak_w } => peak_w,
            InputLaw::Psk { power_w, .. } => power_w,
            InputLaw::ConstantAmplitude { power_w } => power_w,
        }
    }

    /// E[|X|^2].
    pub fn second_moment(&self) -> f64 {
        match *self {
            InputLaw::PeakRing { peak_w } => peak_w / 2.0,
            InputLaw::Psk { power_w, .. } => power_w,
            InputLaw::ConstantAmplitude { power_w } => power_w,
        }
    }

    /// E[|X|^4].
    pub fn fourth_moment(&self) -> f64 {
        match *self {
            InputLaw::PeakRing { peak_w } => peak_w * peak_w / 3.0,
            InputLaw::Psk { power_w, .. } => power_w * power_w,
            InputLaw::ConstantAmplitude { power_w } => power_w * power_w,
        }
    }

    /// Draw one symbol.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match *self {
            InputLaw::PeakRing { peak_w } => {
                // |X|^2 uniform on [0, P] gives the 2r/P amplitude density.
                let r = (rng.gen::<f64>() * peak_w).sqrt();
                let phase = rng.gen::<f64>() * 2.0 * PI - PI;
                Complex64::from_polar(r, phase)
            }
            InputLaw::Psk { order, power_w } => {
                let idx = rng.gen_range(0..order);
                let phase = 2.0 * PI * idx as f64 / order as f64;
                Complex64::from_polar(power_w.sqrt(), phase)
            }
            InputLaw::ConstantAmplitude { power_w } => {
                let phase = rng.gen::<f64>() * 2.0 * PI - PI;
                Complex64::from_polar(power_w.sqrt(), phase)
            }
        }
    }

    /// The PSK constellation points, if this is a PSK law.
    pub fn constellation(&self) -> Option<Vec<Complex64>> {
        match *self {
            InputLaw::Psk { order, power_w } => Some(
                (0..order)
                    .map(|i| {
                        Complex64::from_polar(
                            power_w.sqrt(),
                            2.0 * PI * i as f64 / order as f64,
                        )
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Short identifier recorded in result files.
    pub fn id(&self) -> String {
        match *self {
            InputLaw::PeakRing { .. } => "peak-ring".into(),
            InputLaw::Psk { order, .. } => format!("psk{}", order),
            InputLaw::ConstantAmplitude { .. } => "constant-amplitude".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ring_law_moments_match_samples() {
        let law = InputLaw::PeakRing { peak_w: 2.5 };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 200_000;
        let (mut m2, mut m4) = (0.0, 0.0);
        for _ in 0..n {
            let x = law.sample(&mut rng);
            let p = x.norm_sqr();
            assert!(p <= law.peak_power() + 1e-12);
            m2 += p;
            m4 += p * p;
        }
        m2 /= n as f64;
        m4 /= n as f64;
        approx::assert_relative_eq!(m2, law.second_moment(), max_relative = 0.01);
        approx::assert_relative_eq!(m4, law.fourth_moment(), max_relative = 0.02);
    }

    #[test]
    fn psk_law_is_constant_modulus() {
        let law = InputLaw::Psk {
            order: 16,
            power_w: 1.3,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = law.sample(&mut rng);
            approx::assert_relative_eq!(x.norm_sqr(), 1.3, max_relative = 1e-12);
        }
        assert_eq!(law.constellation().unwrap().len(), 16);
    }
}
