//! Link and numerical-grid configuration.
//!
//! All parameters live in one flat structure mirroring the transmission
//! setup, with units fixed in the field names of the on-disk format. Unit
//! bugs are the dominant failure mode in this kind of code, so every key of
//! the config file carries its unit and the conversion to SI happens in
//! exactly one place (`SystemConfig::from_key_values`).

use crate::error::{Error, Result};
use crate::units;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// Full system description: link physics plus numerical grid controls.
///
/// Constructed via [`SystemConfig::builder`]-style free functions or parsed
/// from a flat key-value file. Invariants are enforced by [`SystemConfig::validate`],
/// which every constructor calls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Number of WDM users K (>= 2).
    pub num_users: usize,
    /// Span length L in km.
    pub span_length_km: f64,
    /// Fiber nonlinearity parameter gamma in 1/(W·km).
    pub gamma_per_w_km: f64,
    /// Symbol rate in baud.
    pub symbol_rate_baud: f64,
    /// Fiber attenuation in dB/km (converted internally to 1/km).
    pub alpha_db_per_km: f64,
    /// Group velocity dispersion beta2 in ps^2/km (typically negative).
    pub beta2_ps2_per_km: f64,
    /// Root-raised-cosine roll-off in [0, 1].
    pub rolloff: f64,
    /// Channel spacing stored as angular frequency in rad/s.
    ///
    /// The on-disk key is `channel_spacing_ghz`; the 2*pi conversion is done
    /// once at ingestion.
    pub channel_spacing_rad_per_s: f64,
    /// Amplifier noise figure in dB.
    pub noise_figure_db: f64,
    /// Single-sided channel memory M in symbols (lags -M..M).
    pub memory: usize,
    /// Samples per symbol on the waveform grid (power of two, >= 2).
    pub samples_per_symbol: usize,
    /// Time window length in symbols.
    pub time_window_symbols: usize,
    /// Number of trapezoid intervals for the distance integral.
    pub z_steps: usize,
}

impl SystemConfig {
    /// Reference single-span configuration used throughout the crate's
    /// examples and the acceptance suite: 3 users at 32 GBd over 250 km of
    /// standard fiber with 100 GHz spacing.
    pub fn reference_link() -> Self {
        let cfg = SystemConfig {
            num_users: 3,
            span_length_km: 250.0,
            gamma_per_w_km: 1.2,
            symbol_rate_baud: 32e9,
            alpha_db_per_km: 0.2,
            beta2_ps2_per_km: -21.7,
            rolloff: 0.1,
            channel_spacing_rad_per_s: 2.0 * std::f64::consts::PI * 100e9,
            noise_figure_db: 3.0,
            memory: 11,
            samples_per_symbol: 16,
            time_window_symbols: 4096,
            z_steps: 1000,
        };
        cfg.validate().expect("reference link is valid");
        cfg
    }

    /// Symbol duration T = 1/Rs in seconds.
    pub fn symbol_duration(&self) -> f64 {
        1.0 / self.symbol_rate_baud
    }

    /// Waveform grid sample spacing in seconds.
    pub fn dt(&self) -> f64 {
        self.symbol_duration() / self.samples_per_symbol as f64
    }

    /// Number of samples in the waveform grid.
    pub fn grid_len(&self) -> usize {
        self.samples_per_symbol * self.time_window_symbols
    }

    /// Power attenuation rate in 1/km.
    pub fn alpha_per_km(&self) -> f64 {
        units::alpha_db_to_linear(self.alpha_db_per_km)
    }

    /// Dispersion parameter in s^2/km.
    pub fn beta2_s2_per_km(&self) -> f64 {
        self.beta2_ps2_per_km * 1e-24
    }

    /// Channel spacing in Hz.
    pub fn channel_spacing_hz(&self) -> f64 {
        self.channel_spacing_rad_per_s / (2.0 * std::f64::consts::PI)
    }

    /// Inter-channel group-delay walk-off rate in s/km per unit of spectral
    /// distance |k - w|: beta2 times the angular channel spacing.
    ///
    /// For the reference link this is -13.6 ps/km, the usual
    /// dispersion-times-wavelength-offset figure for 100 GHz neighbors.
    pub fn walkoff_s_per_km(&self) -> f64 {
        self.beta2_s2_per_km() * self.channel_spacing_rad_per_s
    }

    /// Checks every structural invariant that does not require waveform
    /// computation. The window-energy check lives in `pulse::check_window`.
    pub fn validate(&self) -> Result<()> {
        if self.num_users < 2 {
            return Err(Error::Config(format!(
                "num_users must be >= 2, got {}",
                self.num_users
            )));
        }
        if !(self.span_length_km > 0.0) {
            return Err(Error::Config("span_length_km must be > 0".into()));
        }
        if !(self.symbol_rate_baud > 0.0) {
            return Err(Error::Config("symbol_rate_baud must be > 0".into()));
        }
        if !(0.0..=1.0).contains(&self.rolloff) {
            return Err(Error::Config(format!(
                "rolloff must lie in [0, 1], got {}",
                self.rolloff
            )));
        }
        if self.samples_per_symbol < 2 || !self.samples_per_symbol.is_power_of_two() {
            return Err(Error::Config(format!(
                "samples_per_symbol must be a power of two >= 2, got {}",
                self.samples_per_symbol
            )));
        }
        if self.time_window_symbols < 4 {
            return Err(Error::Config("time_window_symbols must be >= 4".into()));
        }
        if self.z_steps < 2 {
            return Err(Error::Config(format!(
                "z_steps must be >= 2, got {}",
                self.z_steps
            )));
        }
        if !(self.gamma_per_w_km >= 0.0) {
            return Err(Error::Config("gamma_per_w_km must be >= 0".into()));
        }
        if !(self.alpha_db_per_km >= 0.0) {
            return Err(Error::Config("alpha_db_per_km must be >= 0".into()));
        }
        Ok(())
    }

    /// Parse the flat `key = value` config format. Unknown keys are
    /// rejected; all keys are optional and default to the reference link.
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut cfg = SystemConfig::reference_link();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Format(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = || -> Result<f64> {
                value
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("line {}: {}: {}", lineno + 1, key, e)))
            };
            let parse_usize = || -> Result<usize> {
                value
                    .parse::<usize>()
                    .map_err(|e| Error::Format(format!("line {}: {}: {}", lineno + 1, key, e)))
            };
            match key {
                "num_users" => cfg.num_users = parse_usize()?,
                "span_length_km" => cfg.span_length_km = parse_f64()?,
                "gamma_per_w_km" => cfg.gamma_per_w_km = parse_f64()?,
                "symbol_rate_gbaud" => cfg.symbol_rate_baud = parse_f64()? * 1e9,
                "alpha_db_per_km" => cfg.alpha_db_per_km = parse_f64()?,
                "beta2_ps2_per_km" => cfg.beta2_ps2_per_km = parse_f64()?,
                "rolloff" => cfg.rolloff = parse_f64()?,
                "channel_spacing_ghz" => {
                    cfg.channel_spacing_rad_per_s =
                        2.0 * std::f64::consts::PI * parse_f64()? * 1e9;
                }
                "noise_figure_db" => cfg.noise_figure_db = parse_f64()?,
                "memory_symbols" => cfg.memory = parse_usize()?,
                "samples_per_symbol" => cfg.samples_per_symbol = parse_usize()?,
                "time_window_symbols" => cfg.time_window_symbols = parse_usize()?,
                "z_steps" => cfg.z_steps = parse_usize()?,
                other => {
                    return Err(Error::Format(format!(
                        "line {}: unknown key `{}`",
                        lineno + 1,
                        other
                    )));
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Load a config file from disk.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_key_values(&text)
    }

    /// Serialize back to the flat key-value format.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{} = {}", k, v);
        };
        kv("num_users", self.num_users.to_string());
        kv("span_length_km", format!("{}", self.span_length_km));
        kv("gamma_per_w_km", format!("{}", self.gamma_per_w_km));
        kv(
            "symbol_rate_gbaud",
            format!("{}", self.symbol_rate_baud / 1e9),
        );
        kv("alpha_db_per_km", format!("{}", self.alpha_db_per_km));
        kv("beta2_ps2_per_km", format!("{}", self.beta2_ps2_per_km));
        kv("rolloff", format!("{}", self.rolloff));
        kv(
            "channel_spacing_ghz",
            format!("{}", self.channel_spacing_hz() / 1e9),
        );
        kv("noise_figure_db", format!("{}", self.noise_figure_db));
        kv("memory_symbols", self.memory.to_string());
        kv(
            "samples_per_symbol",
            self.samples_per_symbol.to_string(),
        );
        kv(
            "time_window_symbols",
            self.time_window_symbols.to_string(),
        );
        kv("z_steps", self.z_steps.to_string());
        out
    }

    /// Content hash over the subset of fields that determine the coupling
    /// coefficients. Used as the coefficient cache key.
    pub fn physics_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut fields = BTreeMap::new();
        fields.insert("num_users", self.num_users.to_string());
        fields.insert("span_length_km", format!("{:.17e}", self.span_length_km));
        fields.insert("gamma_per_w_km", format!("{:.17e}", self.gamma_per_w_km));
        fields.insert(
            "symbol_rate_baud",
            format!("{:.17e}", self.symbol_rate_baud),
        );
        fields.insert("alpha_db_per_km", format!("{:.17e}", self.alpha_db_per_km));
        fields.insert(
            "beta2_ps2_per_km",
            format!("{:.17e}", self.beta2_ps2_per_km),
        );
        fields.insert("rolloff", format!("{:.17e}", self.rolloff));
        fields.insert(
            "channel_spacing_rad_per_s",
            format!("{:.17e}", self.channel_spacing_rad_per_s),
        );
        fields.insert("memory", self.memory.to_string());
        fields.insert(
            "samples_per_symbol",
            self.samples_per_symbol.to_string(),
        );
        fields.insert(
            "time_window_symbols",
            self.time_window_symbols.to_string(),
        );
        fields.insert("z_steps", self.z_steps.to_string());
        let mut hasher = Sha256::new();
        for (k, v) in &fields {
            hasher.update(k.as_bytes());
            hasher.update(b"=");
            hasher.update(v.as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        digest.iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{:02x}", b);
            s
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_link_round_trips_through_key_values() {
        let cfg = SystemConfig::reference_link();
        let text = cfg.to_key_values();
        let parsed = SystemConfig::from_key_values(&text).unwrap();
        assert_eq!(cfg, parsed);
    }

    #[test]
    fn rejects_invalid_fields() {
        let mut cfg = SystemConfig::reference_link();
        cfg.num_users = 1;
        assert!(cfg.validate().is_err());

        let mut cfg = SystemConfig::reference_link();
        cfg.samples_per_symbol = 12;
        assert!(cfg.validate().is_err());

        let mut cfg = SystemConfig::reference_link();
        cfg.rolloff = 1.2;
        assert!(cfg.validate().is_err());

        assert!(SystemConfig::from_key_values("bogus_key = 3").is_err());
    }

    #[test]
    fn spacing_converts_ghz_to_angular() {
        let cfg = SystemConfig::from_key_values("channel_spacing_ghz = 50").unwrap();
        approx::assert_relative_eq!(cfg.channel_spacing_hz(), 50e9, max_relative = 1e-12);
        approx::assert_relative_eq!(
            cfg.channel_spacing_rad_per_s,
            2.0 * std::f64::consts::PI * 50e9,
            max_relative = 1e-12
        );
    }

    #[test]
    fn physics_hash_ignores_noise_figure() {
        let mut a = SystemConfig::reference_link();
        let h0 = a.physics_hash();
        a.noise_figure_db = 6.0;
        assert_eq!(h0, a.physics_hash());
        a.gamma_per_w_km = 0.0;
        assert_ne!(h0, a.physics_hash());
    }
}
