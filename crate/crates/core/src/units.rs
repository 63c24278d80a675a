//! Unit conversions and physical constants.
//!
//! Powers are expressed in dBm at every external interface and in watts
//! everywhere else; the conversion happens exactly once, here.

/// Planck constant, J·s (2019 SI exact value).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Assumed carrier frequency for amplifier noise sizing, Hz.
///
/// Corresponds to a 1550 nm C-band carrier. The assumption is recorded in
/// every exported result file.
pub const CARRIER_FREQUENCY_HZ: f64 = 193.414e12;

/// Convert a power in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

/// Convert a power in watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts / 1e-3).log10()
}

/// Convert a dB quantity to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Fiber loss: dB/km to the exponential power-attenuation rate in 1/km.
pub fn alpha_db_to_linear(alpha_db_per_km: f64) -> f64 {
    alpha_db_per_km * std::f64::consts::LN_10 / 10.0
}

/// log2(1 + x) evaluated without cancellation at small x.
pub fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}
