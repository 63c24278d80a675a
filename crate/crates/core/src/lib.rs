//! Numerical library for capacity bounds of the K-user dispersive nonlinear
//! optical WDM interference channel under peak power constraints.
//!
//! The crate is organized around five building blocks:
//!
//! * [`coeffs`] computes the dispersed pulse waveform and the cross-phase
//!   modulation coupling coefficients by numerical quadrature.
//! * [`channel`] simulates the finite-memory perturbative channel model and
//!   generates amplifier noise.
//! * [`bounds`] evaluates the treat-interference-as-noise lower bound, the
//!   genie-aided outer bound, the entropy-power-inequality inner bound and
//!   Monte-Carlo rates for PSK interferers.
//! * [`regions`] assembles K-dimensional rate-region polytopes with
//!   membership queries and export for plotting.
//! * [`ssfm`] validates the simplified model against a split-step Fourier
//!   simulation of the nonlinear Schrödinger equation with a full coherent
//!   receiver chain.

pub mod bounds;
pub mod channel;
pub mod coeffs;
pub mod config;
pub mod error;
pub mod export;
mod fft;
pub mod laws;
pub mod pulse;
pub mod regions;
pub mod ssfm;
pub mod units;

pub use bounds::{
    aggregate_gain, inner_bound, nli_variance, outer_bound, psk_interferer_rate, sweep_bounds,
    tin_bound, BoundCurve, NliVarianceEstimate, PskRateEstimate,
};
pub use channel::{
    ase_variance, simulate_first_order, simulate_simplified, FirstOrderTable, NoiseModel,
    SymbolFrame,
};
pub use coeffs::{compute_coefficient_table, compute_s, CoefficientTable};
pub use config::SystemConfig;
pub use error::{Error, Result};
pub use laws::InputLaw;
pub use pulse::{propagate_dispersion, rrc_pulse, SampledWaveform};
pub use regions::{
    contains, outer_region, timeshare_region, timeshare_vertices, tin_region, Halfspace,
    RateRegion, RateTuple, RegionKind,
};
pub use ssfm::{
    estimate_mi, fig8_experiment, receiver_chain, ssfm_propagate, wdm_mux, FieldGrid, Fig8Row,
    MiEstimate, MiEstimator, Scenario, SsfmPlan,
};
