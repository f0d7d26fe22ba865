//! Turning simulation time series into fitted exponents and pass/fail flags.
//!
//! Everything here is a pure function of the samples it is given, so a saved
//! trajectory re-analysed later produces the same report bit for bit.

pub mod bootstrap;
pub mod fit;
pub mod scattering;
pub mod support;

pub use bootstrap::{bootstrap_monitor, epsilon_sweep, BootstrapReport, BootstrapSample, SweepFit};
pub use fit::{bracket, default_window, fit_decay, fit_power, scattering_window, DecayFit, MIN_SAMPLES};
pub use scattering::{scattering_profile, ScatteringProfile};
pub use support::{support_bounds, SupportTrace, SUPPORT_THRESHOLD};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("window [{t0}, {t1}] holds {found} samples, need at least {need}")]
    TooFewSamples { t0: f64, t1: f64, found: usize, need: usize },
    #[error("non-positive value {value} at t = {t}")]
    NonPositive { t: f64, value: f64 },
    #[error("need at least {need} snapshots, got {found}")]
    TooFewSnapshots { found: usize, need: usize },
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, DiagnosticsError>;
