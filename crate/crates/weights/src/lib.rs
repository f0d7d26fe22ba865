//! Time-dependent Fourier multipliers for the Gevrey-3 energy.
//!
//! [`theta`] and [`lambda`] hold the closed-form weights `Θ` and `Λ` for one
//! y-frequency, [`multiplier`] combines them into `𝒜` and its companions,
//! and [`energy`] evaluates `ℰ(t)` with the CK terms. [`toy`] integrates
//! the discrete toy model the weights are designed to dominate, and
//! [`lemmas`] samples the multiplier lemmas for implied constants.

pub mod energy;
pub mod lambda;
pub mod lemmas;
pub mod multiplier;
pub mod paraproduct;
pub mod params;
pub mod theta;
pub mod toy;

pub use energy::{energy_and_ck, EnergyCk};
pub use lambda::LambdaWeight;
pub use lemmas::{verify_lemmas, LemmaConfig, LemmaReport};
pub use multiplier::{log_multipliers, LogMultipliers, WeightTable};
pub use paraproduct::{paraproduct_check, ParaproductReport};
pub use params::WeightParams;
pub use theta::ThetaWeight;
pub use toy::{calibrate_c1, toy_model_full, toy_model_simulate, ToyTrajectory};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("integrator: {0}")]
    Integrator(String),
    #[error("no admissible samples: {0}")]
    Coverage(String),
}

pub type Result<T> = std::result::Result<T, WeightError>;
