//! Shared numerics for the periodic channel 𝕋×[0,1].
//!
//! The x (or moving z) direction is periodic with period 2π and is treated
//! with FFTs. The y direction carries a uniform grid `y_j = j/(Ny-1)` that
//! includes both walls. Fields whose support stays away from the walls can be
//! extended periodically in y with period 1, which gives the frequency
//! lattice `η = 2πm` used by every weight and norm in the workspace.

pub mod dyadic;
pub mod fd;
pub mod freq;
pub mod grid;
pub mod norm;
pub mod transform;

pub use dyadic::{littlewood_paley_project, low_pass, Dyadic};
pub use freq::{
    critical_interval, extended_interval, floor_e, japanese, l1, CriticalInterval,
    ExtendedInterval,
};
pub use grid::{ChannelField, Grid, SpectralField};
pub use norm::{gevrey_norm, l2_norm_grid, l2_norm_spectral, CELL_MEASURE};
pub use transform::Transformer;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FourierError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: String, got: String },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, FourierError>;
