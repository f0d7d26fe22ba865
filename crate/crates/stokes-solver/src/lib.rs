//! Per-mode Stokes solves in the channel and the Fourier kernels built on
//! them.
//!
//! For each x-wavenumber `k ≠ 0` the stream function solves
//! `(∂_y² − k²)² ψ̃_k = ik ρ̃_k` with `ψ̃_k = ∂_yψ̃_k = 0` at `y = 0, 1`.
//! [`bvp`] is a sixth-order finite-difference solver and is treated as the
//! reference. [`green`] applies the explicit Green's function and is
//! validated against it.

pub mod banded;
pub mod bvp;
pub mod green;
pub mod kernel;
pub mod velocity;

pub use bvp::{boundary_traces, solve_mode_bvp, BvpCache, BvpSolver};
pub use green::{d_k, solve_mode_green, GreenKernel};
pub use kernel::{envelope_fit, tail_rate, EnvelopeFit, FourierKernelG, FIT_SLACK};
pub use velocity::{velocity_from_stream, velocity_modes};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StokesError {
    #[error("k = 0 has no Stokes forcing")]
    ZeroMode,
    #[error("singular system at column {0}")]
    Singular(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("transform: {0}")]
    Fourier(String),
}

pub type Result<T> = std::result::Result<T, StokesError>;
