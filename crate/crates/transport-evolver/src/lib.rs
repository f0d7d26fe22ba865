//! Evolution of the density perturbation `θ(t, z, y)` in the moving frame
//! `z = x − ty` around Couette flow, with the cutoff `χ`, a background
//! gradient `ϱ̄′` and one clamped Stokes solve per mode and stage.

pub mod cutoff;
pub mod evolver;
pub mod linear;
pub mod profile;
pub mod run;
pub mod snapshot;

pub use cutoff::CutoffFunction;
pub use evolver::{Evolver, SimulationState, StepInfo, StreamModes, VelocityStats, CFL_LIMIT};
pub use linear::{linear_evolution, linear_evolution_modes};
pub use profile::{bump, BackgroundDensity, InitialData};
pub use run::{band_limit, run, RunConfig, SeriesRow, Trajectory};
pub use snapshot::{read_snapshot, write_snapshot, SNAPSHOT_MAGIC, SNAPSHOT_VERSION};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvolverError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("stokes solve: {0}")]
    Stokes(#[from] stokes_solver::StokesError),
    #[error("transform: {0}")]
    Fourier(String),
    #[error("support reached the wall band at t = {t}: |θ| = {value:e} at y = {y}")]
    SupportBreach { t: f64, y: f64, value: f64 },
    #[error("weights: {0}")]
    Weights(String),
    #[error("snapshot: {0}")]
    Snapshot(String),
}

pub type Result<T> = std::result::Result<T, EvolverError>;
