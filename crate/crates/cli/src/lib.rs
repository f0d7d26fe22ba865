//! Experiment driver for the Stokes-transport simulator: configuration,
//! subcommands and artifact writing.

pub mod config;
pub mod experiments;
pub mod output;

pub use config::{ConfigError, Experiment, ExperimentConfig, Overrides};
pub use experiments::run_experiment;
pub use output::{all_pass, Check};

/// Environment variable holding the worker count for the inner pools.
pub const WORKERS_ENV: &str = "STX_WORKERS";
