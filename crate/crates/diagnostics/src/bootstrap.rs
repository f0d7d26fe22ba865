//! Monitors for the bootstrap quantities: the weighted energy, the
//! accumulated CK integrals and the support margin.

use crate::fit::fit_power;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Allowed growth of `ℰ` over its maximum on `[0, T/10]`.
pub const ENERGY_GROWTH_LIMIT: f64 = 2.0;
/// The CK integral has plateaued when at most this fraction of its final
/// value accrues on `[T/2, T]`.
pub const PLATEAU_FRACTION: f64 = 0.25;
/// Target and tolerance for the log-log slope of `max ℰ` against `ε`.
pub const SWEEP_SLOPE: f64 = 2.0;
pub const SWEEP_TOLERANCE: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSample {
    pub t: f64,
    pub energy: f64,
    /// `∫₀ᵗ (CK_λ + CK_Θ + CK_Λ)`.
    pub ck_integral: f64,
    /// Distance from the support to the nearer wall, if the field is nonzero.
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapReport {
    pub epsilon: f64,
    pub max_energy: f64,
    pub max_energy_over_eps2: f64,
    pub early_max_energy: f64,
    /// `max ℰ / max_{t ≤ T/10} ℰ`, zero for a zero trajectory.
    pub energy_growth: f64,
    pub ck_integral: f64,
    pub ck_over_eps2: f64,
    /// Fraction of the final CK integral accrued on `[T/2, T]`.
    pub ck_late_fraction: f64,
    pub min_margin: Option<f64>,
    pub energy_bounded: bool,
    pub ck_plateau: bool,
}

impl BootstrapReport {
    pub fn pass(&self) -> bool {
        self.energy_bounded && self.ck_plateau
    }
}

fn over_eps2(v: f64, eps: f64) -> f64 {
    if eps > 0.0 {
        v / (eps * eps)
    } else {
        0.0
    }
}

pub fn bootstrap_monitor(epsilon: f64, samples: &[BootstrapSample]) -> BootstrapReport {
    let t_max = samples.last().map_or(0.0, |s| s.t);
    let max_energy = samples.iter().map(|s| s.energy).fold(0.0, f64::max);
    let early_max_energy = samples.iter().filter(|s| s.t <= t_max / 10.0).map(|s| s.energy).fold(0.0, f64::max);
    let energy_growth = if max_energy == 0.0 { 0.0 } else { max_energy / early_max_energy };
    let ck_integral = samples.last().map_or(0.0, |s| s.ck_integral);
    let ck_half = samples.iter().rfind(|s| s.t <= t_max / 2.0).map_or(0.0, |s| s.ck_integral);
    let ck_late_fraction = if ck_integral > 0.0 { (ck_integral - ck_half) / ck_integral } else { 0.0 };
    let min_margin = samples.iter().filter_map(|s| s.margin).reduce(f64::min);
    BootstrapReport {
        epsilon,
        max_energy,
        max_energy_over_eps2: over_eps2(max_energy, epsilon),
        early_max_energy,
        energy_growth,
        ck_integral,
        ck_over_eps2: over_eps2(ck_integral, epsilon),
        ck_late_fraction,
        min_margin,
        energy_bounded: energy_growth <= ENERGY_GROWTH_LIMIT,
        ck_plateau: ck_late_fraction <= PLATEAU_FRACTION,
    }
}

/// Log-log regression of `max ℰ` on `ε` across runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepFit {
    pub slope: f64,
    /// Fitted `C` in `max ℰ ≈ 4Cε^slope`.
    pub c_fit: f64,
    pub pass: bool,
}

pub fn epsilon_sweep(reports: &[BootstrapReport]) -> Result<SweepFit> {
    let pts: Vec<(f64, f64)> = reports.iter().map(|r| (r.epsilon, r.max_energy)).collect();
    let (slope, icept) = fit_power(&pts)?;
    Ok(SweepFit { slope, c_fit: icept.exp() / 4.0, pass: (slope - SWEEP_SLOPE).abs() <= SWEEP_TOLERANCE })
}
