use crate::fit::{fit_decay, scattering_window, DecayFit};
use crate::{DiagnosticsError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringProfile {
    /// Time of the snapshot used as `ρ_∞`.
    pub t_final: f64,
    /// `(t, ‖θ(t) − ρ_∞‖)` for every earlier snapshot.
    pub convergence: Vec<(f64, f64)>,
    /// `None` when the trajectory is stationary (the series is all zero).
    pub fit: Option<DecayFit>,
    /// Norm of `ρ_∞` as measured by the caller's Gevrey norm.
    pub gevrey_norm: f64,
}

impl ScatteringProfile {
    pub fn stationary(&self) -> bool {
        self.convergence.iter().all(|(_, d)| *d == 0.0)
    }
}

/// Take the last snapshot as `ρ_∞`, measure every earlier snapshot against
/// it with `distance` and fit the decay on `window` (default
/// `[T/8, T/2]`).
pub fn scattering_profile<S>(
    snapshots: &[(f64, S)],
    distance: impl Fn(&S, &S) -> f64,
    gevrey: impl Fn(&S) -> f64,
    window: Option<(f64, f64)>,
) -> Result<ScatteringProfile> {
    if snapshots.len() < 3 {
        return Err(DiagnosticsError::TooFewSnapshots { found: snapshots.len(), need: 3 });
    }
    let (t_final, last) = snapshots.last().map(|(t, s)| (*t, s)).expect("checked above");
    let convergence: Vec<(f64, f64)> = snapshots[..snapshots.len() - 1].iter().map(|(t, s)| (*t, distance(s, last))).collect();
    let mut out = ScatteringProfile { t_final, convergence, fit: None, gevrey_norm: gevrey(last) };
    if !out.stationary() {
        out.fit = Some(fit_decay(&out.convergence, window.unwrap_or_else(|| scattering_window(t_final)))?);
    }
    Ok(out)
}
