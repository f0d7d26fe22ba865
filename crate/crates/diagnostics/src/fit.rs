use crate::{DiagnosticsError, Result};
use serde::{Deserialize, Serialize};

/// Fewest samples a decay fit accepts.
pub const MIN_SAMPLES: usize = 10;

/// `⟨t⟩ = sqrt(1 + t²)`.
pub fn bracket(t: f64) -> f64 {
    t.hypot(1.0)
}

/// `[T/10, T/2]`.
pub fn default_window(t_max: f64) -> (f64, f64) {
    (t_max / 10.0, t_max / 2.0)
}

/// `[T/8, T/2]`, kept away from the reference time `T` itself.
pub fn scattering_window(t_max: f64) -> (f64, f64) {
    (t_max / 8.0, t_max / 2.0)
}

/// `value ≈ A⟨t⟩^p` fitted on a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub t0: f64,
    pub t1: f64,
    pub exponent: f64,
    pub amplitude: f64,
    /// RMS of the log residuals.
    pub residual: f64,
    pub samples: usize,
}

impl DecayFit {
    pub fn within(&self, target: f64, tol: f64) -> bool {
        (self.exponent - target).abs() <= tol
    }
}

/// Least-squares line through `(x, y)`: `(slope, intercept, rms residual)`.
fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let icept = my - slope * mx;
    let ss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - icept - slope * x).powi(2)).sum();
    (slope, icept, (ss / n).sqrt())
}

/// Ordinary least squares of `log value` on `log⟨t⟩` over samples with
/// `t ∈ [t0, t1]`.
pub fn fit_decay(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    let (t0, t1) = window;
    let inside: Vec<(f64, f64)> = series.iter().copied().filter(|(t, _)| *t >= t0 && *t <= t1).collect();
    if inside.len() < MIN_SAMPLES {
        return Err(DiagnosticsError::TooFewSamples { t0, t1, found: inside.len(), need: MIN_SAMPLES });
    }
    if let Some(&(t, value)) = inside.iter().find(|(_, v)| !(*v > 0.0) || !v.is_finite()) {
        return Err(DiagnosticsError::NonPositive { t, value });
    }
    let xs: Vec<f64> = inside.iter().map(|(t, _)| bracket(*t).ln()).collect();
    let ys: Vec<f64> = inside.iter().map(|(_, v)| v.ln()).collect();
    let (exponent, icept, residual) = ols(&xs, &ys);
    Ok(DecayFit { t0, t1, exponent, amplitude: icept.exp(), residual, samples: inside.len() })
}

/// Plain log-log slope of `y` against `x` (no bracket), for parameter sweeps.
/// Returns `(slope, intercept)`.
pub fn fit_power(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(DiagnosticsError::Input(format!("{} points, need 2", points.len())));
    }
    if let Some(&(t, value)) = points.iter().find(|(x, y)| !(*x > 0.0) || !(*y > 0.0)) {
        return Err(DiagnosticsError::NonPositive { t, value });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (s, c, _) = ols(&xs, &ys);
    Ok((s, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        assert_eq!(default_window(50.0), (5.0, 25.0));
        assert_eq!(scattering_window(80.0), (10.0, 40.0));
    }

    #[test]
    fn rejects_short_and_nonpositive() {
        let s: Vec<(f64, f64)> = (0..20).map(|i| (i as f64, 1.0)).collect();
        assert!(matches!(fit_decay(&s, (0.0, 5.0)), Err(DiagnosticsError::TooFewSamples { .. })));
        let mut z = s.clone();
        z[7].1 = 0.0;
        assert!(matches!(fit_decay(&z, (0.0, 19.0)), Err(DiagnosticsError::NonPositive { .. })));
    }
}
