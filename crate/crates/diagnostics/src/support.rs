use serde::{Deserialize, Serialize};

/// Support threshold relative to the initial maximum of `|θ|`.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

/// Smallest and largest `y` whose row maximum exceeds `threshold`, or `None`
/// when no row does.
pub fn support_bounds(ys: &[f64], row_max: &[f64], threshold: f64) -> Option<(f64, f64)> {
    let mut hit = ys.iter().zip(row_max).filter(|(_, m)| **m > threshold).map(|(y, _)| *y);
    let lo = hit.next()?;
    let hi = hit.next_back().unwrap_or(lo);
    Some((lo, hi))
}

/// `[supp_lo(t), supp_hi(t)]` over a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportTrace {
    pub threshold: f64,
    pub times: Vec<f64>,
    /// `None` where the field is below threshold everywhere.
    pub bounds: Vec<Option<(f64, f64)>>,
}

impl SupportTrace {
    /// Threshold `1e-10 · max|θ_in|`.
    pub fn new(initial_max: f64) -> Self {
        Self { threshold: SUPPORT_THRESHOLD * initial_max, times: Vec::new(), bounds: Vec::new() }
    }

    /// Record the support of a field given by its per-row maxima.
    pub fn record(&mut self, t: f64, ys: &[f64], row_max: &[f64]) -> Option<(f64, f64)> {
        let b = if self.threshold > 0.0 { support_bounds(ys, row_max, self.threshold) } else { None };
        self.times.push(t);
        self.bounds.push(b);
        b
    }

    /// Distance from the support to the nearer wall.
    pub fn margin(b: (f64, f64)) -> f64 {
        b.0.min(1.0 - b.1)
    }

    pub fn initial_margin(&self) -> Option<f64> {
        self.bounds.first().copied().flatten().map(Self::margin)
    }

    pub fn min_margin(&self) -> Option<f64> {
        self.bounds.iter().flatten().map(|b| Self::margin(*b)).reduce(f64::min)
    }

    /// Largest outward movement of either edge relative to the first sample.
    pub fn max_expansion(&self) -> f64 {
        let Some((lo0, hi0)) = self.bounds.first().copied().flatten() else {
            return 0.0;
        };
        self.bounds
            .iter()
            .flatten()
            .map(|(lo, hi)| (lo0 - lo).max(hi - hi0).max(0.0))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_of_a_bump() {
        let ys: Vec<f64> = (0..11).map(|j| j as f64 / 10.0).collect();
        let m = [0.0, 0.0, 1e-3, 1.0, 0.5, 0.0, 2e-12, 0.2, 0.0, 0.0, 0.0];
        assert_eq!(support_bounds(&ys, &m, 1e-10), Some((0.2, 0.7)));
        assert_eq!(support_bounds(&ys, &[0.0; 11], 1e-10), None);
    }

    #[test]
    fn trace_margins() {
        let ys = [0.0, 0.25, 0.5, 0.75, 1.0];
        let mut tr = SupportTrace::new(1.0);
        tr.record(0.0, &ys, &[0.0, 0.0, 1.0, 0.0, 0.0]);
        tr.record(1.0, &ys, &[0.0, 1.0, 1.0, 0.0, 0.0]);
        assert_eq!(tr.initial_margin(), Some(0.5));
        assert_eq!(tr.min_margin(), Some(0.25));
        assert_eq!(tr.max_expansion(), 0.25);
    }

    #[test]
    fn zero_initial_data_has_no_support() {
        let mut tr = SupportTrace::new(0.0);
        assert_eq!(tr.record(0.0, &[0.0, 1.0], &[0.0, 0.0]), None);
        assert_eq!(tr.min_margin(), None);
        assert_eq!(tr.max_expansion(), 0.0);
    }
}
