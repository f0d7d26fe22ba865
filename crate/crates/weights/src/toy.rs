//! The discrete toy model
//! `∂_tθ̂(k) = ς Σ_{l=k±1} |lη|/(l²+(η−lt)²)² θ̂(l)` for fixed `η`.

use crate::theta::ThetaWeight;
use crate::{Result, WeightError};
use fourier_core::freq::max_resonant_k;
use serde::{Deserialize, Serialize};
use std::ops::RangeInclusive;

/// Coupling used when none is given: the low-frequency factor is a small
/// perturbation.
pub const DEFAULT_VARSIGMA: f64 = 0.1;

/// Lower bound used when calibrating `C₁` from the toy model.
pub const C1_MIN: f64 = 0.01;

const RTOL: f64 = 1e-9;
const ATOL: f64 = 1e-12;
const SAMPLES: usize = 2000;
/// Resonances have unit width in `t`; steps never exceed a quarter of it.
const H_MAX: f64 = 0.25;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToyTrajectory {
    pub eta: f64,
    pub varsigma: f64,
    pub ks: Vec<i64>,
    pub times: Vec<f64>,
    /// `amps[i][n]` is mode `ks[n]` at `times[i]`.
    pub amps: Vec<Vec<f64>>,
    /// Final over initial amplitude, per mode.
    pub growth: Vec<f64>,
}

impl ToyTrajectory {
    pub fn max_growth(&self) -> f64 {
        self.growth.iter().copied().fold(0.0, f64::max)
    }
}

fn coupling(l: i64, eta: f64, t: f64) -> f64 {
    let lf = l as f64;
    (lf * eta).abs() / (lf * lf + (eta - lf * t).powi(2)).powi(2)
}

fn rhs(ks: &[i64], eta: f64, varsigma: f64, t: f64, y: &[f64], out: &mut [f64]) {
    let n = ks.len();
    let c: Vec<f64> = ks.iter().map(|l| coupling(*l, eta, t)).collect();
    for i in 0..n {
        let mut s = 0.0;
        if i > 0 {
            s += c[i - 1] * y[i - 1];
        }
        if i + 1 < n {
            s += c[i + 1] * y[i + 1];
        }
        out[i] = varsigma * s;
    }
}

/// Integrate the toy model with all amplitudes starting at 1, using an
/// adaptive Dormand–Prince 5(4) scheme.
pub fn toy_model_simulate(eta: f64, k_range: RangeInclusive<i64>, varsigma: f64, t_span: (f64, f64)) -> Result<ToyTrajectory> {
    if varsigma < 0.0 || !varsigma.is_finite() {
        return Err(WeightError::Parameter(format!("varsigma = {varsigma} must be >= 0")));
    }
    let ks: Vec<i64> = k_range.collect();
    if ks.is_empty() {
        return Err(WeightError::Parameter("empty k range".into()));
    }
    let (t0, t1) = t_span;
    if !(t1 > t0) {
        return Err(WeightError::Parameter(format!("empty time span [{t0}, {t1}]")));
    }
    let n = ks.len();
    let mut y = vec![1.0; n];
    let mut t = t0;
    let mut h = 1e-3_f64.min(t1 - t0);
    let mut times = vec![t0];
    let mut amps = vec![y.clone()];
    let record_dt = (t1 - t0) / SAMPLES as f64;
    let mut next_record = t0 + record_dt;

    // Dormand–Prince tableau.
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let mut stages = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut steps = 0usize;
    while t < t1 {
        h = h.min(t1 - t).min(H_MAX);
        if h < 1e-12 * t1.abs().max(1.0) {
            return Err(WeightError::Integrator(format!("step size underflow at t = {t}")));
        }
        steps += 1;
        if steps > 50_000_000 {
            return Err(WeightError::Integrator("step budget exhausted".into()));
        }
        for s in 0..7 {
            for i in 0..n {
                tmp[i] = y[i] + h * (0..s).map(|r| A[s][r] * stages[r][i]).sum::<f64>();
            }
            let (_, rest) = stages.split_at_mut(s);
            rhs(&ks, eta, varsigma, t + C[s] * h, &tmp, &mut rest[0]);
        }
        let mut err: f64 = 0.0;
        let mut y5 = vec![0.0; n];
        for i in 0..n {
            let d5: f64 = (0..7).map(|s| B5[s] * stages[s][i]).sum();
            let d4: f64 = (0..7).map(|s| B4[s] * stages[s][i]).sum();
            y5[i] = y[i] + h * d5;
            let sc = ATOL + RTOL * y[i].abs().max(y5[i].abs());
            err = err.max((h * (d5 - d4)).abs() / sc);
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            if t >= next_record || t >= t1 {
                times.push(t);
                amps.push(y.clone());
                next_record += record_dt;
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    let growth = y.clone();
    Ok(ToyTrajectory { eta, varsigma, ks, times, amps, growth })
}

/// Modes `1..=E(η^{1/3})+2` over `[t_{E,η}, 2η]`, the full growth period.
pub fn toy_model_full(eta: f64, varsigma: f64) -> Result<ToyTrajectory> {
    let e = max_resonant_k(eta).max(1);
    let w = ThetaWeight::build(eta, 1.0);
    toy_model_simulate(eta, 1..=e + 2, varsigma, (w.t_start(), 2.0 * eta.abs()))
}

/// Growth of the largest neighbour over one passage through `Ĩ_{k,η}`.
pub fn single_passage(eta: f64, k: i64, varsigma: f64) -> Result<f64> {
    let ea = eta.abs();
    let kf = k as f64;
    let t0 = 2.0 * ea / (2.0 * kf + 1.0);
    let t1 = 2.0 * ea / (2.0 * kf - 1.0);
    let lo = (k - 1).max(1);
    let tr = toy_model_simulate(ea, lo..=k + 1, varsigma, (t0, t1))?;
    Ok(tr
        .ks
        .iter()
        .zip(&tr.growth)
        .filter(|(l, _)| **l != k)
        .map(|(_, g)| *g)
        .fold(0.0, f64::max))
}

/// `C₁` matched to `ς`: the smallest value (at least [`C1_MIN`]) for which
/// the `k = 1` jump `(2η)^{1+2C₁}` of `Θ` covers the toy model's growth
/// over one passage through `Ĩ_{1,η}`.
pub fn calibrate_c1(eta: f64, varsigma: f64) -> Result<f64> {
    let g = single_passage(eta, 1, varsigma)?;
    let ratio = g.ln() / (2.0 * eta.abs()).ln();
    Ok(((ratio - 1.0) / 2.0).max(C1_MIN))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coupling_is_constant() {
        let tr = toy_model_simulate(1000.0, 1..=12, 0.0, (50.0, 2000.0)).unwrap();
        assert!(tr.growth.iter().all(|g| *g == 1.0));
    }

    #[test]
    fn integrates_exact_single_coupling() {
        // Two modes: θ₂' = ς c₁(t) θ₁, θ₁' = ς c₂(t) θ₂ with c₂ tiny near t = η.
        let eta = 200.0;
        let tr = toy_model_simulate(eta, 1..=2, 1e-3, (150.0, 250.0)).unwrap();
        // To first order θ₂ gains ς ∫ c₁ dt ≈ ς (π/2) η.
        let expected = 1.0 + 1e-3 * std::f64::consts::FRAC_PI_2 * eta;
        assert!((tr.growth[1] / expected - 1.0).abs() < 0.02, "{:?}", tr.growth);
    }
}
