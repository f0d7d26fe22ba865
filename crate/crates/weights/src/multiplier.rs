//! `𝒜_k(t,η) = e^{λ(t)|k,η|^{1/3}} ⟨k,η⟩^σ 𝒥_k ℳ_k` and its companions,
//! evaluated in log form since the analytic constants overflow `f64`.

use crate::lambda::LambdaWeight;
use crate::params::WeightParams;
use crate::theta::ThetaWeight;
use fourier_core::freq::{japanese, l1};
use fourier_core::Grid;
use rayon::prelude::*;

/// `log(e^a + e^b)`.
pub fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMultipliers {
    pub a: f64,
    pub a_theta: f64,
    pub a_lambda: f64,
    pub j: f64,
    pub m: f64,
}

/// Log values of `𝒜`, `𝒜^Θ`, `𝒜^Λ`, `𝒥`, `ℳ` at `(t,k,η)`. The weights
/// must have been built for this `η`.
pub fn log_multipliers(p: &WeightParams, t: f64, k: i64, theta: &ThetaWeight, lambda: &LambdaWeight) -> LogMultipliers {
    let eta = theta.eta;
    debug_assert_eq!(eta.abs(), lambda.eta.abs());
    let mu = p.mu();
    let ce = eta.abs().cbrt();
    let ck = (k.unsigned_abs() as f64).cbrt();
    let base = p.lambda(t) * l1(k, eta).cbrt() + p.sigma * japanese(l1(k, eta)).ln();
    let j_tilde = mu * ce - theta.log_theta(k, t);
    let m_tilde = 0.5 * p.c0 * ce - lambda.log_value(t);
    let j = log_add(j_tilde, mu * ck);
    let m = log_add(m_tilde, 0.5 * p.c0 * ck);
    LogMultipliers { a: base + j + m, a_theta: base + j_tilde + m, a_lambda: base + j + m_tilde, j, m }
}

/// `log 𝒥_k(t,η)` without building a [`LambdaWeight`].
pub fn log_j(p: &WeightParams, t: f64, k: i64, theta: &ThetaWeight) -> f64 {
    let mu = p.mu();
    log_add(mu * theta.eta.abs().cbrt() - theta.log_theta(k, t), mu * (k.unsigned_abs() as f64).cbrt())
}

/// `Θ` and `Λ` for every `η` of a grid's y-frequency lattice.
#[derive(Debug, Clone)]
pub struct WeightTable {
    pub params: WeightParams,
    pub grid: Grid,
    pub theta: Vec<ThetaWeight>,
    pub lambda: Vec<LambdaWeight>,
}

impl WeightTable {
    pub fn build(params: WeightParams, grid: Grid) -> Self {
        let etas: Vec<f64> = (0..grid.my()).map(|j| grid.eta_at(j)).collect();
        let theta = etas.par_iter().map(|e| ThetaWeight::build(*e, params.c1)).collect();
        let lambda = etas.par_iter().map(|e| LambdaWeight::build(*e)).collect();
        Self { params, grid, theta, lambda }
    }

    /// Multipliers at lattice index `(ik, jm)`.
    pub fn at(&self, t: f64, ik: usize, jm: usize) -> LogMultipliers {
        log_multipliers(&self.params, t, self.grid.k_at(ik), &self.theta[jm], &self.lambda[jm])
    }

    /// `∂_t log Θ_k` and `∂_t log Λ` at lattice index `(ik, jm)`.
    pub fn rates(&self, t: f64, ik: usize, jm: usize) -> (f64, f64) {
        (self.theta[jm].dlog_theta(self.grid.k_at(ik), t), self.lambda[jm].dlog(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_value_is_four() {
        let p = WeightParams::desk_scale();
        let th = ThetaWeight::build(0.0, p.c1);
        let la = LambdaWeight::build(0.0);
        for t in [0.0, 3.0, 100.0] {
            let m = log_multipliers(&p, t, 0, &th, &la);
            assert!((m.a.exp() - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn log_add_matches_direct() {
        assert!((log_add(1.0, 2.0) - (1f64.exp() + 2f64.exp()).ln()).abs() < 1e-14);
        assert_eq!(log_add(f64::NEG_INFINITY, 3.0), 3.0);
        assert!((log_add(800.0, 800.0) - (800.0 + 2f64.ln())).abs() < 1e-12);
    }
}
