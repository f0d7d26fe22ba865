use crate::{Result, WeightError};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Constants of the multiplier `𝒜` and of `λ(t) = λ_∞ + δ̃/(1+t)^a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub c1: f64,
    pub c0: f64,
    pub lambda_inf: f64,
    pub delta_tilde: f64,
    pub a: f64,
    pub sigma: f64,
    /// Replaces `μ = 60(1+2C₁)` when set. Only meaningful at desk scale.
    pub mu_override: Option<f64>,
}

impl Default for WeightParams {
    /// The smallest admissible analytic constants: `C₁ = 1/2`, `C₀ = 6π`,
    /// `λ_∞ = 100(μ+C₀)`.
    fn default() -> Self {
        let c1 = 0.5;
        let c0 = 6.0 * PI;
        let mu = 60.0 * (1.0 + 2.0 * c1);
        Self {
            c1,
            c0,
            lambda_inf: 100.0 * (mu + c0),
            delta_tilde: 1.0,
            a: 0.5,
            sigma: 0.0,
            mu_override: None,
        }
    }
}

impl WeightParams {
    /// Small constants for which `𝒜` stays representable on simulation
    /// lattices. Violates the analytic inequalities on purpose.
    pub fn desk_scale() -> Self {
        Self {
            c1: 0.1,
            c0: 1.0,
            lambda_inf: 0.1,
            delta_tilde: 0.1,
            a: 0.5,
            sigma: 0.0,
            mu_override: Some(1.0),
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu_override.unwrap_or(60.0 * (1.0 + 2.0 * self.c1))
    }

    pub fn lambda(&self, t: f64) -> f64 {
        self.lambda_inf + self.delta_tilde / (1.0 + t).powf(self.a)
    }

    pub fn lambda_dot(&self, t: f64) -> f64 {
        -self.a * self.delta_tilde / (1.0 + t).powf(self.a + 1.0)
    }

    /// Basic sanity: positive `C₁`, `δ̃`, `a` and finite values.
    pub fn validate_basic(&self) -> Result<()> {
        let all = [self.c1, self.c0, self.lambda_inf, self.delta_tilde, self.a, self.sigma, self.mu()];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(WeightError::Parameter("non-finite weight constant".into()));
        }
        if self.c1 <= 0.0 || self.delta_tilde <= 0.0 || self.a <= 0.0 || self.mu() <= 0.0 || self.c0 <= 0.0 {
            return Err(WeightError::Parameter("C1, C0, mu, delta_tilde and a must be positive".into()));
        }
        Ok(())
    }

    /// The analytic requirements `C₀ ≥ 6π`, `λ_∞ ≥ 100(μ+C₀)`,
    /// `μ = 60(1+2C₁)` and, when `lambda_b` is given,
    /// `λ(0) + 3μ + 2C₀ + 1 < λ_b`.
    pub fn validate_analytic(&self, lambda_b: Option<f64>) -> Result<()> {
        self.validate_basic()?;
        if self.mu_override.is_some() {
            return Err(WeightError::Parameter("mu override is a desk-scale setting".into()));
        }
        if self.c0 < 6.0 * PI {
            return Err(WeightError::Parameter(format!("C0 = {} < 6π", self.c0)));
        }
        let need = 100.0 * (self.mu() + self.c0);
        if self.lambda_inf < need {
            return Err(WeightError::Parameter(format!(
                "lambda_inf = {} < 100(mu + C0) = {need}",
                self.lambda_inf
            )));
        }
        if let Some(lb) = lambda_b {
            let lhs = self.lambda(0.0) + 3.0 * self.mu() + 2.0 * self.c0 + 1.0;
            if lhs >= lb {
                return Err(WeightError::Parameter(format!("lambda(0) + 3mu + 2C0 + 1 = {lhs} >= lambda_b = {lb}")));
            }
        }
        Ok(())
    }
}
