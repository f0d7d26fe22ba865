//! Interior bumps, the background gradient `ϱ̄′` and the initial density.

use crate::{EvolverError, Result};
use fourier_core::{Grid, Transformer};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Steepness of the interior bump `exp(c − c/x)`.
pub const BUMP_C: f64 = 3.0;

/// `exp(c − c/x)` with `x = (y−a)(b−y)/((b−a)/2)²`, zero outside `(a, b)`;
/// equal to one at the midpoint.
pub fn bump(y: f64, a: f64, b: f64) -> f64 {
    if y <= a || y >= b {
        return 0.0;
    }
    let x = (y - a) * (b - y) / ((b - a) / 2.0).powi(2);
    (BUMP_C - BUMP_C / x).exp()
}

/// `(Σ_m |ĝ(η_m)|² e^{2λ|η_m|^{1/3}})^{1/2}` for a profile on the y grid,
/// over the periodic extension of `[0, 1]`.
pub fn profile_gevrey_norm(grid: Grid, g: &[f64], lambda: f64) -> f64 {
    let tr = Transformer::new(grid);
    let c: Vec<Complex64> = g.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    tr.y_forward(&c)
        .iter()
        .enumerate()
        .map(|(m, v)| v.norm_sqr() * (2.0 * lambda * grid.eta_at(m).abs().cbrt()).exp())
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackgroundDensity {
    pub delta: f64,
    pub sign: f64,
    /// Radius at which `‖ϱ̄′‖_{G^{λ;1/3}} = δ`.
    pub lambda_b: f64,
    pub rho_bar: Vec<f64>,
    pub rho_bar_prime: Vec<f64>,
}

impl BackgroundDensity {
    /// `ϱ̄′ = ±δ B/‖B‖_{G^{λ_b;1/3}}` with `B` the bump on `[3κ, 1−3κ]`;
    /// `ϱ̄` is its primitive vanishing at `y = 0`.
    pub fn build(grid: Grid, kappa: f64, delta: f64, sign: f64, lambda_b: f64) -> Result<Self> {
        if delta < 0.0 || !delta.is_finite() {
            return Err(EvolverError::Parameter(format!("delta = {delta} must be >= 0")));
        }
        if sign.abs() != 1.0 {
            return Err(EvolverError::Parameter(format!("background sign {sign} must be +1 or -1")));
        }
        let b: Vec<f64> = grid.ys().iter().map(|y| bump(*y, 3.0 * kappa, 1.0 - 3.0 * kappa)).collect();
        let scale = if delta == 0.0 { 0.0 } else { sign * delta / profile_gevrey_norm(grid, &b, lambda_b) };
        let rho_bar_prime: Vec<f64> = b.iter().map(|v| v * scale).collect();
        let h = grid.hy();
        let mut rho_bar = vec![0.0; grid.ny];
        for j in 1..grid.ny {
            rho_bar[j] = rho_bar[j - 1] + 0.5 * h * (rho_bar_prime[j - 1] + rho_bar_prime[j]);
        }
        Ok(Self { delta, sign, lambda_b, rho_bar, rho_bar_prime })
    }
}

/// `θ_in = ε Σ_n a_n cos(k_n z) B(y)` with `B` the bump on `[2κ, 1−2κ]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialData {
    pub epsilon: f64,
    /// `(k_n, a_n)`.
    pub modes: Vec<(i64, f64)>,
}

impl InitialData {
    pub fn single(epsilon: f64) -> Self {
        Self { epsilon, modes: vec![(1, 1.0)] }
    }

    /// z-mode profiles `θ̃_k(y_j)` indexed like the z transform.
    pub fn modes(&self, grid: Grid, kappa: f64) -> Result<Vec<Vec<Complex64>>> {
        if self.epsilon < 0.0 || !self.epsilon.is_finite() {
            return Err(EvolverError::Parameter(format!("epsilon = {} must be >= 0", self.epsilon)));
        }
        let b: Vec<f64> = grid.ys().iter().map(|y| bump(*y, 2.0 * kappa, 1.0 - 2.0 * kappa)).collect();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); grid.ny]; grid.nz];
        for &(k, a) in &self.modes {
            if k == 0 || k.unsigned_abs() as usize > grid.k_dealias() {
                return Err(EvolverError::Parameter(format!("initial mode k = {k} must satisfy 1 <= |k| <= {}", grid.k_dealias())));
            }
            for kk in [k, -k] {
                let ik = Grid::index_of(kk, grid.nz).expect("dealiased wavenumber is on the grid");
                for (o, bv) in out[ik].iter_mut().zip(&b) {
                    *o += 0.5 * self.epsilon * a * bv;
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_shape() {
        assert!((bump(0.5, 0.2, 0.8) - 1.0).abs() < 1e-14);
        assert_eq!(bump(0.2, 0.2, 0.8), 0.0);
        assert!(bump(0.21, 0.2, 0.8) < 1e-15);
    }

    #[test]
    fn background_norm_is_delta() {
        let g = Grid::new(32, 128).unwrap();
        let bg = BackgroundDensity::build(g, 0.1, 1e-3, -1.0, 0.5).unwrap();
        let n = profile_gevrey_norm(g, &bg.rho_bar_prime, 0.5);
        assert!((n - 1e-3).abs() < 1e-15);
        assert!(bg.rho_bar_prime.iter().all(|v| *v <= 0.0));
        let supp: Vec<f64> = g.ys().into_iter().zip(&bg.rho_bar_prime).filter(|(_, v)| **v != 0.0).map(|(y, _)| y).collect();
        assert!(supp.first().unwrap() >= &0.3 && supp.last().unwrap() <= &0.7);
    }
}
