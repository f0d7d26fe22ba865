//! The cutoff `χ`: one on `[κ, 1−κ]`, supported in `[κ/2, 1−κ/2]`, built
//! from the ramp `f(x) = exp(−c/x^p)`, `p = (1+s₀)/(1−s₀)`.
//!
//! Derivatives are exact: every quantity is carried as a truncated Taylor
//! series in the offset from the evaluation point.

use crate::{EvolverError, Result};
use fourier_core::Grid;
use serde::{Deserialize, Serialize};

/// Highest derivative order tracked for the growth fit.
pub const MAX_ORDER: usize = 8;
/// Ramp constant `c` in `exp(−c/x^p)`.
pub const RAMP_C: f64 = 0.4;
/// Points per transition layer used for the derivative-growth fit.
const FIT_SAMPLES: usize = 4000;

type Series = [f64; MAX_ORDER + 1];

fn mul(a: &Series, b: &Series) -> Series {
    let mut c = [0.0; MAX_ORDER + 1];
    for n in 0..=MAX_ORDER {
        c[n] = (0..=n).map(|j| a[j] * b[n - j]).sum();
    }
    c
}

fn div(a: &Series, b: &Series) -> Series {
    let mut c = [0.0; MAX_ORDER + 1];
    for n in 0..=MAX_ORDER {
        let s: f64 = (1..=n).map(|j| b[j] * c[n - j]).sum();
        c[n] = (a[n] - s) / b[0];
    }
    c
}

fn exp(a: &Series) -> Series {
    let mut b = [0.0; MAX_ORDER + 1];
    b[0] = a[0].exp();
    for n in 1..=MAX_ORDER {
        b[n] = (1..=n).map(|j| j as f64 * a[j] * b[n - j]).sum::<f64>() / n as f64;
    }
    b
}

/// Taylor coefficients of `exp(−c/x^p)` at `x0`.
fn ramp(x0: f64, c: f64, p: f64) -> Series {
    let mut out = [0.0; MAX_ORDER + 1];
    if x0 <= 0.0 || c * x0.powf(-p) > 700.0 {
        return out;
    }
    // (x0+h)^{-p} = x0^{-p} Σ binom(−p, n) (h/x0)^n
    let mut binom = 1.0;
    for (n, o) in out.iter_mut().enumerate() {
        if n > 0 {
            binom *= (-p - (n as f64 - 1.0)) / n as f64;
        }
        *o = -c * x0.powf(-p) * binom * x0.powi(-(n as i32));
    }
    exp(&out)
}

/// `f(x)/(f(x)+f(1−x))` with its Taylor coefficients.
fn step(x0: f64, c: f64, p: f64) -> Series {
    let a = ramp(x0, c, p);
    let mut b = ramp(1.0 - x0, c, p);
    for (n, v) in b.iter_mut().enumerate() {
        if n % 2 == 1 {
            *v = -*v;
        }
    }
    let mut den = a;
    den.iter_mut().zip(&b).for_each(|(d, v)| *d += v);
    div(&a, &den)
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffFunction {
    pub kappa: f64,
    pub s0: f64,
    /// Ramp exponent `p`.
    pub p: f64,
    /// Fitted `M` of `|χ^{(m)}| ≤ M^m (m!)^{2/(s₀+1)} (m+1)^{−2}`, `m ≤ 8`.
    pub m_fit: f64,
    /// `max_y |χ^{(m)}|` for `m = 0..=8`.
    pub growth: Vec<f64>,
    /// `χ^{(m)}(y_j)` for `m = 0..=4`.
    pub derivs: Vec<Vec<f64>>,
}

impl CutoffFunction {
    /// Taylor coefficients of `χ` at `y`.
    fn series(kappa: f64, p: f64, y: f64) -> Series {
        let w = kappa / 2.0;
        let mut left = step((y - w) / w, RAMP_C, p);
        let mut right = step((1.0 - w - y) / w, RAMP_C, p);
        for n in 0..=MAX_ORDER {
            left[n] *= w.powi(-(n as i32));
            right[n] *= (-1.0 / w).powi(n as i32);
        }
        mul(&left, &right)
    }

    /// `χ^{(m)}(y)` for `m ≤ 8`.
    pub fn eval(&self, y: f64, m: usize) -> f64 {
        assert!(m <= MAX_ORDER);
        Self::series(self.kappa, self.p, y)[m] * factorial(m)
    }

    pub fn build(kappa: f64, s0: f64, grid: Grid) -> Result<Self> {
        if !(kappa > 0.0 && kappa <= 0.1) {
            return Err(EvolverError::Parameter(format!("kappa = {kappa} not in (0, 1/10]")));
        }
        if !(s0 > 0.0 && s0 < 1.0) {
            return Err(EvolverError::Parameter(format!("s0 = {s0} not in (0, 1)")));
        }
        grid.check_resolves(kappa).map_err(|e| EvolverError::Resolution(e.to_string()))?;
        let p = (1.0 + s0) / (1.0 - s0);
        let derivs = (0..=4)
            .map(|m| grid.ys().iter().map(|y| Self::series(kappa, p, *y)[m] * factorial(m)).collect())
            .collect();
        let w = kappa / 2.0;
        let mut growth = vec![0.0f64; MAX_ORDER + 1];
        for i in 0..=FIT_SAMPLES {
            let y = w + w * i as f64 / FIT_SAMPLES as f64;
            for y in [y, 1.0 - y] {
                let s = Self::series(kappa, p, y);
                for m in 0..=MAX_ORDER {
                    growth[m] = growth[m].max((s[m] * factorial(m)).abs());
                }
            }
        }
        let m_fit = (1..=MAX_ORDER)
            .map(|m| {
                let bound = factorial(m).powf(2.0 / (s0 + 1.0)) / ((m + 1) as f64).powi(2);
                (growth[m] / bound).powf(1.0 / m as f64)
            })
            .fold(0.0, f64::max);
        Ok(Self { kappa, s0, p, m_fit, growth, derivs })
    }

    pub fn values(&self) -> &[f64] {
        &self.derivs[0]
    }

    /// Whether the sampled growth obeys the Gevrey bound with constant `m`.
    pub fn obeys(&self, m: f64) -> bool {
        (1..=MAX_ORDER).all(|k| {
            self.growth[k] <= m.powi(k as i32) * factorial(k).powf(2.0 / (self.s0 + 1.0)) / ((k + 1) as f64).powi(2) * (1.0 + 1e-12)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_arithmetic() {
        // exp(x) at 0 and 1/(1+x).
        let mut a = [0.0; MAX_ORDER + 1];
        a[1] = 1.0;
        let e = exp(&a);
        assert!((e[5] - 1.0 / 120.0).abs() < 1e-16);
        let mut one = [0.0; MAX_ORDER + 1];
        one[0] = 1.0;
        let mut den = one;
        den[1] = 1.0;
        let q = div(&one, &den);
        assert!(q.iter().enumerate().all(|(n, v)| (v - if n % 2 == 0 { 1.0 } else { -1.0 }).abs() < 1e-15));
    }

    #[test]
    fn ramp_matches_finite_differences() {
        let (c, p, x) = (0.4, 2.0, 0.37);
        let f = |x: f64| (-c / x.powf(p)).exp();
        let s = ramp(x, c, p);
        let h = 1e-4;
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        assert!((s[0] - f(x)).abs() < 1e-15);
        assert!((s[1] - d1).abs() < 1e-7 * d1.abs());
        assert!((2.0 * s[2] - d2).abs() < 1e-5 * d2.abs());
    }
}
