//! The weight `Λ`.
//!
//! `Λ(·,η) = 1` on `t ≥ 2|η|`. On `Ĩ_{k,η}`, `k = 1, …, E(|η|^{2/3})`,
//! `∂_t log Λ = c_k/(1+(t−η/k)²)` with `c_k = 1/20` up to `E(|η|^{1/3})`
//! and `c_k = |η|/(20k³)` beyond, so each interval contributes an arctan.

use fourier_core::freq::floor_e;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaWeight {
    pub eta: f64,
    /// `E(|η|^{1/3})`.
    pub k1: i64,
    /// `E(|η|^{2/3})`, zero when `|η| ≤ 1`.
    pub k2: i64,
    /// `log Λ(2|η|/(2k−1))` for `k = 1..=k2+1`.
    log_right: Vec<f64>,
}

impl LambdaWeight {
    pub fn build(eta: f64) -> Self {
        let ea = eta.abs();
        let (k1, k2) = if ea <= 1.0 {
            (0, 0)
        } else {
            (floor_e(ea.cbrt()), floor_e(ea.powf(2.0 / 3.0)))
        };
        let mut me = Self { eta, k1, k2, log_right: Vec::with_capacity(k2 as usize + 1) };
        let mut acc = 0.0;
        for k in 1..=k2 {
            me.log_right.push(acc);
            let tc = ea / k as f64;
            let right = 2.0 * ea / (2.0 * k as f64 - 1.0);
            let left = 2.0 * ea / (2.0 * k as f64 + 1.0);
            acc -= me.rate(k) * ((right - tc).atan() - (left - tc).atan());
        }
        me.log_right.push(acc);
        me
    }

    /// `c_k`.
    pub fn rate(&self, k: i64) -> f64 {
        if k <= self.k1 {
            1.0 / 20.0
        } else {
            self.eta.abs() / (20.0 * (k as f64).powi(3))
        }
    }

    fn interval_of(&self, t: f64) -> Option<i64> {
        let ea = self.eta.abs();
        if self.k2 == 0 || t >= 2.0 * ea {
            return None;
        }
        if t <= 0.0 {
            return Some(self.k2 + 1);
        }
        Some(((ea / t + 0.5).floor() as i64).max(1))
    }

    pub fn log_value(&self, t: f64) -> f64 {
        let Some(k) = self.interval_of(t) else {
            return 0.0;
        };
        if k > self.k2 {
            return self.log_min();
        }
        let ea = self.eta.abs();
        let tc = ea / k as f64;
        let right = 2.0 * ea / (2.0 * k as f64 - 1.0);
        self.log_right[k as usize - 1] - self.rate(k) * ((right - tc).atan() - (t - tc).atan())
    }

    pub fn value(&self, t: f64) -> f64 {
        self.log_value(t).exp()
    }

    /// `∂_t log Λ(t,η)`.
    pub fn dlog(&self, t: f64) -> f64 {
        match self.interval_of(t) {
            Some(k) if k <= self.k2 => {
                let tc = self.eta.abs() / k as f64;
                self.rate(k) / (1.0 + (t - tc).powi(2))
            }
            _ => 0.0,
        }
    }

    /// `log Λ(0,η)`, the smallest value.
    pub fn log_min(&self) -> f64 {
        *self.log_right.last().expect("always holds the floor value")
    }

    /// `(3π/20)|η|^{1/3}`, the bound on `log 1/Λ`.
    pub fn log_bound(eta: f64) -> f64 {
        3.0 * std::f64::consts::PI / 20.0 * eta.abs().cbrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        let w = LambdaWeight::build(0.7);
        assert_eq!(w.log_value(0.0), 0.0);
        let w = LambdaWeight::build(50.0);
        assert_eq!(w.log_value(100.0), 0.0);
        assert_eq!(w.log_value(500.0), 0.0);
        assert!(w.log_value(10.0) < 0.0);
    }

    #[test]
    fn continuous_across_interval_ends() {
        let w = LambdaWeight::build(-3000.0);
        for k in 1..=w.k2 {
            let t = 6000.0 / (2.0 * k as f64 + 1.0);
            let a = w.log_value(t * (1.0 + 1e-13));
            let b = w.log_value(t * (1.0 - 1e-13));
            assert!((a - b).abs() < 1e-9, "k={k}");
        }
    }
}
