//! The resonance weight `Θ`.
//!
//! For `|η| > 1` the non-resonant part `Θ_NR(·,η)` equals 1 on `t ≥ 2|η|`
//! and is built backward through the intervals `Ĩ_{k,η}`,
//! `k = 1, …, E(|η|^{1/3})`. On `[η/k, t⁺]` it is
//! `(k³/2η · [1+β(t−η/k)])^{C₁}` times its value at `t⁺`, on `[t⁻, η/k]` it
//! is `(1+α(η/k−t))^{−1−C₁}` times its value at `η/k`, and it is flat on
//! the rest of `Ĩ_{k,η}`. Below the last interval it is constant.

use fourier_core::freq::{critical_interval, max_resonant_k};
use serde::{Deserialize, Serialize};

/// Piecewise closed form of `Θ_NR(·,η)` and `Θ_R(·,η)` for one `η`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaWeight {
    /// Signed frequency the weight was built for.
    pub eta: f64,
    pub c1: f64,
    /// `E(|η|^{1/3})`, zero when `|η| ≤ 1`.
    pub kmax: i64,
    /// `log Θ_NR(t⁺_{k,η})` for `k = 1..=kmax`, plus the value below the
    /// last interval at the end.
    log_plus: Vec<f64>,
}

/// `α_{k,η} = β_{k,η} = 16 − (2k)³/η`.
pub fn alpha(k: i64, eta: f64) -> f64 {
    16.0 - (2.0 * k as f64).powi(3) / eta.abs()
}

impl ThetaWeight {
    pub fn build(eta: f64, c1: f64) -> Self {
        let ea = eta.abs();
        let kmax = if ea <= 1.0 { 0 } else { max_resonant_k(ea) };
        let mut log_plus = Vec::with_capacity(kmax as usize + 1);
        let mut acc = 0.0;
        for k in 1..=kmax {
            log_plus.push(acc);
            acc -= (1.0 + 2.0 * c1) * (2.0 * ea / (k as f64).powi(3)).ln();
        }
        log_plus.push(acc);
        Self { eta, c1, kmax, log_plus }
    }

    fn abs_eta(&self) -> f64 {
        self.eta.abs()
    }

    /// Index `k` with `t ∈ Ĩ_{k,η}`, or `None` for `t ≥ 2|η|`.
    fn interval_of(&self, t: f64) -> Option<i64> {
        let ea = self.abs_eta();
        if self.kmax == 0 || t >= 2.0 * ea {
            return None;
        }
        if t <= 0.0 {
            return Some(self.kmax + 1);
        }
        Some(((ea / t + 0.5).floor() as i64).max(1))
    }

    /// `log Θ_NR(t, η)`.
    pub fn log_nr(&self, t: f64) -> f64 {
        let Some(k) = self.interval_of(t) else {
            return 0.0;
        };
        if k > self.kmax {
            return self.log_total();
        }
        let ea = self.abs_eta();
        let c1 = self.c1;
        let kf = k as f64;
        let lp = self.log_plus[k as usize - 1];
        let tc = ea / kf;
        let half = ea / (2.0 * kf).powi(3);
        let a = alpha(k, ea);
        let r = kf.powi(3) / (2.0 * ea);
        if t >= tc + half {
            lp
        } else if t >= tc {
            lp + c1 * (r * (1.0 + a * (t - tc))).ln()
        } else if t >= tc - half {
            lp + c1 * r.ln() - (1.0 + c1) * (1.0 + a * (tc - t)).ln()
        } else {
            self.log_plus[k as usize]
        }
    }

    pub fn nr(&self, t: f64) -> f64 {
        self.log_nr(t).exp()
    }

    /// `∂_t log Θ_NR(t, η)`.
    pub fn dlog_nr(&self, t: f64) -> f64 {
        let Some(k) = self.interval_of(t) else {
            return 0.0;
        };
        if k > self.kmax {
            return 0.0;
        }
        let ea = self.abs_eta();
        let tc = ea / k as f64;
        let half = ea / (2.0 * k as f64).powi(3);
        let a = alpha(k, ea);
        if t >= tc && t < tc + half {
            self.c1 * a / (1.0 + a * (t - tc))
        } else if t < tc && t >= tc - half {
            (1.0 + self.c1) * a / (1.0 + a * (tc - t))
        } else {
            0.0
        }
    }

    /// Resonant index for wavenumber `m` at time `t`: `|m|` when
    /// `t ∈ I_{m,η}`.
    fn resonant(&self, m: i64, t: f64) -> Option<i64> {
        if self.kmax == 0 {
            return None;
        }
        critical_interval(m, self.eta).contains(t).then_some(m.abs())
    }

    /// `log(k³/2η · [1 + α|t−η/k|])`, the factor `Θ_R/Θ_NR` on `I_{k,η}`.
    fn log_r_factor(&self, k: i64, t: f64) -> f64 {
        let ea = self.abs_eta();
        let kf = k as f64;
        (kf.powi(3) / (2.0 * ea) * (1.0 + alpha(k, ea) * (t - ea / kf).abs())).ln()
    }

    /// `log Θ_R(t, η)` for `t ∈ I_{k,η}`; equals `log Θ_NR` elsewhere.
    pub fn log_r(&self, k: i64, t: f64) -> f64 {
        match self.resonant(k, t) {
            Some(k) => self.log_nr(t) + self.log_r_factor(k, t),
            None => self.log_nr(t),
        }
    }

    /// `log Θ_m(t, η)`: `Θ_R` on `I_{m,η}`, `Θ_NR` otherwise. Negative `η`
    /// follows `Θ_m(t,η) = Θ_{−m}(t,−η)`, which the sign test of the
    /// critical interval already encodes.
    pub fn log_theta(&self, m: i64, t: f64) -> f64 {
        self.log_r(m, t)
    }

    pub fn theta(&self, m: i64, t: f64) -> f64 {
        self.log_theta(m, t).exp()
    }

    /// `∂_t log Θ_m(t, η)`.
    pub fn dlog_theta(&self, m: i64, t: f64) -> f64 {
        let base = self.dlog_nr(t);
        match self.resonant(m, t) {
            Some(k) => {
                let ea = self.abs_eta();
                let tc = ea / k as f64;
                let a = alpha(k, ea);
                let d = a / (1.0 + a * (t - tc).abs());
                if t >= tc {
                    base + d
                } else {
                    base - d
                }
            }
            None => base,
        }
    }

    /// Start of the growth period, the left end of `Ĩ_{E,η}`.
    pub fn t_start(&self) -> f64 {
        let ea = self.abs_eta();
        2.0 * ea / (2.0 * self.kmax as f64 + 1.0)
    }

    /// `log Θ_NR(0,η) = −(1+2C₁) Σ_{k≤E} log(2|η|/k³)`.
    pub fn log_total(&self) -> f64 {
        *self.log_plus.last().expect("always holds the floor value")
    }

    /// The closed-form growth `e^{(μ/20)|η|^{1/3}}/|η|^{μ/120}` in log form.
    pub fn log_envelope(eta: f64, mu: f64) -> f64 {
        let ea = eta.abs();
        mu / 20.0 * ea.cbrt() - mu / 120.0 * ea.ln()
    }

    /// Breakpoints `2η/(2k+1)`, `t⁻`, `η/k`, `t⁺` for all intervals.
    pub fn breakpoints(&self) -> Vec<f64> {
        let ea = self.abs_eta();
        let mut out = vec![2.0 * ea];
        for k in 1..=self.kmax {
            let kf = k as f64;
            let half = ea / (2.0 * kf).powi(3);
            out.extend([ea / kf + half, ea / kf, ea / kf - half, 2.0 * ea / (2.0 * kf + 1.0)]);
        }
        out
    }
}
