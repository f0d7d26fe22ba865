//! Frequency bookkeeping: the l¹ frequency norm, the Japanese bracket,
//! the floor `E(·)` and the critical time intervals.

use crate::{FourierError, Result};

/// Snap tolerance used by [`floor_e`].
pub const FLOOR_SNAP: f64 = 1e-12;

/// `|k,η| = |k| + |η|`.
pub fn l1(k: i64, eta: f64) -> f64 {
    k.unsigned_abs() as f64 + eta.abs()
}

/// `⟨x⟩ = sqrt(1 + x²)`.
pub fn japanese(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

/// Integer part `E(x)` for `x >= 0`, snapping values within
/// [`FLOOR_SNAP`] (relative) below an integer up to that integer so that
/// `E(8^{1/3})` is 2 and not 1.
pub fn floor_e(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() <= FLOOR_SNAP * x.abs().max(1.0) {
        r as i64
    } else {
        x.floor() as i64
    }
}

/// `E(|η|^{1/3})`, the largest resonant wavenumber for `η`.
pub fn max_resonant_k(eta: f64) -> i64 {
    floor_e(eta.abs().cbrt())
}

/// Resonant interval `I_{k,η} = [t⁻, t⁺]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalInterval {
    pub k: i64,
    pub eta: f64,
    pub t_minus: f64,
    pub t_plus: f64,
    pub empty: bool,
}

impl CriticalInterval {
    pub fn contains(&self, t: f64) -> bool {
        !self.empty && t >= self.t_minus && t <= self.t_plus
    }

    /// Critical time `η/k`.
    pub fn center(&self) -> f64 {
        self.eta.abs() / self.k.unsigned_abs() as f64
    }
}

/// `I_{k,η}`: empty unless `kη >= 0` and `1 <= |k| <= E(|η|^{1/3})`.
pub fn critical_interval(k: i64, eta: f64) -> CriticalInterval {
    let empty = k == 0 || (k as f64) * eta < 0.0 || k.abs() > max_resonant_k(eta);
    if empty {
        return CriticalInterval {
            k,
            eta,
            t_minus: f64::NAN,
            t_plus: f64::NAN,
            empty: true,
        };
    }
    let ka = k.unsigned_abs() as f64;
    let ea = eta.abs();
    let half = ea / (2.0 * ka).powi(3);
    CriticalInterval {
        k,
        eta,
        t_minus: ea / ka - half,
        t_plus: ea / ka + half,
        empty: false,
    }
}

/// Extended interval `Ĩ_{k,η} = [2|η|/(2|k|+1), 2|η|/(2|k|-1)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedInterval {
    pub k: i64,
    pub eta: f64,
    pub t_left: f64,
    pub t_right: f64,
}

impl ExtendedInterval {
    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_left && t <= self.t_right
    }
}

pub fn extended_interval(k: i64, eta: f64) -> Result<ExtendedInterval> {
    if k == 0 {
        return Err(FourierError::Parameter(
            "extended interval undefined for k = 0".into(),
        ));
    }
    let ka = k.unsigned_abs() as f64;
    let ea = eta.abs();
    Ok(ExtendedInterval {
        k,
        eta,
        t_left: 2.0 * ea / (2.0 * ka + 1.0),
        t_right: 2.0 * ea / (2.0 * ka - 1.0),
    })
}
