//! Sharp Littlewood–Paley shells on the l¹ frequency norm.
//!
//! Shell `N = 2^j` (`j >= 0`) holds `N <= |k,η| < 2N`; the bottom shell
//! `N = 1/2` holds `|k,η| < 1`. Indicators partition the lattice exactly.

use crate::freq::l1;
use crate::grid::SpectralField;
use num_complex::Complex64;

/// Dyadic block `N = 2^exp`, `exp >= -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dyadic {
    pub exp: i32,
}

impl Dyadic {
    pub fn new(exp: i32) -> Self {
        assert!(exp >= -1, "dyadic exponent must be >= -1");
        Self { exp }
    }

    pub fn value(&self) -> f64 {
        2f64.powi(self.exp)
    }

    /// Shell containing frequency norm `r`.
    pub fn of(r: f64) -> Self {
        if r < 1.0 {
            Self { exp: -1 }
        } else {
            Self {
                exp: r.log2().floor() as i32,
            }
        }
    }

    /// All shells needed to cover norms up to `r_max`.
    pub fn up_to(r_max: f64) -> Vec<Self> {
        let top = Self::of(r_max).exp;
        (-1..=top).map(Self::new).collect()
    }
}

fn filtered(f: &SpectralField, keep: impl Fn(Dyadic) -> bool) -> SpectralField {
    f.map_indexed(|k, eta, c| {
        if keep(Dyadic::of(l1(k, eta))) {
            c
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `f_N`.
pub fn littlewood_paley_project(f: &SpectralField, n: Dyadic) -> SpectralField {
    filtered(f, |d| d == n)
}

/// `f_{<N/8}`: all shells `M` with `M <= N/16`, i.e. exponent at most
/// `exp(N) - 4`.
pub fn low_pass(f: &SpectralField, n: Dyadic) -> SpectralField {
    filtered(f, |d| d.exp <= n.exp - 4)
}
