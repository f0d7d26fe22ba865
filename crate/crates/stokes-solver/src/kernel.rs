//! Fourier-side kernels of the cut-off stream function.
//!
//! `G(k,η,ζ)` maps the y-spectrum of an interior density to the y-spectrum
//! of `χψ`: `(χψ̃_k)^(η) = ∫ G(k,η,ζ) ρ̂_k(ζ) dζ`, with the lattice cell
//! `dζ = 2π`. Column `ζ` is `(1/2π) FT_η[χ · ψ[χ e^{iζy}]]`.
//! The moving-frame kernel is the shift `𝔊(t,k,η,ζ) = G(k, η−kt, ζ−kt)`.

use crate::bvp::BvpSolver;
use crate::{Result, StokesError};
use fourier_core::{Grid, Transformer};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Samples whose modulus falls below this fraction of the table maximum
/// are roundoff and are left out of the envelope fit.
pub const NOISE_FLOOR: f64 = 1e-13;
/// Largest admissible `|G|` on the outermost lattice row, relative to the
/// table maximum.
pub const EDGE_TOLERANCE: f64 = 1e-6;

/// Bins used by [`tail_rate`] for kernel tables.
pub const TAIL_BINS: usize = 16;
/// Constant slack allowed when trading the constant for a decay rate.
pub const FIT_SLACK: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeFit {
    pub lambda: f64,
    pub c: f64,
}

/// Fit `value ≤ C e^{−λ d}` over `(d, value)` samples.
///
/// The smallest covering constant is `C(0) = max value`, and `C(λ)` grows
/// with `λ`. The fitted rate is the largest `λ` with `C(λ) ≤ slack·C(0)`.
/// A tail regression is not used because the envelope of the kernel rises
/// before it decays, and its pre-asymptotic curvature would inflate `C`.
pub fn envelope_fit(samples: &[(f64, f64)], slack: f64) -> Option<EnvelopeFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(d, v)| *v > 0.0 && v.is_finite() && d.is_finite())
        .map(|(d, v)| (*d, v.ln()))
        .collect();
    if pts.len() < 3 || pts.iter().all(|p| p.0 <= 0.0) {
        return None;
    }
    let log_c = |lam: f64| pts.iter().map(|(d, l)| l + lam * d).fold(f64::NEG_INFINITY, f64::max);
    let target = log_c(0.0) + slack.ln();
    let mut hi = 1.0;
    while log_c(hi) <= target {
        hi *= 2.0;
        if hi > 1e6 {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log_c(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(EnvelopeFit { lambda: lo, c: log_c(lo).exp() })
}

/// Asymptotic decay rate of `(d, value)` samples: least-squares slope of
/// the per-bin maxima of `log value` from the highest bin onward.
pub fn tail_rate(samples: &[(f64, f64)], bins: usize) -> Option<f64> {
    let dmax = samples.iter().map(|p| p.0).fold(0.0, f64::max);
    if dmax <= 0.0 || bins < 3 {
        return None;
    }
    let mut top = vec![f64::NEG_INFINITY; bins];
    let mut at = vec![0.0; bins];
    for (d, v) in samples.iter().filter(|(_, v)| *v > 0.0) {
        let b = ((d / dmax) * bins as f64).min(bins as f64 - 1.0) as usize;
        if v.ln() > top[b] {
            top[b] = v.ln();
            at[b] = *d;
        }
    }
    let peak = (0..bins).max_by(|a, b| top[*a].total_cmp(&top[*b]))?;
    let xy: Vec<(f64, f64)> = (peak..bins).filter(|b| top[*b].is_finite()).map(|b| (at[b], top[b])).collect();
    if xy.len() < 3 {
        return None;
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(-sxy / sxx)
}

#[derive(Debug, Clone)]
pub struct FourierKernelG {
    pub k: i64,
    /// Exponent of the off-diagonal decay, `(s₀+1)/2`.
    pub s: f64,
    grid: Grid,
    chi: Vec<f64>,
    solver: BvpSolver,
    /// `table[n * M + m] = G(k, η_n, ζ_m)`, FFT ordering on both axes.
    table: Vec<Complex64>,
    pub fit: EnvelopeFit,
    /// Asymptotic off-diagonal decay rate, see [`tail_rate`].
    pub tail_lambda: f64,
}

impl FourierKernelG {
    /// Build the lattice table for wavenumber `k` from the cutoff sampled on
    /// `y_j = j/(n−1)`.
    pub fn build(k: i64, chi: &[f64], s0: f64) -> Result<Self> {
        if !(s0 > 0.0 && s0 < 1.0) {
            return Err(StokesError::Parameter(format!("s0 = {s0} not in (0,1)")));
        }
        let n = chi.len();
        let grid = Grid::unchecked(2, n).map_err(|e| StokesError::Fourier(e.to_string()))?;
        let solver = BvpSolver::new(k, n)?;
        let my = grid.my();
        let t = Transformer::new(grid);
        let cols: Vec<Vec<Complex64>> = (0..my)
            .into_par_iter()
            .map(|m| {
                let zeta = grid.eta_at(m);
                let prof = column_profile(&solver, chi, zeta);
                t.y_forward(&prof).into_iter().map(|c| c / (2.0 * PI)).collect()
            })
            .collect();
        let mut table = vec![Complex64::new(0.0, 0.0); my * my];
        for (m, col) in cols.iter().enumerate() {
            for (nn, v) in col.iter().enumerate() {
                table[nn * my + m] = *v;
            }
        }
        let s = 0.5 * (s0 + 1.0);
        let mut me = Self {
            k,
            s,
            grid,
            chi: chi.to_vec(),
            solver,
            table,
            fit: EnvelopeFit { lambda: 0.0, c: 0.0 },
            tail_lambda: 0.0,
        };
        me.check_edges()?;
        me.fit = envelope_fit(&me.bound_samples(), FIT_SLACK)
            .ok_or_else(|| StokesError::Resolution("too few samples above the noise floor".into()))?;
        me.tail_lambda = tail_rate(&me.bound_samples(), TAIL_BINS).unwrap_or(0.0);
        Ok(me)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn lattice_len(&self) -> usize {
        self.grid.my()
    }

    /// Lattice frequency of index `m` (FFT ordering).
    pub fn freq(&self, m: usize) -> f64 {
        self.grid.eta_at(m)
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.table[n * self.grid.my() + m]
    }

    pub fn max_abs(&self) -> f64 {
        self.table.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_edges(&self) -> Result<()> {
        let my = self.grid.my();
        let edge = my / 2;
        let top = self.max_abs();
        let worst = (0..my)
            .flat_map(|m| [self.get(edge, m).norm(), self.get(m, edge).norm()])
            .fold(0.0, f64::max);
        if worst > EDGE_TOLERANCE * top {
            return Err(StokesError::Resolution(format!(
                "|G| at the lattice edge is {:.2e} of its maximum",
                worst / top
            )));
        }
        Ok(())
    }

    /// `(|η−ζ|^s, |G|·max{(k²+η²)²,(k²+ζ²)²}/|k|)` over the lattice. The
    /// Nyquist row and column are skipped since their sign is ambiguous.
    pub fn bound_samples(&self) -> Vec<(f64, f64)> {
        let my = self.grid.my();
        let floor = NOISE_FLOOR * self.max_abs();
        let k2 = (self.k * self.k) as f64;
        let kabs = self.k.abs() as f64;
        let mut out = Vec::with_capacity(my * my);
        let nyq = my / 2;
        for nn in (0..my).filter(|i| *i != nyq) {
            let eta = self.freq(nn);
            for m in (0..my).filter(|i| *i != nyq) {
                let g = self.get(nn, m).norm();
                if g <= floor {
                    continue;
                }
                let zeta = self.freq(m);
                let w = (k2 + eta * eta).powi(2).max((k2 + zeta * zeta).powi(2));
                out.push(((eta - zeta).abs().powf(self.s), g * w / kabs));
            }
        }
        out
    }

    /// The bound `C min{|k|/(k²+η²)², |k|/(k²+ζ²)²} e^{−λ|η−ζ|^s}`.
    pub fn bound(&self, eta: f64, zeta: f64) -> f64 {
        let k2 = (self.k * self.k) as f64;
        let kabs = self.k.abs() as f64;
        let m = (kabs / (k2 + eta * eta).powi(2)).min(kabs / (k2 + zeta * zeta).powi(2));
        self.fit.c * m * (-self.fit.lambda * (eta - zeta).abs().powf(self.s)).exp()
    }

    /// `G(k,η,ζ)` at arbitrary real frequencies. One Stokes solve per call.
    pub fn eval(&self, eta: f64, zeta: f64) -> Complex64 {
        let prof = column_profile(&self.solver, &self.chi, zeta);
        let my = self.grid.my();
        let h = self.grid.hy();
        let sum: Complex64 = (0..my)
            .map(|j| prof[j] * Complex64::from_polar(1.0, -eta * j as f64 * h))
            .sum();
        sum / (my as f64 * 2.0 * PI)
    }

    /// `𝔊(t,k,η,ζ) = G(k, η−kt, ζ−kt)`.
    pub fn moving_frame(&self, t: f64, eta: f64, zeta: f64) -> Complex64 {
        let shift = self.k as f64 * t;
        self.eval(eta - shift, zeta - shift)
    }

    /// `(χψ̃_k)^` on the lattice from the lattice spectrum of `ρ̃_k`.
    pub fn apply(&self, rho_hat: &[Complex64]) -> Vec<Complex64> {
        let my = self.grid.my();
        (0..my)
            .map(|nn| {
                (0..my).map(|m| self.get(nn, m) * rho_hat[m]).sum::<Complex64>() * (2.0 * PI)
            })
            .collect()
    }
}

/// `χ · ψ[χ e^{iζy}]` on the grid.
fn column_profile(solver: &BvpSolver, chi: &[f64], zeta: f64) -> Vec<Complex64> {
    let h = 1.0 / (chi.len() - 1) as f64;
    let rho: Vec<Complex64> = chi
        .iter()
        .enumerate()
        .map(|(j, c)| Complex64::from_polar(*c, zeta * j as f64 * h))
        .collect();
    let psi = solver.solve(&rho).expect("length matches by construction");
    psi.iter().zip(chi).map(|(p, c)| p * *c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_of_pure_exponential() {
        let s: Vec<(f64, f64)> = (0..200).map(|i| (i as f64 * 0.1, 3.0 * (-0.7 * i as f64 * 0.1).exp())).collect();
        let f = envelope_fit(&s, 1.0 + 1e-9).unwrap();
        assert!((f.lambda - 0.7).abs() < 1e-6, "{f:?}");
        assert!((f.c - 3.0).abs() < 1e-6);
        let g = envelope_fit(&s, 2.0).unwrap();
        assert!(g.lambda > 0.7 && (g.c - 6.0).abs() < 1e-9);
        assert!(s.iter().all(|(d, v)| *v <= g.c * (-g.lambda * d).exp() * (1.0 + 1e-12)));
    }
}
