//! Transport / reaction / remainder split of the commutator
//! `NL = ∫ 𝒜θ [𝒜(u·∇θ) − u·∇𝒜θ]`, `u = ∇^⊥(φχ)`, with sharp shells.
//!
//! With shells `N = 2^j` on `|k,η|` the pairs (velocity shell, density
//! shell) split by exponent gap `d`: `d ≥ 4` is transport, `d ≤ −4` is
//! reaction and `|d| ≤ 3` is the remainder, so the three sums reproduce
//! `NL` exactly up to roundoff.

use crate::multiplier::WeightTable;
use crate::{Result, WeightError};
use fourier_core::dyadic::Dyadic;
use fourier_core::freq::l1;
use fourier_core::{SpectralField, Transformer, CELL_MEASURE};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParaproductReport {
    /// `NL` computed in one piece, with `𝒜` normalised to max 1.
    pub direct: f64,
    /// `(1/2π) Σ_N T_N`.
    pub transport: f64,
    /// `(1/2π) Σ_N R_N`.
    pub reaction: f64,
    /// `(1/2π) ℛ`.
    pub remainder: f64,
    /// `|direct − (transport+reaction+remainder)|` over the largest of the
    /// magnitudes involved.
    pub residual: f64,
}

struct Ctx {
    tr: Transformer,
    a: Vec<f64>,
    shells: Vec<i32>,
}

impl Ctx {
    fn restrict(&self, f: &SpectralField, keep: impl Fn(i32) -> bool) -> SpectralField {
        let mut out = f.clone();
        for (c, s) in out.data.iter_mut().zip(&self.shells) {
            if !keep(*s) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    fn deriv(&self, f: &SpectralField, dz: bool, scale: f64) -> SpectralField {
        f.map_indexed(|k, eta, c| c * Complex64::new(0.0, if dz { k as f64 } else { eta }) * scale)
    }

    fn apply_a(&self, f: &SpectralField) -> SpectralField {
        let mut out = f.clone();
        for (c, a) in out.data.iter_mut().zip(&self.a) {
            *c *= *a;
        }
        out
    }

    /// `u·∇f` with `u = ∇^⊥ψ = (−∂_yψ, ∂_zψ)`, on the grid then back.
    fn advect(&self, psi: &SpectralField, f: &SpectralField) -> Result<SpectralField> {
        let inv = |g: &SpectralField| self.tr.inverse(g).map_err(|e| WeightError::Dimension(e.to_string()));
        let u1 = inv(&self.deriv(psi, false, -1.0))?;
        let u2 = inv(&self.deriv(psi, true, 1.0))?;
        let fz = inv(&self.deriv(f, true, 1.0))?;
        let fy = inv(&self.deriv(f, false, 1.0))?;
        let mut prod = u1.clone();
        for (i, p) in prod.data.iter_mut().enumerate() {
            *p = u1.data[i] * fz.data[i] + u2.data[i] * fy.data[i];
        }
        self.tr.forward(&prod).map_err(|e| WeightError::Dimension(e.to_string()))
    }

    /// `∫ 𝒜θ [𝒜(u_ψ·∇f) − u_ψ·∇𝒜f]` by Parseval.
    fn bilinear(&self, theta: &SpectralField, psi: &SpectralField, f: &SpectralField) -> Result<f64> {
        if psi.data.iter().all(|c| c.norm_sqr() == 0.0) || f.data.iter().all(|c| c.norm_sqr() == 0.0) {
            return Ok(0.0);
        }
        let p1 = self.advect(psi, f)?;
        let p2 = self.advect(psi, &self.apply_a(f))?;
        let s: f64 = (0..theta.data.len())
            .map(|i| (self.a[i] * theta.data[i].conj() * (self.a[i] * p1.data[i] - p2.data[i])).re)
            .sum();
        Ok(CELL_MEASURE * s)
    }
}

pub fn paraproduct_check(theta: &SpectralField, phichi: &SpectralField, t: f64, table: &WeightTable) -> Result<ParaproductReport> {
    theta.check_same_grid(phichi).map_err(|e| WeightError::Dimension(e.to_string()))?;
    if theta.grid != table.grid {
        return Err(WeightError::Dimension(format!("{:?} vs {:?}", theta.grid, table.grid)));
    }
    let g = theta.grid;
    let my = g.my();
    let n = theta.data.len();
    let loga: Vec<f64> = (0..n).map(|i| table.at(t, i / my, i % my).a).collect();
    let top = loga.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let a: Vec<f64> = loga.iter().map(|l| (l - top).exp()).collect();
    let shells: Vec<i32> = (0..n)
        .map(|i| Dyadic::of(l1(g.k_at(i / my), g.eta_at(i % my))).exp)
        .collect();
    let ctx = Ctx { tr: Transformer::new(g), a, shells };
    let top_shell = *ctx.shells.iter().max().unwrap_or(&-1);

    let direct = ctx.bilinear(theta, phichi, theta)?;
    let (mut transport, mut reaction, mut remainder) = (0.0, 0.0, 0.0);
    let mut scale = direct.abs();
    for nexp in -1..=top_shell {
        let th_n = ctx.restrict(theta, |s| s == nexp);
        let ph_n = ctx.restrict(phichi, |s| s == nexp);
        let tpart = ctx.bilinear(theta, &ctx.restrict(phichi, |s| s <= nexp - 4), &th_n)?;
        let rpart = ctx.bilinear(theta, &ph_n, &ctx.restrict(theta, |s| s <= nexp - 4))?;
        let mpart = ctx.bilinear(theta, &ph_n, &ctx.restrict(theta, |s| (s - nexp).abs() <= 3))?;
        scale = scale.max(tpart.abs()).max(rpart.abs()).max(mpart.abs());
        transport += tpart;
        reaction += rpart;
        remainder += mpart;
    }
    let sum = transport + reaction + remainder;
    let residual = if scale == 0.0 { 0.0 } else { (direct - sum).abs() / scale };
    Ok(ParaproductReport { direct, transport, reaction, remainder, residual })
}
