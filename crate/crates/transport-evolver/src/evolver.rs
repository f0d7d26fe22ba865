//! Stream function, right-hand side and RK4 stepping in the moving frame
//! `z = x − ty`.

use crate::cutoff::CutoffFunction;
use crate::profile::BackgroundDensity;
use crate::{EvolverError, Result};
use fourier_core::fd::DerivOp;
use fourier_core::{ChannelField, Grid, Transformer};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;
use stokes_solver::BvpSolver;

pub type Modes = Vec<Vec<Complex64>>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Stream functions at one time, as z-mode profiles.
#[derive(Debug, Clone)]
pub struct StreamModes {
    pub t: f64,
    /// `ψ̃_k(y)` in the lab frame.
    pub psi: Modes,
    /// `φ̃_k = e^{ikty}ψ̃_k`.
    pub phi: Modes,
    /// `φ̃_k χ`.
    pub phi_chi: Modes,
}

/// Velocity norms and zero-mode residues at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityStats {
    pub l2_u1: f64,
    pub l2_u2: f64,
    pub linf_u1: f64,
    pub linf_u2: f64,
    /// `max_y |⟨U¹⟩_z|` and `max_y |⟨U²⟩_z|` from the grid values.
    pub zero_u1: f64,
    pub zero_u2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub t: f64,
    /// `θ̃_k(y_j)`, indexed like the z transform.
    pub theta: Modes,
}

impl SimulationState {
    pub fn zeros(grid: Grid) -> Self {
        Self { t: 0.0, theta: vec![vec![ZERO; grid.ny]; grid.nz] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    /// `max|∇^⊥(φχ)| dt / h` at the start of the step.
    pub cfl: f64,
}

/// CFL number above which a step is flagged.
pub const CFL_LIMIT: f64 = 0.5;

pub struct Evolver {
    pub grid: Grid,
    pub cutoff: CutoffFunction,
    pub background: BackgroundDensity,
    pub kappa: f64,
    pub nonlinear: bool,
    /// Support guard threshold; see [`Evolver::check_support`].
    pub guard: f64,
    tr: Transformer,
    d1: DerivOp,
    solvers: Vec<Arc<BvpSolver>>,
}

/// `∫₀¹ |f|²` by the trapezoid rule.
pub fn profile_l2_sq(f: &[Complex64], h: f64) -> f64 {
    let n = f.len();
    let s: f64 = f.iter().map(|v| v.norm_sqr()).sum();
    h * (s - 0.5 * (f[0].norm_sqr() + f[n - 1].norm_sqr()))
}

/// `‖f‖_{L²(𝕋×[0,1])}` from z-mode profiles.
pub fn modes_l2(f: &[Vec<Complex64>], h: f64) -> f64 {
    (2.0 * PI * f.iter().map(|p| profile_l2_sq(p, h)).sum::<f64>()).sqrt()
}

impl Evolver {
    pub fn new(grid: Grid, cutoff: CutoffFunction, background: BackgroundDensity, kappa: f64, nonlinear: bool) -> Result<Self> {
        if cutoff.derivs[0].len() != grid.ny || background.rho_bar_prime.len() != grid.ny {
            return Err(EvolverError::Parameter("cutoff or background sampled on a different grid".into()));
        }
        let solvers = (1..=(grid.nz / 2) as i64)
            .into_par_iter()
            .map(|k| BvpSolver::new(k, grid.ny).map(Arc::new))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self {
            grid,
            cutoff,
            background,
            kappa,
            nonlinear,
            guard: 0.0,
            tr: Transformer::new(grid),
            d1: DerivOp::new(grid.ny, grid.hy(), 1, 6),
            solvers,
        })
    }

    pub fn transformer(&self) -> &Transformer {
        &self.tr
    }

    pub fn dealias(&self, f: &mut Modes) {
        let kd = self.grid.k_dealias() as i64;
        for (ik, p) in f.iter_mut().enumerate() {
            if self.grid.k_at(ik).abs() > kd {
                p.iter_mut().for_each(|v| *v = ZERO);
            }
        }
    }

    /// Solve `Δ_L²φ = ∂_zθ` mode by mode: shift to the lab frame, solve the
    /// clamped problem, shift back. Negative `k` follow by conjugation.
    pub fn compute_stream(&self, theta: &[Vec<Complex64>], t: f64) -> Result<StreamModes> {
        let g = self.grid;
        let ys = g.ys();
        let half = g.nz / 2;
        let solved: Vec<Option<(Vec<Complex64>, Vec<Complex64>)>> = (1..half)
            .into_par_iter()
            .map(|k| {
                let th = &theta[k];
                if th.iter().all(|v| *v == ZERO) {
                    return Ok(None);
                }
                let kt = k as f64 * t;
                let rho: Vec<Complex64> = th.iter().zip(&ys).map(|(v, y)| v * Complex64::from_polar(1.0, -kt * y)).collect();
                let psi = self.solvers[k - 1].solve(&rho)?;
                let phi = psi.iter().zip(&ys).map(|(v, y)| v * Complex64::from_polar(1.0, kt * y)).collect();
                Ok(Some((psi, phi)))
            })
            .collect::<Result<_>>()?;
        let zeros = || vec![vec![ZERO; g.ny]; g.nz];
        let (mut psi, mut phi) = (zeros(), zeros());
        for (k, s) in (1..half).zip(solved) {
            if let Some((p, f)) = s {
                let neg = g.nz - k;
                psi[neg] = p.iter().map(|v| v.conj()).collect();
                phi[neg] = f.iter().map(|v| v.conj()).collect();
                psi[k] = p;
                phi[k] = f;
            }
        }
        let chi = self.cutoff.values();
        let phi_chi = phi.iter().map(|p| p.iter().zip(chi).map(|(v, c)| v * *c).collect()).collect();
        Ok(StreamModes { t, psi, phi, phi_chi })
    }

    fn ik(&self, ik: usize) -> Complex64 {
        Complex64::new(0.0, self.grid.k_at(ik) as f64)
    }

    /// `−∇^⊥(φχ)·∇θ − ∂_z(φχ)ϱ̄′` and the largest advecting speed.
    pub fn rhs(&self, theta: &[Vec<Complex64>], t: f64) -> Result<(Modes, f64)> {
        let g = self.grid;
        let s = self.compute_stream(theta, t)?;
        let rb = &self.background.rho_bar_prime;
        let dz = |f: &[Vec<Complex64>]| -> Modes { f.iter().enumerate().map(|(ik, p)| p.iter().map(|v| self.ik(ik) * v).collect()).collect() };
        let dy = |f: &[Vec<Complex64>]| -> Modes { f.par_iter().map(|p| self.d1.apply(p)).collect() };
        let b = dz(&s.phi_chi);
        let mut out: Modes = b.iter().map(|p| p.iter().zip(rb).map(|(v, r)| -v * *r).collect()).collect();
        let a = dy(&s.phi_chi);
        let fe = |e: fourier_core::FourierError| EvolverError::Fourier(e.to_string());
        let uz = self.tr.z_inverse(&a).map_err(fe)?;
        let uy = self.tr.z_inverse(&b).map_err(fe)?;
        let speed = uz.data.iter().zip(&uy.data).map(|(p, q)| p.hypot(*q)).fold(0.0, f64::max);
        if self.nonlinear && speed > 0.0 {
            let tz = self.tr.z_inverse(&dz(theta)).map_err(fe)?;
            let ty = self.tr.z_inverse(&dy(theta)).map_err(fe)?;
            // u = (−∂_y(φχ), ∂_z(φχ)), so u·∇θ = −a θ_z + b θ_y.
            let mut prod = ChannelField::zeros(g);
            for (i, p) in prod.data.iter_mut().enumerate() {
                *p = -uz.data[i] * tz.data[i] + uy.data[i] * ty.data[i];
            }
            let nl = self.tr.z_forward(&prod).map_err(fe)?;
            for (o, n) in out.iter_mut().zip(&nl) {
                o.iter_mut().zip(n).for_each(|(v, w)| *v -= w);
            }
        }
        self.dealias(&mut out);
        Ok((out, speed))
    }

    pub fn cfl(&self, speed: f64, dt: f64) -> f64 {
        let h = (2.0 * PI / self.grid.nz as f64).min(self.grid.hy());
        speed * dt / h
    }

    /// Classical RK4 step, followed by the support guard.
    pub fn step(&self, state: &mut SimulationState, dt: f64) -> Result<StepInfo> {
        let axpy = |x: &Modes, a: f64, y: &Modes| -> Modes {
            x.iter().zip(y).map(|(p, q)| p.iter().zip(q).map(|(u, v)| u + v * a).collect()).collect()
        };
        let t = state.t;
        let (k1, speed) = self.rhs(&state.theta, t)?;
        let (k2, _) = self.rhs(&axpy(&state.theta, dt / 2.0, &k1), t + dt / 2.0)?;
        let (k3, _) = self.rhs(&axpy(&state.theta, dt / 2.0, &k2), t + dt / 2.0)?;
        let (k4, _) = self.rhs(&axpy(&state.theta, dt, &k3), t + dt)?;
        for (ik, p) in state.theta.iter_mut().enumerate() {
            for (j, v) in p.iter_mut().enumerate() {
                *v += (k1[ik][j] + 2.0 * k2[ik][j] + 2.0 * k3[ik][j] + k4[ik][j]) * (dt / 6.0);
            }
        }
        state.t = t + dt;
        self.check_support(state)?;
        Ok(StepInfo { cfl: self.cfl(speed, dt) })
    }

    pub fn theta_field(&self, state: &SimulationState) -> Result<ChannelField> {
        self.tr.z_inverse(&state.theta).map_err(|e| EvolverError::Fourier(e.to_string()))
    }

    /// `max_z |θ(z, y_j)|` per row.
    pub fn row_max(&self, state: &SimulationState) -> Result<Vec<f64>> {
        let f = self.theta_field(state)?;
        Ok((0..self.grid.ny).map(|j| f.row(j).iter().fold(0.0f64, |m, v| m.max(v.abs()))).collect())
    }

    /// Fails if `|θ|` exceeds the guard within `κ/4` of a wall.
    pub fn check_support(&self, state: &SimulationState) -> Result<()> {
        let rows = self.row_max(state)?;
        let band = self.kappa / 4.0;
        for (j, m) in rows.iter().enumerate() {
            let y = self.grid.y(j);
            if (y < band || y > 1.0 - band) && *m > self.guard {
                return Err(EvolverError::SupportBreach { t: state.t, y, value: *m });
            }
        }
        Ok(())
    }

    /// Lab-frame velocity `U = ∇^⊥ψ`, measured through the moving-frame
    /// profiles `e^{ikty}Ũ_k`.
    pub fn velocity(&self, s: &StreamModes) -> Result<VelocityStats> {
        let g = self.grid;
        let ys = g.ys();
        let mut u1 = Vec::with_capacity(g.nz);
        let mut u2 = Vec::with_capacity(g.nz);
        for (ik, psi) in s.psi.iter().enumerate() {
            let kt = g.k_at(ik) as f64 * s.t;
            let d = self.d1.apply(psi);
            u1.push(d.iter().zip(&ys).map(|(v, y)| -v * Complex64::from_polar(1.0, kt * y)).collect::<Vec<_>>());
            u2.push(s.phi[ik].iter().map(|v| self.ik(ik) * v).collect::<Vec<_>>());
        }
        let fe = |e: fourier_core::FourierError| EvolverError::Fourier(e.to_string());
        let f1 = self.tr.z_inverse(&u1).map_err(fe)?;
        let f2 = self.tr.z_inverse(&u2).map_err(fe)?;
        let zero = |f: &ChannelField| (0..g.ny).map(|j| (f.row(j).iter().sum::<f64>() / g.nz as f64).abs()).fold(0.0, f64::max);
        Ok(VelocityStats {
            l2_u1: modes_l2(&u1, g.hy()),
            l2_u2: modes_l2(&u2, g.hy()),
            linf_u1: f1.max_abs(),
            linf_u2: f2.max_abs(),
            zero_u1: zero(&f1),
            zero_u2: zero(&f2),
        })
    }

    /// `∫∫θ` by the trapezoid rule in y.
    pub fn mass(&self, state: &SimulationState) -> f64 {
        let p = &state.theta[0];
        let h = self.grid.hy();
        let s: f64 = p.iter().map(|v| v.re).sum();
        2.0 * PI * h * (s - 0.5 * (p[0].re + p[p.len() - 1].re))
    }
}
