use crate::cutoff::CutoffFunction;
use crate::evolver::{modes_l2, Evolver, SimulationState, CFL_LIMIT};
use crate::profile::{BackgroundDensity, InitialData};
use crate::{EvolverError, Result};
use diagnostics::{SupportTrace, SUPPORT_THRESHOLD};
use fourier_core::{gevrey_norm, Grid, SpectralField};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use weights::{energy_and_ck, WeightParams, WeightTable};

/// Default CFL number used to pick the time step at `t = 0`.
pub const CFL_TARGET: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub nz: usize,
    pub ny: usize,
    pub kappa: f64,
    pub s0: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub background_sign: f64,
    /// Radius of the Gevrey norm that normalises `ϱ̄′`.
    pub lambda_b: f64,
    /// `(k, a_k)` of the initial data, scaled by `ε`.
    pub initial_modes: Vec<(i64, f64)>,
    /// Upper bound on the time step; the CFL condition may lower it.
    pub dt: f64,
    pub t_max: f64,
    /// Record a sample every this many steps.
    pub output_every: usize,
    pub nonlinear: bool,
    pub weights: WeightParams,
    /// Keep `θ̂` at every sample for the scattering estimate.
    pub keep_snapshots: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            nz: 128,
            ny: 128,
            kappa: 0.1,
            s0: 1.0 / 3.0,
            epsilon: 1e-3,
            delta: 0.0,
            background_sign: 1.0,
            lambda_b: 1.0,
            initial_modes: vec![(1, 1.0)],
            dt: 0.05,
            t_max: 50.0,
            output_every: 4,
            nonlinear: true,
            weights: WeightParams::desk_scale(),
            keep_snapshots: true,
        }
    }
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.nz, self.ny).map_err(|e| EvolverError::Parameter(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        let bad = |m: String| Err(EvolverError::Parameter(m));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt = {} must be > 0", self.dt));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad(format!("t_max = {} must be > 0", self.t_max));
        }
        if self.output_every == 0 {
            return bad("output_every must be >= 1".into());
        }
        if self.epsilon < 0.0 || self.delta < 0.0 {
            return bad("epsilon and delta must be >= 0".into());
        }
        self.weights.validate_basic().map_err(|e| EvolverError::Weights(e.to_string()))
    }

    /// Radius of the Gevrey norm reported in the series, `λ_∞/4`.
    pub fn gevrey_lambda(&self) -> f64 {
        self.weights.lambda_inf / 4.0
    }
}

/// One output sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    pub energy: f64,
    pub l2_u1: f64,
    pub l2_u2: f64,
    pub linf_u1: f64,
    pub linf_u2: f64,
    /// Support bounds, `NaN` when `θ` is below the threshold everywhere.
    pub supp_lo: f64,
    pub supp_hi: f64,
    pub gevrey_norm: f64,
    pub ck_lambda_int: f64,
    pub ck_theta_int: f64,
    pub ck_lambda_weight_int: f64,
    pub mass: f64,
    pub l2_theta: f64,
    pub zero_u1: f64,
    pub zero_u2: f64,
}

impl SeriesRow {
    pub fn ck_total_int(&self) -> f64 {
        self.ck_lambda_int + self.ck_theta_int + self.ck_lambda_weight_int
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub config: RunConfig,
    pub dt: f64,
    pub steps: usize,
    pub rows: Vec<SeriesRow>,
    pub support: SupportTrace,
    /// `(t, θ̂)` at every sample when snapshots are kept.
    pub snapshots: Vec<(f64, SpectralField)>,
    pub max_cfl: f64,
    /// Steps whose CFL number exceeded [`CFL_LIMIT`].
    pub cfl_flags: usize,
    pub initial_max: f64,
    pub cutoff_m: f64,
    pub final_state: SimulationState,
}

impl Trajectory {
    pub fn series(&self, f: impl Fn(&SeriesRow) -> f64) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.t, f(r))).collect()
    }
}

/// Coefficients inside the dealiased band `|k| ≤ Nz/3`, `|m| ≤ (Ny−1)/3`.
pub fn band_limit(f: &SpectralField) -> SpectralField {
    let g = f.grid;
    let kd = g.k_dealias() as i64;
    let md = (g.my() / 3) as i64;
    let mut out = f.clone();
    for ik in 0..g.nz {
        for jm in 0..g.my() {
            if g.k_at(ik).abs() > kd || fourier_core::Grid::wavenumber(jm, g.my()).abs() > md {
                *out.get_mut(ik, jm) = Complex64::new(0.0, 0.0);
            }
        }
    }
    out
}

struct Recorder<'a> {
    ev: &'a Evolver,
    table: WeightTable,
    cfg: &'a RunConfig,
    ys: Vec<f64>,
    rows: Vec<SeriesRow>,
    support: SupportTrace,
    snapshots: Vec<(f64, SpectralField)>,
    last_ck: Option<(f64, [f64; 3])>,
}

impl Recorder<'_> {
    fn record(&mut self, state: &SimulationState) -> Result<()> {
        let ev = self.ev;
        let g = ev.grid;
        let t = state.t;
        let stream = ev.compute_stream(&state.theta, t)?;
        let vel = ev.velocity(&stream)?;
        let hat = ev.transformer().forward_modes(&state.theta);
        let ck = energy_and_ck(&band_limit(&hat), t, &self.table).map_err(|e| EvolverError::Weights(e.to_string()))?;
        let rates = [ck.ck_lambda, ck.ck_theta, ck.ck_lambda_weight];
        let mut ints = self.rows.last().map_or([0.0; 3], |r| [r.ck_lambda_int, r.ck_theta_int, r.ck_lambda_weight_int]);
        if let Some((t0, prev)) = self.last_ck {
            for i in 0..3 {
                ints[i] += 0.5 * (t - t0) * (prev[i] + rates[i]);
            }
        }
        self.last_ck = Some((t, rates));
        let rows = ev.row_max(state)?;
        let supp = self.support.record(t, &self.ys, &rows);
        let gn = gevrey_norm(&hat, self.cfg.gevrey_lambda(), self.cfg.weights.sigma, 1.0 / 3.0).map_err(|e| EvolverError::Fourier(e.to_string()))?;
        self.rows.push(SeriesRow {
            t,
            energy: ck.energy,
            l2_u1: vel.l2_u1,
            l2_u2: vel.l2_u2,
            linf_u1: vel.linf_u1,
            linf_u2: vel.linf_u2,
            supp_lo: supp.map_or(f64::NAN, |s| s.0),
            supp_hi: supp.map_or(f64::NAN, |s| s.1),
            gevrey_norm: gn,
            ck_lambda_int: ints[0],
            ck_theta_int: ints[1],
            ck_lambda_weight_int: ints[2],
            mass: ev.mass(state),
            l2_theta: modes_l2(&state.theta, g.hy()),
            zero_u1: vel.zero_u1,
            zero_u2: vel.zero_u2,
        });
        if self.cfg.keep_snapshots {
            self.snapshots.push((t, hat));
        }
        Ok(())
    }
}

/// Build everything from the config, step to `t_max` and record samples.
pub fn run(cfg: &RunConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let cutoff = CutoffFunction::build(cfg.kappa, cfg.s0, grid)?;
    let cutoff_m = cutoff.m_fit;
    let background = BackgroundDensity::build(grid, cfg.kappa, cfg.delta, cfg.background_sign, cfg.lambda_b)?;
    let mut ev = Evolver::new(grid, cutoff, background, cfg.kappa, cfg.nonlinear)?;
    let initial = InitialData { epsilon: cfg.epsilon, modes: cfg.initial_modes.clone() };
    let mut state = SimulationState { t: 0.0, theta: initial.modes(grid, cfg.kappa)? };
    let initial_max = ev.theta_field(&state)?.max_abs();
    ev.guard = SUPPORT_THRESHOLD * initial_max;
    ev.check_support(&state)?;

    let (_, speed) = ev.rhs(&state.theta, 0.0)?;
    let mut dt = cfg.dt;
    let unit = ev.cfl(speed, 1.0);
    if unit > 0.0 {
        dt = dt.min(CFL_TARGET / unit);
    }
    let steps = (cfg.t_max / dt - 1e-9).ceil().max(1.0) as usize;
    let dt = cfg.t_max / steps as f64;

    let mut rec = Recorder {
        ev: &ev,
        table: WeightTable::build(cfg.weights, grid),
        cfg,
        ys: grid.ys(),
        rows: Vec::new(),
        support: SupportTrace::new(initial_max),
        snapshots: Vec::new(),
        last_ck: None,
    };
    rec.record(&state)?;
    let (mut max_cfl, mut cfl_flags) = (0.0f64, 0usize);
    for n in 1..=steps {
        let info = ev.step(&mut state, dt)?;
        // Land exactly on multiples of dt.
        state.t = n as f64 * dt;
        max_cfl = max_cfl.max(info.cfl);
        if info.cfl > CFL_LIMIT {
            cfl_flags += 1;
        }
        if n % cfg.output_every == 0 || n == steps {
            rec.record(&state)?;
        }
    }
    let Recorder { rows, support, snapshots, .. } = rec;
    Ok(Trajectory { config: cfg.clone(), dt, steps, rows, support, snapshots, max_cfl, cfl_flags, initial_max, cutoff_m, final_state: state })
}
