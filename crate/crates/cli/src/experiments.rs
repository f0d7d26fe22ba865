//! The subcommands: each computes a typed result with its checks, and
//! [`run_experiment`] writes the artifacts.

use crate::config::{Experiment, ExperimentConfig};
use crate::output::{all_pass, write_csv, write_json, Check};
use anyhow::{anyhow, Context, Result};
use diagnostics::{
    bootstrap_monitor, default_window, epsilon_sweep, fit_decay, scattering_profile, scattering_window,
    BootstrapReport, BootstrapSample, DecayFit, SupportTrace, SweepFit,
};
use fourier_core::{gevrey_norm, l2_norm_spectral, ChannelField, Grid, SpectralField, Transformer};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::Path;
use stokes_solver::{solve_mode_bvp, FourierKernelG};
use transport_evolver::evolver::modes_l2;
use transport_evolver::{
    run, write_snapshot, BackgroundDensity, CutoffFunction, Evolver, InitialData, RunConfig, Trajectory,
};
use weights::lemmas::LemmaConfig;
use weights::{calibrate_c1, paraproduct_check, toy_model_full, verify_lemmas, LambdaWeight, LemmaReport, ParaproductReport, ThetaWeight, ToyTrajectory, WeightTable};

/// Support may move towards a wall by at most this multiple of `ε`.
pub const SUPPORT_SLACK: f64 = 10.0;
pub const ZERO_MODE_LIMIT: f64 = 1e-12;
pub const MASS_DRIFT_LIMIT: f64 = 1e-10;
pub const L2_DRIFT_LIMIT: f64 = 1e-6;
pub const KERNEL_CONSTANT_LIMIT: f64 = 1e3;
pub const RECONSTRUCTION_LIMIT: f64 = 1e-6;
pub const PARAPRODUCT_LIMIT: f64 = 1e-10;
pub const PARAPRODUCT_GRID: usize = 64;
/// Times at which the moving-frame kernel is checked.
pub const MOVING_FRAME_TIMES: [f64; 3] = [0.0, 5.0, 20.0];

// ---------------------------------------------------------------- simulate

#[derive(Debug, Clone, Serialize)]
pub struct SimulateFits {
    pub window: (f64, f64),
    pub u1: Option<DecayFit>,
    pub u2: Option<DecayFit>,
    pub scattering_window: (f64, f64),
    pub scattering: Option<DecayFit>,
    /// Gevrey norm of `θ(T)` at `λ_∞`.
    pub rho_inf_gevrey_norm: f64,
    pub stationary: bool,
}

pub struct SimulateResult {
    pub trajectory: Trajectory,
    pub fits: SimulateFits,
    pub checks: Vec<Check>,
}

impl SimulateResult {
    pub fn pass(&self) -> bool {
        all_pass(&self.checks)
    }

    /// Largest inward move of the support relative to `t = 0`.
    pub fn support_shrink(&self) -> f64 {
        match (self.trajectory.support.initial_margin(), self.trajectory.support.min_margin()) {
            (Some(a), Some(b)) => a - b,
            _ => 0.0,
        }
    }

    pub fn max_zero_mode(&self) -> f64 {
        self.trajectory.rows.iter().map(|r| r.zero_u1.max(r.zero_u2)).fold(0.0, f64::max)
    }

    /// `max_t |∫∫θ(t) − ∫∫θ(0)| / T`.
    pub fn mass_drift_rate(&self) -> f64 {
        let rows = &self.trajectory.rows;
        let m0 = rows[0].mass;
        rows.iter().map(|r| (r.mass - m0).abs()).fold(0.0, f64::max) / self.trajectory.config.t_max
    }

    /// `max_t |‖θ(t)‖ − ‖θ(0)‖| / (‖θ(0)‖ T)`, zero for zero data.
    pub fn l2_drift_rate(&self) -> f64 {
        let rows = &self.trajectory.rows;
        let n0 = rows[0].l2_theta;
        if n0 == 0.0 {
            return 0.0;
        }
        rows.iter().map(|r| (r.l2_theta - n0).abs()).fold(0.0, f64::max) / (n0 * self.trajectory.config.t_max)
    }
}

fn fit_or_none(series: &[(f64, f64)], window: (f64, f64)) -> Option<DecayFit> {
    fit_decay(series, window).ok()
}

pub fn simulate(cfg: &ExperimentConfig) -> Result<SimulateResult> {
    let run_cfg = RunConfig { keep_snapshots: true, ..cfg.run.clone() };
    let tr = run(&run_cfg)?;
    let t_max = run_cfg.t_max;
    let window = cfg.fit_window.unwrap_or_else(|| default_window(t_max));
    let u1 = fit_or_none(&tr.series(|r| r.l2_u1), window);
    let u2 = fit_or_none(&tr.series(|r| r.l2_u2), window);
    let w = run_cfg.weights;
    let swin = scattering_window(t_max);
    let profile = scattering_profile(
        &tr.snapshots,
        |a: &SpectralField, b: &SpectralField| {
            let d = SpectralField { grid: a.grid, data: a.data.iter().zip(&b.data).map(|(x, y)| x - y).collect() };
            l2_norm_spectral(&d)
        },
        |f| gevrey_norm(f, w.lambda_inf, w.sigma, 1.0 / 3.0).unwrap_or(f64::NAN),
        Some(swin),
    );
    let (scattering, rho_inf_gevrey_norm, stationary) = match profile {
        Ok(p) => (p.fit, p.gevrey_norm, p.stationary()),
        Err(_) => (None, f64::NAN, false),
    };
    let fits = SimulateFits { window, u1, u2, scattering_window: swin, scattering, rho_inf_gevrey_norm, stationary };
    let mut res = SimulateResult { trajectory: tr, fits, checks: Vec::new() };
    let eps = run_cfg.epsilon;
    res.checks = vec![
        Check::at_most("support_shrink", res.support_shrink(), SUPPORT_SLACK * eps),
        Check::at_most("zero_modes", res.max_zero_mode(), ZERO_MODE_LIMIT),
        Check::at_most("mass_drift_rate", res.mass_drift_rate(), MASS_DRIFT_LIMIT),
        Check::at_most("l2_drift_rate", res.l2_drift_rate(), L2_DRIFT_LIMIT).enabled(run_cfg.delta == 0.0),
        Check::at_most("max_cfl", res.trajectory.max_cfl, transport_evolver::CFL_LIMIT),
        Check::near("u1_exponent", res.fits.u1.as_ref().map(|f| f.exponent), -3.0, 0.3).enabled(cfg.strict),
        Check::near("u2_exponent", res.fits.u2.as_ref().map(|f| f.exponent), -4.0, 0.3).enabled(cfg.strict),
        Check::near("scattering_exponent", res.fits.scattering.as_ref().map(|f| f.exponent), -3.0, 0.5).enabled(cfg.strict),
    ];
    Ok(res)
}

pub const SERIES_HEADER: [&str; 12] = [
    "t", "E", "L2_U1", "L2_U2", "Linf_U1", "Linf_U2", "supp_lo", "supp_hi", "gevrey_norm", "CK_lambda_int", "CK_Theta_int", "CK_Lambda_int",
];

pub fn write_series(path: &Path, tr: &Trajectory) -> std::io::Result<()> {
    write_csv(
        path,
        &SERIES_HEADER,
        tr.rows.iter().map(|r| {
            vec![r.t, r.energy, r.l2_u1, r.l2_u2, r.linf_u1, r.linf_u2, r.supp_lo, r.supp_hi, r.gevrey_norm, r.ck_lambda_int, r.ck_theta_int, r.ck_lambda_weight_int]
        }),
    )
}

fn write_monitors(path: &Path, tr: &Trajectory) -> std::io::Result<()> {
    write_csv(
        path,
        &["t", "mass", "L2_theta", "zero_U1", "zero_U2"],
        tr.rows.iter().map(|r| vec![r.t, r.mass, r.l2_theta, r.zero_u1, r.zero_u2]),
    )
}

// ---------------------------------------------------------- linear damping

#[derive(Debug, Clone, Serialize)]
pub struct LinearDampingResult {
    pub k: i64,
    /// `(t, ‖φ̃_k(t)‖_{L²})`.
    pub series: Vec<(f64, f64)>,
    pub fit: DecayFit,
    pub checks: Vec<Check>,
}

/// Stream function of the frozen initial bump `cos(kz) B(y)` seen from the
/// moving frame at integer times across the window.
pub fn linear_damping(cfg: &ExperimentConfig) -> Result<LinearDampingResult> {
    let r = &cfg.run;
    let grid = r.grid()?;
    let k = cfg.linear_k;
    let ik = Grid::index_of(k, grid.nz).filter(|_| k.unsigned_abs() as usize <= grid.k_dealias()).ok_or_else(|| anyhow!("linear.k = {k} is outside the dealiased band of Nz = {}", grid.nz))?;
    let cutoff = CutoffFunction::build(r.kappa, r.s0, grid)?;
    let background = BackgroundDensity::build(grid, r.kappa, 0.0, 1.0, r.lambda_b)?;
    let ev = Evolver::new(grid, cutoff, background, r.kappa, false)?;
    let theta = InitialData { epsilon: 1.0, modes: vec![(k, 1.0)] }.modes(grid, r.kappa)?;
    let (t0, t1) = cfg.linear_window;
    let n = ((t1 - t0).ceil() as usize).max(diagnostics::MIN_SAMPLES);
    let series = (0..=n)
        .map(|i| {
            let t = t0 + (t1 - t0) * i as f64 / n as f64;
            let s = ev.compute_stream(&theta, t)?;
            Ok((t, modes_l2(&s.phi[ik..ik + 1], grid.hy())))
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_decay(&series, cfg.linear_window)?;
    let checks = vec![Check::near("stream_exponent", Some(fit.exponent), -4.0, 0.3)];
    Ok(LinearDampingResult { k, series, fit, checks })
}

// ------------------------------------------------------------ kernel check

#[derive(Debug, Clone, Serialize)]
pub struct KernelRow {
    pub k: i64,
    #[serde(rename = "C_fit")]
    pub c_fit: f64,
    pub lambda_fit: f64,
    /// Largest relative error of the reconstruction `(χψ̃_k)^ = Σ G ρ̂`.
    pub max_relative_error: f64,
    /// `max |G|·max{(k²+η²)²,(k²+ζ²)²}/(|k| e^{−λ|η−ζ|^s})` over the lattice.
    pub max_bound_ratio: f64,
    pub tail_lambda: f64,
    pub moving_frame_shift_error: f64,
    /// `max |𝔊(t)| / bound(η−kt, ζ−kt)` over random lattice points.
    pub moving_frame_bound_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelResult {
    pub ny: usize,
    pub rows: Vec<KernelRow>,
    /// `(k, |η−ζ|^s, max weighted |G|, fitted envelope)`.
    #[serde(skip)]
    pub envelope: Vec<[f64; 4]>,
    pub checks: Vec<Check>,
}

/// A smooth density supported in `[0.2, 0.8]` with random oscillation.
pub fn interior_density(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let f = rng.gen_range(0.0..15.0);
    let c = rng.gen_range(-1.0..1.0);
    (0..n)
        .map(|j| {
            let y = j as f64 / (n - 1) as f64;
            let e = transport_evolver::bump(y, 0.2, 0.8);
            Complex64::new(e, c * e * (f * y).sin())
        })
        .collect()
}

fn rel_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|x| x.norm_sqr()).sum();
    (num / den).sqrt()
}

fn kernel_row(k: i64, chi: &[f64], s0: f64, seed: u64) -> Result<(KernelRow, Vec<[f64; 4]>)> {
    let n = chi.len();
    let g = FourierKernelG::build(k, chi, s0)?;
    let grid = g.grid();
    let tr = Transformer::new(grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));

    let mut max_relative_error = 0.0f64;
    for _ in 0..5 {
        let rho = interior_density(n, &mut rng);
        let psi = solve_mode_bvp(k, &rho)?;
        let chipsi: Vec<Complex64> = psi.iter().zip(chi).map(|(p, c)| p * *c).collect();
        max_relative_error = max_relative_error.max(rel_l2(&g.apply(&tr.y_forward(&rho)), &tr.y_forward(&chipsi)));
    }

    let samples = g.bound_samples();
    let max_bound_ratio = samples.iter().map(|(d, v)| v * (g.fit.lambda * d).exp()).fold(0.0, f64::max);
    let mut env: std::collections::BTreeMap<u64, f64> = Default::default();
    for (d, v) in &samples {
        let e = env.entry(d.to_bits()).or_insert(0.0);
        *e = e.max(*v);
    }
    let envelope = env.into_iter().map(|(d, v)| {
        let d = f64::from_bits(d);
        [k as f64, d, v, g.fit.c * (-g.fit.lambda * d).exp()]
    });

    let lattice = |i: i64| 2.0 * std::f64::consts::PI * i as f64;
    let top = g.max_abs();
    let (mut shift, mut ratio) = (0.0f64, 0.0f64);
    for t in MOVING_FRAME_TIMES {
        let kt = k as f64 * t;
        for _ in 0..12 {
            let (e, z) = (lattice(rng.gen_range(-40..40)), lattice(rng.gen_range(-40..40)));
            let v = g.moving_frame(t, e, z);
            let direct = g.eval(e - kt, z - kt);
            shift = shift.max((v - direct).norm() / direct.norm().max(f64::MIN_POSITIVE));
            ratio = ratio.max(v.norm() / (g.bound(e - kt, z - kt) + 1e-13 * top));
        }
    }
    let row = KernelRow {
        k,
        c_fit: g.fit.c,
        lambda_fit: g.fit.lambda,
        max_relative_error,
        max_bound_ratio,
        tail_lambda: g.tail_lambda,
        moving_frame_shift_error: shift,
        moving_frame_bound_ratio: ratio,
    };
    Ok((row, envelope.collect()))
}

pub fn kernel_check(cfg: &ExperimentConfig) -> Result<KernelResult> {
    let ny = cfg.kernel_ny;
    let grid = Grid::unchecked(2, ny)?;
    let chi = CutoffFunction::build(cfg.run.kappa, cfg.run.s0, grid)?.values().to_vec();
    let mut rows = Vec::new();
    let mut envelope = Vec::new();
    let mut checks = Vec::new();
    for &k in &cfg.kernel_ks {
        let (row, env) = kernel_row(k, &chi, cfg.run.s0, cfg.rng_seed)?;
        checks.push(Check::new(&format!("k{k}_lambda_fit"), row.lambda_fit, "> 0", row.lambda_fit > 0.0));
        checks.push(Check::at_most(&format!("k{k}_bound_ratio"), row.max_bound_ratio, KERNEL_CONSTANT_LIMIT));
        checks.push(Check::at_most(&format!("k{k}_reconstruction"), row.max_relative_error, RECONSTRUCTION_LIMIT));
        checks.push(Check::at_most(&format!("k{k}_moving_frame_shift"), row.moving_frame_shift_error, 1e-12));
        checks.push(Check::at_most(&format!("k{k}_moving_frame_bound"), row.moving_frame_bound_ratio, 2.0));
        rows.push(row);
        envelope.extend(env);
    }
    Ok(KernelResult { ny, rows, envelope, checks })
}

// ----------------------------------------------------------- weights check

#[derive(Debug, Clone, Serialize)]
pub struct WeightsResult {
    pub lemmas: LemmaReport,
    /// Largest `log(1/Λ)/((3π/20)|η|^{1/3})` on the simulation lattice.
    pub lambda_lattice_ratio: f64,
    /// Smallest `log(1/Λ)` on the lattice; negative would mean `Λ > 1`.
    pub lambda_lattice_min_log: f64,
    pub checks: Vec<Check>,
}

/// `Λ` bounds on every `η` of the configured grid at 401 times in `[0, 2.5|η|]`.
pub fn lambda_lattice(grid: Grid) -> (f64, f64) {
    let (mut ratio, mut low) = (0.0f64, f64::INFINITY);
    for j in 0..grid.my() {
        let eta = grid.eta_at(j);
        let w = LambdaWeight::build(eta);
        let bound = LambdaWeight::log_bound(eta);
        for i in 0..=400 {
            let v = -w.log_value(2.5 * eta.abs() * i as f64 / 400.0);
            low = low.min(v);
            if bound > 0.0 {
                ratio = ratio.max(v / bound);
            } else if v > 0.0 {
                ratio = f64::INFINITY;
            }
        }
    }
    (ratio, low)
}

pub fn weights_check(cfg: &ExperimentConfig) -> Result<WeightsResult> {
    let lc = LemmaConfig { samples: cfg.lemma_samples, seed: cfg.rng_seed, ..LemmaConfig::default() };
    let lemmas = verify_lemmas(&cfg.run.weights, &lc)?;
    let (lambda_lattice_ratio, lambda_lattice_min_log) = lambda_lattice(cfg.run.grid()?);
    let mut checks = Vec::new();
    for l in [&lemmas.theta_nonresonant, &lemmas.lambda_fraction, &lemmas.ratio_j] {
        let name = l.name.replace(' ', "_").to_ascii_lowercase();
        checks.push(Check::at_most(&format!("{name}_constant"), l.max_constant, lc.ceiling));
        checks.push(Check::at_most(&format!("{name}_slope"), l.slope, lc.max_slope));
    }
    checks.push(Check::new("scenario_coverage", lemmas.scenarios.coverage, "= 1", lemmas.scenarios.pass));
    checks.push(Check::at_most("lambda_growth_ratio", lemmas.lambda_growth_max_log_ratio.max(lambda_lattice_ratio), 1.0));
    checks.push(Check::new("lambda_at_most_one", lambda_lattice_min_log, ">= 0", lambda_lattice_min_log >= 0.0));
    for row in &lemmas.total_growth {
        let v = row.log_ratio.abs();
        checks.push(Check::at_most(&format!("total_growth_eta_{:e}", row.eta), v, 10f64.ln()).enabled(cfg.strict));
    }
    Ok(WeightsResult { lemmas, lambda_lattice_ratio, lambda_lattice_min_log, checks })
}

// --------------------------------------------------------------- toy model

#[derive(Debug, Clone, Serialize)]
pub struct ToyRow {
    pub eta: f64,
    pub c1: f64,
    pub log_max_growth: f64,
    pub log_envelope: f64,
}

pub struct ToyResult {
    pub rows: Vec<ToyRow>,
    pub trajectories: Vec<ToyTrajectory>,
    pub checks: Vec<Check>,
}

/// Toy growth against the `Θ` envelope at the `C₁` matched to `ς`.
pub fn toy_model(cfg: &ExperimentConfig) -> Result<ToyResult> {
    let (mut rows, mut trajectories, mut checks) = (Vec::new(), Vec::new(), Vec::new());
    for &eta in &cfg.toy_etas {
        let c1 = calibrate_c1(eta, cfg.toy_varsigma)?;
        let tr = toy_model_full(eta, cfg.toy_varsigma)?;
        let log_envelope = ThetaWeight::log_envelope(eta, 60.0 * (1.0 + 2.0 * c1));
        let log_max_growth = tr.max_growth().ln();
        checks.push(Check::at_most(&format!("eta_{eta:e}_growth_excess"), log_max_growth - log_envelope, 10f64.ln()));
        rows.push(ToyRow { eta, c1, log_max_growth, log_envelope });
        trajectories.push(tr);
    }
    Ok(ToyResult { rows, trajectories, checks })
}

// ------------------------------------------------------ paraproduct check

#[derive(Debug, Clone, Serialize)]
pub struct ParaproductResult {
    pub grid: usize,
    pub reports: Vec<(f64, ParaproductReport)>,
    pub checks: Vec<Check>,
}

/// A real field with random coefficients damped like `e^{−decay√|k,η|}`.
pub fn random_field(grid: Grid, rng: &mut ChaCha8Rng, decay: f64) -> Result<SpectralField> {
    let tr = Transformer::new(grid);
    let mut f = SpectralField::zeros(grid);
    for c in f.data.iter_mut() {
        *c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let f = f.map_indexed(|k, eta, c| c * (-decay * fourier_core::l1(k, eta).sqrt()).exp());
    let real: ChannelField = tr.inverse(&f)?;
    Ok(tr.forward(&real)?)
}

pub fn paraproduct(cfg: &ExperimentConfig) -> Result<ParaproductResult> {
    let grid = Grid::new(PARAPRODUCT_GRID, PARAPRODUCT_GRID)?;
    let table = WeightTable::build(cfg.run.weights, grid);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    for t in [0.0, 3.0, 25.0] {
        let theta = random_field(grid, &mut rng, 0.3)?;
        let phichi = random_field(grid, &mut rng, 0.3)?;
        let r = paraproduct_check(&theta, &phichi, t, &table)?;
        checks.push(Check::at_most(&format!("t{t}_residual"), r.residual, PARAPRODUCT_LIMIT));
        reports.push((t, r));
    }
    Ok(ParaproductResult { grid: PARAPRODUCT_GRID, reports, checks })
}

// --------------------------------------------------------- bootstrap sweep

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub reports: Vec<BootstrapReport>,
    pub fit: SweepFit,
    pub checks: Vec<Check>,
}

pub fn bootstrap_samples(tr: &Trajectory) -> Vec<BootstrapSample> {
    tr.rows
        .iter()
        .map(|r| BootstrapSample {
            t: r.t,
            energy: r.energy,
            ck_integral: r.ck_total_int(),
            margin: (!r.supp_lo.is_nan()).then(|| SupportTrace::margin((r.supp_lo, r.supp_hi))),
        })
        .collect()
}

pub fn bootstrap_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    for &eps in &cfg.sweep_epsilons {
        let tr = run(&RunConfig { epsilon: eps, t_max: cfg.sweep_t_max, keep_snapshots: false, ..cfg.run.clone() }).with_context(|| format!("run at epsilon = {eps}"))?;
        let rep = bootstrap_monitor(eps, &bootstrap_samples(&tr));
        checks.push(Check::at_most(&format!("eps_{eps:e}_energy_growth"), rep.energy_growth, diagnostics::bootstrap::ENERGY_GROWTH_LIMIT));
        checks.push(Check::at_most(&format!("eps_{eps:e}_ck_late_fraction"), rep.ck_late_fraction, diagnostics::bootstrap::PLATEAU_FRACTION));
        reports.push(rep);
    }
    let fit = epsilon_sweep(&reports)?;
    checks.push(Check::near("energy_slope", Some(fit.slope), diagnostics::bootstrap::SWEEP_SLOPE, diagnostics::bootstrap::SWEEP_TOLERANCE));
    Ok(SweepResult { reports, fit, checks })
}

// ---------------------------------------------------------------- driver

#[derive(Debug, Clone, Serialize)]
struct Report<'a, T: Serialize> {
    experiment: Experiment,
    pass: bool,
    checks: &'a [Check],
    #[serde(flatten)]
    details: T,
}

fn write_report<T: Serialize>(dir: &Path, experiment: Experiment, checks: &[Check], details: T) -> Result<bool> {
    let pass = all_pass(checks);
    write_json(&dir.join("report.json"), &Report { experiment, pass, checks, details })?;
    Ok(pass)
}

#[derive(Serialize)]
struct Meta<'a, T: Serialize> {
    config: &'a ExperimentConfig,
    #[serde(flatten)]
    details: T,
}

/// Run the configured experiment and write its artifacts into
/// `output_dir`. Returns whether every enabled check passed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<bool> {
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let meta = |details: serde_json::Value| write_json(&dir.join("meta.json"), &Meta { config: cfg, details });
    let e = cfg.experiment;
    let pass = match e {
        Experiment::Simulate => {
            let res = simulate(cfg)?;
            let tr = &res.trajectory;
            write_series(&dir.join("series.csv"), tr)?;
            write_monitors(&dir.join("monitors.csv"), tr)?;
            if cfg.snapshots {
                let sd = dir.join("snapshots");
                std::fs::create_dir_all(&sd)?;
                for (i, (t, f)) in tr.snapshots.iter().enumerate() {
                    let mut w = std::io::BufWriter::new(std::fs::File::create(sd.join(format!("theta_{i:06}.bin")))?);
                    write_snapshot(&mut w, *t, f)?;
                }
            }
            meta(serde_json::json!({
                "fits": res.fits,
                "dt": tr.dt,
                "steps": tr.steps,
                "cutoff_M": tr.cutoff_m,
                "max_cfl": tr.max_cfl,
                "cfl_flags": tr.cfl_flags,
            }))?;
            write_report(dir, e, &res.checks, serde_json::json!({
                "support_shrink": res.support_shrink(),
                "max_zero_mode": res.max_zero_mode(),
                "mass_drift_rate": res.mass_drift_rate(),
                "l2_drift_rate": res.l2_drift_rate(),
                "fits": res.fits,
            }))?
        }
        Experiment::LinearDamping => {
            let res = linear_damping(cfg)?;
            write_csv(&dir.join("stream.csv"), &["t", "L2_phi"], res.series.iter().map(|(t, v)| vec![*t, *v]))?;
            meta(serde_json::json!({ "fit": res.fit }))?;
            write_report(dir, e, &res.checks, serde_json::json!({ "k": res.k, "fit": res.fit }))?
        }
        Experiment::KernelCheck => {
            let res = kernel_check(cfg)?;
            write_json(&dir.join("kernel.json"), &res.rows)?;
            write_csv(&dir.join("kernel_samples.csv"), &["k", "dist_s", "weighted_G", "envelope"], res.envelope.iter().map(|r| r.to_vec()))?;
            meta(serde_json::json!({ "fits": res.rows }))?;
            write_report(dir, e, &res.checks, serde_json::json!({ "ny": res.ny, "kernels": res.rows }))?
        }
        Experiment::WeightsCheck => {
            let res = weights_check(cfg)?;
            write_json(&dir.join("lemmas.json"), &res.lemmas)?;
            meta(serde_json::json!({}))?;
            write_report(dir, e, &res.checks, serde_json::json!({
                "lemmas": res.lemmas,
                "lambda_lattice_ratio": res.lambda_lattice_ratio,
                "lambda_lattice_min_log": res.lambda_lattice_min_log,
            }))?
        }
        Experiment::ToyModel => {
            let res = toy_model(cfg)?;
            let rows = res.trajectories.iter().flat_map(|tr| {
                tr.times.iter().zip(&tr.amps).flat_map(move |(t, a)| tr.ks.iter().zip(a).map(move |(k, v)| vec![tr.eta, *t, *k as f64, *v]))
            });
            write_csv(&dir.join("toy_model.csv"), &["eta", "t", "k", "amplitude"], rows)?;
            meta(serde_json::json!({ "rows": res.rows }))?;
            write_report(dir, e, &res.checks, serde_json::json!({ "rows": res.rows }))?
        }
        Experiment::ParaproductCheck => {
            let res = paraproduct(cfg)?;
            meta(serde_json::json!({}))?;
            write_report(dir, e, &res.checks, serde_json::json!({ "grid": res.grid, "reports": res.reports }))?
        }
        Experiment::BootstrapSweep => {
            let res = bootstrap_sweep(cfg)?;
            write_csv(
                &dir.join("sweep.csv"),
                &["epsilon", "max_E", "max_E_over_eps2", "energy_growth", "CK_int", "CK_over_eps2", "CK_late_fraction", "min_margin"],
                res.reports.iter().map(|r| {
                    vec![r.epsilon, r.max_energy, r.max_energy_over_eps2, r.energy_growth, r.ck_integral, r.ck_over_eps2, r.ck_late_fraction, r.min_margin.unwrap_or(f64::NAN)]
                }),
            )?;
            meta(serde_json::json!({ "fit": res.fit }))?;
            write_report(dir, e, &res.checks, serde_json::json!({ "reports": res.reports, "fit": res.fit }))?
        }
    };
    Ok(pass)
}
