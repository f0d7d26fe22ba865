use fourier_core::{Grid, SpectralField, Transformer};
use num_complex::Complex64;
use proptest::prelude::*;
use stokes_solver::{solve_mode_green, BvpSolver};
use transport_evolver::evolver::modes_l2;
use transport_evolver::*;

const KAPPA: f64 = 0.1;
const S0: f64 = 1.0 / 3.0;

fn evolver(nz: usize, ny: usize, delta: f64, nonlinear: bool) -> Evolver {
    let g = Grid::new(nz, ny).unwrap();
    let cut = CutoffFunction::build(KAPPA, S0, g).unwrap();
    let bg = BackgroundDensity::build(g, KAPPA, delta, 1.0, 0.5).unwrap();
    Evolver::new(g, cut, bg, KAPPA, nonlinear).unwrap()
}

fn rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

#[test]
fn cutoff_shape_and_growth() {
    let g = Grid::new(32, 256).unwrap();
    let c = CutoffFunction::build(KAPPA, S0, g).unwrap();
    assert_eq!(c.eval(0.5, 0), 1.0);
    assert_eq!(c.eval(0.0, 0), 0.0);
    assert_eq!(c.eval(1.0, 0), 0.0);
    for (y, v) in g.ys().iter().zip(c.values()) {
        assert!((0.0..=1.0).contains(v));
        if *y >= KAPPA && *y <= 1.0 - KAPPA {
            assert!((v - 1.0).abs() < 1e-15, "{y}");
        }
        if *y <= KAPPA / 2.0 || *y >= 1.0 - KAPPA / 2.0 {
            assert_eq!(*v, 0.0);
        }
    }
    assert!(c.m_fit.is_finite() && c.m_fit > 0.0);
    assert!(c.obeys(c.m_fit));
    assert!(!c.obeys(0.9 * c.m_fit));
}

#[test]
fn cutoff_derivatives_match_finite_differences() {
    let g = Grid::new(32, 256).unwrap();
    let c = CutoffFunction::build(KAPPA, S0, g).unwrap();
    let h = 1e-4;
    for y in [0.06, 0.07, 0.085, 0.93, 0.91] {
        for m in 1..=4 {
            let f = |d: f64| c.eval(y + d, m - 1);
            let fd = (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
            let ex = c.eval(y, m);
            assert!((fd - ex).abs() <= 1e-5 * ex.abs().max(1.0), "y={y} m={m}: {fd} vs {ex}");
        }
    }
    for (j, y) in g.ys().iter().enumerate() {
        assert_eq!(c.derivs[2][j], c.eval(*y, 2));
    }
}

#[test]
fn cutoff_rejects_coarse_grids() {
    let g = Grid::new(32, 64).unwrap();
    assert!(matches!(CutoffFunction::build(KAPPA, S0, g), Err(EvolverError::Resolution(_))));
    assert!(CutoffFunction::build(0.2, S0, Grid::new(32, 256).unwrap()).is_err());
}

fn bump_modes(g: Grid, k: i64, amp: f64) -> Vec<Vec<Complex64>> {
    InitialData { epsilon: amp, modes: vec![(k, 1.0)] }.modes(g, KAPPA).unwrap()
}

#[test]
fn zero_mode_density_has_no_stream() {
    let ev = evolver(32, 128, 0.0, true);
    let mut th = vec![vec![Complex64::new(0.0, 0.0); 128]; 32];
    th[0] = ev.cutoff.values().iter().map(|v| Complex64::new(*v, 0.0)).collect();
    let s = ev.compute_stream(&th, 3.0).unwrap();
    assert!(s.phi.iter().flatten().all(|v| v.norm() == 0.0));
}

#[test]
fn stream_matches_green_function_in_the_lab_frame() {
    let ev = evolver(32, 256, 0.0, true);
    let g = ev.grid;
    let th = bump_modes(g, 1, 1.0);
    for t in [0.0, 2.5, 7.0] {
        let s = ev.compute_stream(&th, t).unwrap();
        let rho: Vec<Complex64> = th[1].iter().zip(g.ys()).map(|(v, y)| v * Complex64::from_polar(1.0, -t * y)).collect();
        let green = solve_mode_green(1, &rho).unwrap();
        let phi: Vec<Complex64> = green.iter().zip(g.ys()).map(|(v, y)| v * Complex64::from_polar(1.0, t * y)).collect();
        assert!(rel(&s.phi[1], &phi) < 1e-8, "t={t}: {}", rel(&s.phi[1], &phi));
        let neg = &s.phi[g.nz - 1];
        assert!(neg.iter().zip(&s.phi[1]).all(|(a, b)| *a == b.conj()));
        // Discrete residual of the clamped system the stepper inverts.
        let solver = BvpSolver::new(1, g.ny).unwrap();
        let (psi, w) = solver.solve_with_aux(&rho).unwrap();
        let r = solver.residual(&psi, &w, &rho).unwrap();
        let rn: f64 = r.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let bn: f64 = rho.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        assert!(rn <= 1e-7 * bn);
    }
}

#[test]
fn rest_state_and_pure_background() {
    for delta in [0.0, 1e-2] {
        let ev = evolver(32, 128, delta, true);
        let (r, speed) = ev.rhs(&SimulationState::zeros(ev.grid).theta, 4.0).unwrap();
        assert_eq!(speed, 0.0);
        assert!(r.iter().flatten().all(|v| v.norm() == 0.0));
    }
}

#[test]
fn rhs_preserves_the_mean() {
    let ev = evolver(32, 128, 5e-2, true);
    let mut th = bump_modes(ev.grid, 1, 0.5);
    let extra = bump_modes(ev.grid, 3, 0.2);
    for (a, b) in th.iter_mut().zip(&extra) {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    }
    let (r, _) = ev.rhs(&th, 1.3).unwrap();
    let state = SimulationState { t: 0.0, theta: r };
    assert!(ev.mass(&state).abs() < 1e-10);
}

#[test]
fn zero_data_stays_zero() {
    let ev = evolver(32, 128, 1e-2, true);
    let mut s = SimulationState::zeros(ev.grid);
    for _ in 0..5 {
        ev.step(&mut s, 0.1).unwrap();
    }
    assert!(s.theta.iter().flatten().all(|v| v.norm() == 0.0));
}

#[test]
fn rk4_is_fourth_order() {
    let ev = evolver(32, 128, 0.5, true);
    let th0 = bump_modes(ev.grid, 1, 20.0);
    let solve = |n: usize| {
        let mut s = SimulationState { t: 0.0, theta: th0.clone() };
        let dt = 2.0 / n as f64;
        for i in 0..n {
            ev.step(&mut s, dt).unwrap();
            s.t = (i + 1) as f64 * dt;
        }
        s.theta
    };
    let (a, b, c) = (solve(5), solve(10), solve(20));
    let diff = |x: &Vec<Vec<Complex64>>, y: &Vec<Vec<Complex64>>| {
        let d: Vec<Vec<Complex64>> = x.iter().zip(y).map(|(p, q)| p.iter().zip(q).map(|(u, v)| u - v).collect()).collect();
        modes_l2(&d, ev.grid.hy())
    };
    let d1 = diff(&a, &b);
    let d2 = diff(&b, &c);
    let change = diff(&c, &th0);
    assert!(change > 1e3 * d1, "dynamics too weak to measure the order: {change} vs {d1}");
    let order = (d1 / d2).log2();
    assert!(order >= 3.8, "order {order}");
}

#[test]
fn velocity_zero_modes_vanish() {
    let ev = evolver(32, 128, 1e-2, true);
    let th = bump_modes(ev.grid, 1, 1e-3);
    for t in [0.0, 5.0, 20.0] {
        let v = ev.velocity(&ev.compute_stream(&th, t).unwrap()).unwrap();
        assert!(v.zero_u1 <= 1e-12 && v.zero_u2 <= 1e-12);
        assert!(v.l2_u1 > 0.0 && v.l2_u2 > 0.0);
    }
}

#[test]
fn frozen_stream_decays_like_t_to_minus_four() {
    let ev = evolver(32, 1024, 0.0, true);
    let th = bump_modes(ev.grid, 1, 1.0);
    let series: Vec<(f64, f64)> = (0..=90)
        .map(|i| {
            let t = 10.0 + i as f64;
            let s = ev.compute_stream(&th, t).unwrap();
            (t, modes_l2(&s.phi[1..2], ev.grid.hy()))
        })
        .collect();
    let fit = diagnostics::fit_decay(&series, (10.0, 100.0)).unwrap();
    assert!((fit.exponent + 4.0).abs() <= 0.3, "{}", fit.exponent);
}

fn random_spectral(g: Grid, seed: u64) -> SpectralField {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(g);
    f.data.iter_mut().for_each(|c| *c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    f
}

#[test]
fn linear_evolution_identity_and_zero_column() {
    let g = Grid::new(32, 64).unwrap();
    let f = random_spectral(g, 3);
    let same = linear_evolution(&f, 0.0);
    assert!(same.data.iter().zip(&f.data).all(|(a, b)| (a - b).norm() < 1e-13));
    let later = linear_evolution(&f, 7.3);
    for jm in 0..g.my() {
        assert!((later.get(0, jm) - f.get(0, jm)).norm() < 1e-13);
    }
}

proptest! {
    #[test]
    fn linear_evolution_preserves_mode_norms(seed in 0u64..1000, t in 0.0f64..200.0) {
        let g = Grid::new(32, 64).unwrap();
        let f = random_spectral(g, seed);
        let e = linear_evolution(&f, t);
        for ik in 0..g.nz {
            let n0: f64 = (0..g.my()).map(|j| f.get(ik, j).norm_sqr()).sum();
            let n1: f64 = (0..g.my()).map(|j| e.get(ik, j).norm_sqr()).sum();
            prop_assert!((n0 - n1).abs() <= 1e-12 * n0);
        }
    }
}

#[test]
fn free_streaming_is_stationary_in_the_moving_frame() {
    // Lab-frame data pulled back with e^{+ikty} recovers the initial profiles.
    let g = Grid::new(32, 64).unwrap();
    let f = random_spectral(g, 11);
    let t = 3.7;
    let tr = Transformer::new(g);
    let lab = tr.inverse_modes(&linear_evolution(&f, t)).unwrap();
    let back = linear_evolution_modes(&lab, |ik| -g.k_at(ik), &g.ys(), t);
    let orig = tr.inverse_modes(&f).unwrap();
    // The last sample repeats y = 0 and is not part of the periodic data.
    for (a, b) in back.iter().zip(&orig) {
        assert!(rel(&a[..g.my()], &b[..g.my()]) < 1e-12);
    }
}

#[test]
fn snapshot_round_trip() {
    let g = Grid::new(32, 64).unwrap();
    let f = random_spectral(g, 5);
    let mut buf = Vec::new();
    write_snapshot(&mut buf, 12.5, &f).unwrap();
    assert_eq!(buf.len(), 16 + 8 + 16 * f.data.len());
    assert_eq!(&buf[..4], b"STXS");
    assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 32);
    assert_eq!(u32::from_le_bytes(buf[12..16].try_into().unwrap()), 64);
    let (t, back) = read_snapshot(&mut buf.as_slice()).unwrap();
    assert_eq!(t, 12.5);
    assert_eq!(back, f);
    buf[0] = b'X';
    assert!(read_snapshot(&mut buf.as_slice()).is_err());
}

fn small_config() -> RunConfig {
    RunConfig { nz: 32, ny: 128, t_max: 4.0, dt: 0.1, output_every: 2, ..RunConfig::default() }
}

#[test]
fn zero_amplitude_run_is_trivial() {
    let cfg = RunConfig { epsilon: 0.0, delta: 1e-3, ..small_config() };
    let tr = run(&cfg).unwrap();
    for r in &tr.rows {
        assert_eq!((r.energy, r.l2_u1, r.l2_u2, r.linf_u1, r.linf_u2, r.gevrey_norm), (0.0, 0.0, 0.0, 0.0, 0.0, 0.0));
        assert_eq!(r.ck_total_int(), 0.0);
        assert!(r.supp_lo.is_nan() && r.supp_hi.is_nan());
    }
}

#[test]
fn short_run_conserves_mass_and_l2() {
    let tr = run(&small_config()).unwrap();
    let first = tr.rows.first().unwrap();
    let last = tr.rows.last().unwrap();
    let span = last.t - first.t;
    assert!((last.t - 4.0).abs() < 1e-12);
    assert!((last.mass - first.mass).abs() / span <= 1e-10);
    assert!((last.l2_theta - first.l2_theta).abs() / span <= 1e-6);
    assert!(tr.rows.iter().all(|r| r.zero_u1 <= 1e-12 && r.zero_u2 <= 1e-12));
    assert!(tr.rows.iter().all(|r| r.energy > 0.0 && r.ck_total_int() >= 0.0));
    assert_eq!(tr.cfl_flags, 0);
    assert_eq!(tr.snapshots.len(), tr.rows.len());
}

#[test]
fn support_guard_stops_runs_touching_the_walls() {
    let ev = evolver(32, 128, 0.0, true);
    let mut s = SimulationState::zeros(ev.grid);
    s.theta[1][2] = Complex64::new(1e-3, 0.0);
    assert!(matches!(ev.check_support(&s), Err(EvolverError::SupportBreach { .. })));
}
