use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stokes_solver::green::candidate;
use stokes_solver::*;
use std::time::Instant;

fn bump(y: f64, a: f64, b: f64) -> f64 {
    if y <= a || y >= b {
        return 0.0;
    }
    let x = (y - a) * (b - y) / ((b - a) / 2.0).powi(2);
    (1.0 - 1.0 / x).exp()
}

fn random_density(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let a = rng.gen_range(0.15..0.35);
    let b = rng.gen_range(0.65..0.85);
    let f1 = rng.gen_range(0.0..20.0);
    let f2 = rng.gen_range(0.0..20.0);
    let (c1, c2) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    (0..n)
        .map(|j| {
            let y = j as f64 / (n - 1) as f64;
            let e = bump(y, a, b);
            Complex64::new(e * (1.0 + c1 * (f1 * y).sin()), e * c2 * (f2 * y).cos())
        })
        .collect()
}

fn rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|x| x.norm_sqr()).sum();
    (num / den).sqrt()
}

#[test]
fn green_matches_bvp_for_k_up_to_16() {
    let n = 2049;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 1..=16 {
        let bvp = BvpSolver::new(k, n).unwrap();
        let green = GreenKernel::new(k).unwrap();
        for _ in 0..20 {
            let rho = random_density(n, &mut rng);
            let a = bvp.solve(&rho).unwrap();
            let b = green.apply(&rho);
            worst = worst.max(rel(&b, &a));
            for t in boundary_traces(&a).iter().chain(boundary_traces(&b).iter()) {
                assert!(t.norm() <= 1e-10, "k={k} trace {t}");
            }
        }
    }
    assert!(worst <= 1e-8, "worst relative error {worst:e}");
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn hyperbolic_closed_form_disagrees_with_oracle() {
    // The hyperbolic closed forms do not solve the clamped problem; record
    // the size of the miss.
    let n = 1025;
    let h = 1.0 / (n - 1) as f64;
    let rho: Vec<Complex64> = (0..n)
        .map(|j| {
            let y = j as f64 * h;
            Complex64::new(bump(y, 0.2, 0.8) * (1.0 + 0.5 * (7.0 * y).sin()), 0.0)
        })
        .collect();
    for k in 1..=3 {
        let reference = solve_mode_bvp(k, &rho).unwrap();
        let from_candidate: Vec<Complex64> = (0..n)
            .map(|i| {
                let y = i as f64 * h;
                let s: f64 = (0..n)
                    .map(|j| {
                        let src = j as f64 * h;
                        let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                        w * h * (candidate::k_free(k, (y - src).abs()) + candidate::k_bd(k, y, src)) * rho[j].re
                    })
                    .sum();
                Complex64::new(0.0, s)
            })
            .collect();
        assert!(rel(&from_candidate, &reference) > 1.0, "k={k}");
        assert!(rel(&solve_mode_green(k, &rho).unwrap(), &reference) < 1e-8);
    }
}

#[test]
fn green_operator_is_symmetric() {
    let n = 513;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in [1, 3, 9] {
        let r1 = random_density(n, &mut rng);
        let r2 = random_density(n, &mut rng);
        let ik = Complex64::new(0.0, k as f64);
        let p1: Vec<Complex64> = solve_mode_bvp(k, &r1).unwrap().iter().map(|v| v / ik).collect();
        let p2: Vec<Complex64> = solve_mode_bvp(k, &r2).unwrap().iter().map(|v| v / ik).collect();
        let a: Complex64 = p1.iter().zip(&r2).map(|(x, y)| x * y).sum();
        let b: Complex64 = r1.iter().zip(&p2).map(|(x, y)| x * y).sum();
        assert!((a - b).norm() <= 1e-9 * a.norm().max(b.norm()), "k={k}");
    }
}

#[test]
fn negative_k_is_conjugate() {
    let n = 257;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let rho = random_density(n, &mut rng);
    let conj: Vec<Complex64> = rho.iter().map(|c| c.conj()).collect();
    let a = solve_mode_bvp(4, &rho).unwrap();
    let b = solve_mode_bvp(-4, &conj).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x.conj() - y).norm() < 1e-14);
    }
}
