use fourier_core::freq::max_resonant_k;
use fourier_core::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Random field that is smooth and 1-periodic in y.
fn random_smooth(grid: Grid, seed: u64) -> ChannelField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(f64, f64, f64, f64)> = (0..6)
        .map(|_| {
            (
                rng.gen_range(0..4) as f64,
                rng.gen_range(0..5) as f64,
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.0..2.0 * PI),
            )
        })
        .collect();
    ChannelField::from_fn(grid, |z, y| {
        terms
            .iter()
            .map(|(k, m, a, p)| a * (k * z + 2.0 * PI * m * y + p).cos())
            .sum::<f64>()
            + 0.1 * (2.0 * PI * y).sin().powi(2) * z.sin().exp()
    })
}

fn random_spectral(grid: Grid, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid);
    for c in f.data.iter_mut() {
        *c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    f
}

#[test]
fn roundtrip_random_smooth_fields() {
    for (seed, (nz, ny)) in [(1, (32, 32)), (2, (64, 32)), (3, (32, 128))].into_iter() {
        let g = Grid::new(nz, ny).unwrap();
        let t = Transformer::new(g);
        let f = random_smooth(g, seed);
        let back = t.inverse(&t.forward(&f).unwrap()).unwrap();
        let num: f64 = f.data.iter().zip(&back.data).map(|(a, b)| (a - b).powi(2)).sum();
        let den: f64 = f.data.iter().map(|a| a * a).sum();
        assert!((num / den).sqrt() < 1e-12, "relative error {}", (num / den).sqrt());
    }
}

#[test]
fn parseval_for_random_fields() {
    for seed in 0..5 {
        let g = Grid::new(32, 64).unwrap();
        let t = Transformer::new(g);
        let f = random_smooth(g, seed);
        let s = t.forward(&f).unwrap();
        let a = l2_norm_grid(&f);
        let b = l2_norm_spectral(&s);
        assert!((a - b).abs() <= 1e-10 * a);
    }
}

#[test]
fn lp_partition_of_unity() {
    let g = Grid::new(32, 32).unwrap();
    let f = random_spectral(g, 11);
    let r_max = f.iter().map(|(k, e, _)| l1(k, e)).fold(0.0, f64::max);
    let mut sum = SpectralField::zeros(g);
    for n in Dyadic::up_to(r_max) {
        let p = littlewood_paley_project(&f, n);
        for (s, v) in sum.data.iter_mut().zip(&p.data) {
            *s += v;
        }
    }
    let err = sum
        .data
        .iter()
        .zip(&f.data)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(err <= 1e-14);
}

#[test]
fn lp_complement_identity() {
    let g = Grid::new(32, 32).unwrap();
    let f = random_spectral(g, 12);
    let r_max = f.iter().map(|(k, e, _)| l1(k, e)).fold(0.0, f64::max);
    let n = Dyadic::new(6);
    let mut sum = low_pass(&f, n);
    for m in Dyadic::up_to(r_max).into_iter().filter(|m| m.exp >= n.exp - 3) {
        let p = littlewood_paley_project(&f, m);
        for (s, v) in sum.data.iter_mut().zip(&p.data) {
            *s += v;
        }
    }
    assert_eq!(sum.data, f.data);
}

#[test]
fn single_shell_projection() {
    let g = Grid::new(32, 32).unwrap();
    let mut f = SpectralField::zeros(g);
    *f.get_mut(Grid::index_of(3, 32).unwrap(), 0) = Complex64::new(1.0, 0.0);
    let shell = Dyadic::of(3.0);
    assert_eq!(littlewood_paley_project(&f, shell).data, f.data);
    for n in Dyadic::up_to(64.0).into_iter().filter(|n| *n != shell) {
        assert!(littlewood_paley_project(&f, n).data.iter().all(|c| c.norm() == 0.0));
    }
}

#[test]
fn adjacent_extended_intervals_tile() {
    for eta in [8.0, 100.0, 1234.5, 1e4] {
        let kmax = max_resonant_k(eta).max(3);
        for k in 1..kmax {
            let a = extended_interval(k, eta).unwrap();
            let b = extended_interval(k + 1, eta).unwrap();
            assert!((a.t_left - b.t_right).abs() <= 1e-12 * eta);
        }
        assert_eq!(extended_interval(1, eta).unwrap().t_right, 2.0 * eta);
    }
}

#[test]
fn exponent_inequalities_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let s = 1.0 / 3.0;
    let c = 16.0 / 3.0;
    let tri1 = s / (c - 1.0f64).powf(1.0 - s);
    let tri2 = (24.0f64 / 25.0).powf(2.0 / 3.0);
    assert!((tri2 - 0.97315).abs() < 1e-5);
    assert!(tri1 < tri2 && tri2 < 0.98);
    for _ in 0..10_000 {
        let x: f64 = 10f64.powf(rng.gen_range(-3.0..6.0));
        let y: f64 = 10f64.powf(rng.gen_range(-3.0..6.0));
        assert!((x.cbrt() - y.cbrt()).abs() <= (x - y).abs().cbrt() * (1.0 + 1e-12));

        let d = rng.gen_range(-1.0..1.0) * x / c;
        let y1 = x + d;
        assert!((x.cbrt() - y1.cbrt()).abs() <= tri1 * d.abs().cbrt() * (1.0 + 1e-12));

        let lo: f64 = rng.gen_range(0.001..1e5);
        let hi: f64 = lo * rng.gen_range(1.0..24.0);
        assert!((hi + lo).cbrt() <= 0.98 * (hi.cbrt() + lo.cbrt()));
        assert!((hi + lo).cbrt() <= tri2 * (hi.cbrt() + lo.cbrt()) * (1.0 + 1e-12));
    }
}

proptest! {
    #[test]
    fn l1_triangle(k in -50i64..50, l in -50i64..50, eta in -500.0f64..500.0, xi in -500.0f64..500.0) {
        prop_assert!(l1(k, eta) <= l1(l, xi) + l1(k - l, eta - xi) + 1e-12);
    }

    #[test]
    fn critical_interval_shape(k in -12i64..12, eta in -5000.0f64..5000.0) {
        let i = critical_interval(k, eta);
        if !i.empty {
            prop_assert!(i.t_minus <= i.center() && i.center() <= i.t_plus);
            let width = 2.0 * eta.abs() / (2.0 * k.abs() as f64).powi(3);
            prop_assert!(((i.t_plus - i.t_minus) - width).abs() <= 1e-12 * eta.abs().max(1.0));
            prop_assert!(k as f64 * eta >= 0.0);
            prop_assert!(1 <= k.abs() && k.abs() <= max_resonant_k(eta));
        }
    }

    #[test]
    fn extended_contains_critical(eta in 8.0f64..1e6, frac in 0.0f64..1.0) {
        let kmax = max_resonant_k(eta);
        let k = 1 + ((kmax - 1) as f64 * frac).round() as i64;
        let i = critical_interval(k, eta);
        let e = extended_interval(k, eta).unwrap();
        prop_assert!(!i.empty);
        prop_assert!(e.t_left <= i.t_minus && i.t_plus <= e.t_right);
    }

    #[test]
    fn japanese_bracket_bounds(x in -1e6f64..1e6) {
        let j = japanese(x);
        prop_assert!(j >= 1.0 && j >= x.abs() && j <= 1.0 + x.abs());
    }
}
