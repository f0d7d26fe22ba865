use diagnostics::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn power_law(a: f64, p: f64, t0: f64, t1: f64, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let t = t0 + (t1 - t0) * i as f64 / (n - 1) as f64;
            (t, a * bracket(t).powf(p))
        })
        .collect()
}

proptest! {
    #[test]
    fn exact_power_law(a in 1e-6f64..1e3, p in -6.0f64..2.0, n in 10usize..400) {
        let s = power_law(a, p, 10.0, 100.0, n);
        let f = fit_decay(&s, (10.0, 100.0)).unwrap();
        prop_assert!((f.exponent - p).abs() < 1e-6);
        prop_assert!((f.amplitude / a - 1.0).abs() < 1e-6);
        prop_assert!(f.residual < 1e-8);
    }

    #[test]
    fn one_percent_noise(seed in 0u64..1000, p in -5.0f64..-1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s: Vec<(f64, f64)> = power_law(2.0, p, 5.0, 25.0, 200)
            .into_iter()
            .map(|(t, v)| (t, v * (1.0 + 0.01 * rng.gen_range(-1.0..1.0))))
            .collect();
        let f = fit_decay(&s, default_window(50.0)).unwrap();
        prop_assert!((f.exponent - p).abs() <= 0.05);
    }

    #[test]
    fn support_is_ordered_and_inside(vals in proptest::collection::vec(0.0f64..1.0, 5..60), thr in 0.0f64..0.9) {
        let n = vals.len();
        let ys: Vec<f64> = (0..n).map(|j| j as f64 / (n - 1) as f64).collect();
        if let Some((lo, hi)) = support_bounds(&ys, &vals, thr) {
            prop_assert!(0.0 <= lo && lo <= hi && hi <= 1.0);
            for (y, v) in ys.iter().zip(&vals) {
                if *y < lo || *y > hi {
                    prop_assert!(*v <= thr);
                }
            }
        } else {
            prop_assert!(vals.iter().all(|v| *v <= thr));
        }
    }
}

#[test]
fn constant_series_has_zero_exponent() {
    let s: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, 3.5)).collect();
    let f = fit_decay(&s, (0.0, 49.0)).unwrap();
    assert!(f.exponent.abs() < 1e-12);
    assert!((f.amplitude - 3.5).abs() < 1e-12);
}

#[test]
fn scattering_on_a_stationary_trajectory() {
    let snaps: Vec<(f64, Vec<f64>)> = (0..=40).map(|i| (i as f64, vec![1.0, -2.0, 0.5])).collect();
    let dist = |a: &Vec<f64>, b: &Vec<f64>| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let norm = |a: &Vec<f64>| a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let first = scattering_profile(&snaps, dist, norm, None).unwrap();
    assert!(first.stationary() && first.fit.is_none());
    let again = scattering_profile(&snaps, dist, norm, None).unwrap();
    assert_eq!(first, again);
}

#[test]
fn scattering_recovers_cubic_convergence() {
    // θ(t) = ρ_∞ + c⟨t⟩⁻³ e.
    let snaps: Vec<(f64, [f64; 2])> = (0..=400)
        .map(|i| {
            let t = i as f64 * 0.25;
            (t, [1.0 + 0.3 * bracket(t).powi(-3), 2.0])
        })
        .collect();
    let prof = scattering_profile(&snaps, |a, b| (a[0] - b[0]).abs(), |a| a[0].hypot(a[1]), None).unwrap();
    let f = prof.fit.unwrap();
    // The reference ⟨T⟩⁻³ offset is small on [T/8, T/2].
    assert!((f.exponent + 3.0).abs() < 0.1, "{}", f.exponent);
    assert!((prof.gevrey_norm - (1.0f64 + 0.3 * bracket(100.0).powi(-3)).hypot(2.0)).abs() < 1e-15);
}
