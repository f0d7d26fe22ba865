//! Randomised checks of the multiplier lemmas.
//!
//! Each `≲` is turned into an implied constant: the left side divided by
//! the right side without constant, maximised over samples. Samples are
//! drawn per η-decade so that growth of the constant with `|η|` shows up
//! as a positive slope of `log C` against `log η`.

use crate::lambda::LambdaWeight;
use crate::multiplier::{log_add, log_j};
use crate::params::WeightParams;
use crate::theta::ThetaWeight;
use crate::{Result, WeightError};
use fourier_core::freq::{critical_interval, max_resonant_k};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaConfig {
    pub samples: usize,
    pub seed: u64,
    pub ceiling: f64,
    pub max_slope: f64,
    /// Lower ends of the η-decades of the sweep.
    pub decades: Vec<f64>,
    /// Comparability ratio α of the scenarios lemma.
    pub alpha: f64,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 7,
            ceiling: 1e3,
            max_slope: 0.05,
            decades: vec![1e2, 1e3, 1e4, 1e5],
            alpha: 2.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaResult {
    pub name: String,
    pub samples: usize,
    pub max_constant: f64,
    /// `(decade, max constant)` pairs.
    pub sweep: Vec<(f64, f64)>,
    pub slope: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub samples: usize,
    /// How often each of (a)–(e) held.
    pub case_counts: [usize; 5],
    pub uncovered: usize,
    pub coverage: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TotalGrowthRow {
    pub eta: f64,
    pub log_inverse_theta: f64,
    pub log_envelope: f64,
    /// `log[(1/Θ)·η^{μ/120}/e^{(μ/20)η^{1/3}}]`.
    pub log_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaReport {
    pub params: WeightParams,
    pub config: LemmaConfig,
    pub theta_nonresonant: LemmaResult,
    pub lambda_fraction: LemmaResult,
    pub ratio_j: LemmaResult,
    pub scenarios: ScenarioResult,
    pub lambda_growth_max_log_ratio: f64,
    pub total_growth: Vec<TotalGrowthRow>,
}

impl LemmaReport {
    /// The sampled lemmas and the scenario coverage all pass.
    pub fn pass(&self) -> bool {
        self.theta_nonresonant.pass && self.lambda_fraction.pass && self.ratio_j.pass && self.scenarios.pass
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.gen::<f64>() * (hi / lo).ln()).exp()
}

fn signed(rng: &mut ChaCha8Rng, v: f64) -> f64 {
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

/// A time `≥ 1`, concentrated on the resonant intervals of `η`.
fn sample_time(rng: &mut ChaCha8Rng, eta: f64) -> f64 {
    let ea = eta.abs();
    let e = max_resonant_k(ea);
    if e >= 1 && rng.gen_bool(0.7) {
        let k = rng.gen_range(1..=e) as f64;
        let w = ea / (2.0 * k).powi(3);
        let t = ea / k + rng.gen_range(-2.0..2.0) * w;
        t.max(1.0)
    } else {
        rng.gen_range(1.0..2.5 * ea)
    }
}

/// A nearby frequency with `|ξ−η|` log-uniform over `[1e-6, |η|]`.
fn sample_near(rng: &mut ChaCha8Rng, eta: f64) -> f64 {
    let d = log_uniform(rng, 1e-6, eta.abs());
    eta + signed(rng, d)
}

fn ols_slope(xy: &[(f64, f64)]) -> f64 {
    let n = xy.len() as f64;
    if xy.len() < 2 {
        return 0.0;
    }
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    sxy / sxx
}

/// Sample `log C` per decade with `draw(rng, decade) -> Option<log C>`.
fn sweep(
    name: &str,
    cfg: &LemmaConfig,
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng, f64) -> Option<f64>,
) -> Result<LemmaResult> {
    let per = (cfg.samples / cfg.decades.len()).max(1);
    let mut rows = Vec::new();
    let mut total = 0;
    for &d in &cfg.decades {
        let mut best = f64::NEG_INFINITY;
        let mut got = 0;
        let mut tries = 0;
        while got < per {
            tries += 1;
            if tries > 100 * per {
                return Err(WeightError::Coverage(format!("{name}: no admissible samples near η = {d}")));
            }
            if let Some(lc) = draw(rng, d) {
                best = best.max(lc);
                got += 1;
            }
        }
        total += got;
        rows.push((d, best.exp()));
    }
    let slope = ols_slope(&rows.iter().map(|(d, c)| (d.ln(), c.ln())).collect::<Vec<_>>());
    let max_constant = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(LemmaResult {
        name: name.to_string(),
        samples: total,
        max_constant,
        sweep: rows,
        slope,
        pass: max_constant <= cfg.ceiling && slope <= cfg.max_slope,
    })
}

/// `Θ_NR(t,ξ)/Θ_NR(t,η) ≤ C e^{μ|η−ξ|^{1/3}}`.
pub fn theta_nonresonant(p: &WeightParams, cfg: &LemmaConfig, rng: &mut ChaCha8Rng) -> Result<LemmaResult> {
    let mu = p.mu();
    sweep("estimate of Theta nonresonant", cfg, rng, |rng, d| {
        let eta = log_uniform(rng, d, 10.0 * d);
        let eta = signed(rng, eta);
        let xi = sample_near(rng, eta);
        let pick = if rng.gen_bool(0.5) { eta } else { xi };
        let t = sample_time(rng, pick);
        let a = ThetaWeight::build(xi, p.c1).log_nr(t);
        let b = ThetaWeight::build(eta, p.c1).log_nr(t);
        Some(a - b - mu * (eta - xi).abs().cbrt())
    })
}

/// `Λ(t,ξ)/Λ(t,η) + Λ(t,η)/Λ(t,ξ) ≤ C e^{C₀|η−ξ|^{1/3}}`.
pub fn lambda_fraction(p: &WeightParams, cfg: &LemmaConfig, rng: &mut ChaCha8Rng) -> Result<LemmaResult> {
    sweep("estimate of Lambda fraction", cfg, rng, |rng, d| {
        let eta = log_uniform(rng, d, 10.0 * d);
        let eta = signed(rng, eta);
        let xi = sample_near(rng, eta);
        let pick = if rng.gen_bool(0.5) { eta } else { xi };
        let t = sample_time(rng, pick);
        let a = LambdaWeight::build(xi).log_value(t);
        let b = LambdaWeight::build(eta).log_value(t);
        Some(log_add(a - b, b - a) - p.c0 * (eta - xi).abs().cbrt())
    })
}

/// Membership in `𝔄`: `||l,ξ|−|k,η|| ≤ |k−l,η−ξ| ≤ (3/16)|l,ξ|`, `l ≠ 0`.
pub fn in_set_a(k: i64, eta: f64, l: i64, xi: f64) -> bool {
    let nl = l.unsigned_abs() as f64 + xi.abs();
    let nk = k.unsigned_abs() as f64 + eta.abs();
    let nd = (k - l).unsigned_abs() as f64 + (eta - xi).abs();
    l != 0 && (nl - nk).abs() <= nd && nd <= 3.0 / 16.0 * nl
}

/// The ratio-of-𝒥 estimate on `𝔄`, with the resonant gains on the sets
/// `A = {t ∈ I_{k,η} \ I_{l,ξ}, k ≠ l}` and `B = {t ∈ I_{l,ξ} \ I_{k,η}}`.
pub fn ratio_j(p: &WeightParams, cfg: &LemmaConfig, rng: &mut ChaCha8Rng) -> Result<LemmaResult> {
    let mu = p.mu();
    sweep("ratio of J", cfg, rng, |rng, d| {
        let xi = log_uniform(rng, d, 10.0 * d);
        let xi = signed(rng, xi);
        let e = max_resonant_k(xi).max(1);
        let l = xi.signum() as i64 * rng.gen_range(1..=2 * e + 1);
        let budget = 3.0 / 16.0 * (l.unsigned_abs() as f64 + xi.abs());
        let dk = if rng.gen_bool(0.5) {
            0
        } else {
            let m = budget.floor() as i64;
            rng.gen_range(-m..=m)
        };
        let rest = budget - dk.unsigned_abs() as f64;
        if rest <= 0.0 {
            return None;
        }
        let deta = log_uniform(rng, 1e-6 * rest, rest);
        let deta = signed(rng, deta);
        let (k, eta) = (l + dk, xi + deta);
        if !in_set_a(k, eta, l, xi) {
            return None;
        }
        let pick = if rng.gen_bool(0.5) { eta } else { xi };
        let t = sample_time(rng, pick);
        if t < 1.0 {
            return None;
        }
        let lhs = log_j(p, t, k, &ThetaWeight::build(eta, p.c1)) - log_j(p, t, l, &ThetaWeight::build(xi, p.c1));
        let in_k = critical_interval(k, eta).contains(t);
        let in_l = critical_interval(l, xi).contains(t);
        let gain = if in_k && !in_l && k != l {
            let kf = k.unsigned_abs() as f64;
            (eta.abs() / (kf.powi(3) * (1.0 + (t - eta.abs() / kf).abs()))).ln()
        } else if in_l && !in_k {
            let lf = l.unsigned_abs() as f64;
            (lf.powi(3) * (1.0 + (t - xi.abs() / lf).abs()) / xi.abs()).ln()
        } else {
            0.0
        };
        let dist = (k - l).unsigned_abs() as f64 + (eta - xi).abs();
        Some(lhs - gain - 3.0 * mu * dist.cbrt())
    })
}

/// Which of the scenarios (a)–(e) hold. The `≳_α` constants are taken as
/// `1/(40α)`.
pub fn scenarios(t: f64, k: i64, eta: f64, n: i64, xi: f64, alpha: f64) -> [bool; 5] {
    let (ea, xa) = (eta.abs(), xi.abs());
    let (kf, nf) = (k.unsigned_abs() as f64, n.unsigned_abs() as f64);
    let c = 1.0 / (40.0 * alpha);
    let same = k == n;
    let a = same && critical_interval(k, ea).contains(t) && critical_interval(k, xa).contains(t);
    let b = same
        && (t - ea / kf).abs() >= ea / (10.0 * alpha * kf.powi(3))
        && (t - xa / kf).abs() >= xa / (10.0 * alpha * kf.powi(3));
    let cc = same && (xa - ea).abs() >= c * ea / (kf * kf);
    let d = (t - ea / kf).abs() >= ea / (10.0 * alpha * kf * kf) && (t - xa / nf).abs() >= xa / (10.0 * alpha * nf * nf);
    let e = (xa - ea).abs() >= c * ea / nf;
    [a, b, cc, d, e]
}

/// Sample `(t, k, η, n, ξ)` with `α⁻¹|ξ| ≤ |η| ≤ α|ξ|`,
/// `t ∈ Ĩ_{k,η} ∩ Ĩ_{n,ξ}`, `|k−n| ≤ 1` and both wavenumbers in the
/// resonant range `1 ≤ k, n ≤ E(|·|^{1/3})`.
pub fn scenario_coverage(cfg: &LemmaConfig, rng: &mut ChaCha8Rng) -> Result<ScenarioResult> {
    let mut counts = [0usize; 5];
    let mut uncovered = 0;
    let mut got = 0;
    let per = (cfg.samples / cfg.decades.len()).max(1);
    for &d in &cfg.decades {
        let mut here = 0;
        let mut tries = 0;
        while here < per {
            tries += 1;
            if tries > 1000 * per {
                return Err(WeightError::Coverage(format!("scenarios: no admissible samples near η = {d}")));
            }
            let eta = log_uniform(rng, d, 10.0 * d);
            let xi = eta * log_uniform(rng, 1.0 / cfg.alpha, cfg.alpha);
            let e = max_resonant_k(eta.min(xi));
            if e < 1 {
                continue;
            }
            let k = rng.gen_range(1..=e);
            let kf = k as f64;
            let t = rng.gen_range(2.0 * eta / (2.0 * kf + 1.0)..=2.0 * eta / (2.0 * kf - 1.0));
            let n = ((xi / t + 0.5).floor() as i64).max(1);
            if (k - n).abs() > 1 || n > e || t < 1.0 {
                continue;
            }
            here += 1;
            let s = scenarios(t, k, eta, n, xi, cfg.alpha);
            for (c, hit) in counts.iter_mut().zip(s) {
                *c += hit as usize;
            }
            if !s.iter().any(|h| *h) {
                uncovered += 1;
            }
        }
        got += here;
    }
    let coverage = 1.0 - uncovered as f64 / got as f64;
    Ok(ScenarioResult { samples: got, case_counts: counts, uncovered, coverage, pass: uncovered == 0 })
}

/// `log(1/Θ(t_start,η))` against the closed-form growth.
pub fn total_growth(p: &WeightParams, etas: &[f64]) -> Vec<TotalGrowthRow> {
    etas.iter()
        .map(|&eta| {
            let w = ThetaWeight::build(eta, p.c1);
            let inv = -w.log_nr(w.t_start());
            let env = ThetaWeight::log_envelope(eta, p.mu());
            TotalGrowthRow { eta, log_inverse_theta: inv, log_envelope: env, log_ratio: inv - env }
        })
        .collect()
}

/// Largest `log(1/Λ(t,η)) / ((3π/20)|η|^{1/3})` over `t` on a fine grid
/// for each decade; at most 1 when the growth bound holds.
pub fn lambda_growth(cfg: &LemmaConfig) -> f64 {
    let mut worst = 0.0f64;
    for &d in &cfg.decades {
        for i in 0..50 {
            let eta = d * 10f64.powf(i as f64 / 50.0);
            let w = LambdaWeight::build(eta);
            worst = worst.max(-w.log_min() / LambdaWeight::log_bound(eta));
        }
    }
    worst
}

pub fn verify_lemmas(p: &WeightParams, cfg: &LemmaConfig) -> Result<LemmaReport> {
    p.validate_basic()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(LemmaReport {
        params: *p,
        config: cfg.clone(),
        theta_nonresonant: theta_nonresonant(p, cfg, &mut rng)?,
        lambda_fraction: lambda_fraction(p, cfg, &mut rng)?,
        ratio_j: ratio_j(p, cfg, &mut rng)?,
        scenarios: scenario_coverage(cfg, &mut rng)?,
        lambda_growth_max_log_ratio: lambda_growth(cfg),
        total_growth: total_growth(p, &cfg.decades),
    })
}
