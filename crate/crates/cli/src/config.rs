//! Flat `section.key = value` configuration with command-line overrides.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;
use transport_evolver::RunConfig;
use weights::WeightParams;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: `{value}` ({reason})")]
    Value { key: String, value: String, reason: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Simulate,
    LinearDamping,
    KernelCheck,
    WeightsCheck,
    ToyModel,
    ParaproductCheck,
    BootstrapSweep,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Simulate,
        Experiment::LinearDamping,
        Experiment::KernelCheck,
        Experiment::WeightsCheck,
        Experiment::ToyModel,
        Experiment::ParaproductCheck,
        Experiment::BootstrapSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::LinearDamping => "linear-damping",
            Experiment::KernelCheck => "kernel-check",
            Experiment::WeightsCheck => "weights-check",
            Experiment::ToyModel => "toy-model",
            Experiment::ParaproductCheck => "paraproduct-check",
            Experiment::BootstrapSweep => "bootstrap-sweep",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub rng_seed: u64,
    pub output_dir: PathBuf,
    /// Grid, physics, time stepping and weight constants.
    pub run: RunConfig,
    /// Skip the analytic weight inequalities and start from small constants.
    pub desk_scale: bool,
    /// Write binary `θ̂` snapshots next to the series.
    pub snapshots: bool,
    /// Also enforce the decay-exponent checks of `simulate`.
    pub strict: bool,
    /// Window of the velocity decay fits; `None` means `[T/10, T/2]`.
    pub fit_window: Option<(f64, f64)>,
    pub kernel_ks: Vec<i64>,
    pub kernel_ny: usize,
    pub linear_k: i64,
    pub linear_window: (f64, f64),
    pub lemma_samples: usize,
    pub toy_etas: Vec<f64>,
    pub toy_varsigma: f64,
    pub sweep_epsilons: Vec<f64>,
    /// Horizon of the sweep runs; the CK integrals need it well past the
    /// critical times of the energetic modes.
    pub sweep_t_max: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Simulate,
            rng_seed: 0,
            output_dir: PathBuf::from("out"),
            run: RunConfig { weights: WeightParams::default(), ..RunConfig::default() },
            desk_scale: false,
            snapshots: false,
            strict: false,
            fit_window: None,
            kernel_ks: (1..=8).collect(),
            kernel_ny: 513,
            linear_k: 1,
            linear_window: (10.0, 100.0),
            lemma_samples: 100_000,
            toy_etas: vec![1e3, 1e4],
            toy_varsigma: weights::toy::DEFAULT_VARSIGMA,
            sweep_epsilons: vec![1e-4, 3e-4, 1e-3],
            sweep_t_max: 100.0,
        }
    }
}

/// Ordered key/value pairs; later entries win.
#[derive(Debug, Clone, Default)]
pub struct Overrides(BTreeMap<String, String>);

impl Overrides {
    pub fn set(&mut self, key: &str, value: &str) {
        self.0.insert(normalize(key), value.trim().to_string());
    }

    /// Parse `key = value` lines. `# comments` and `[section]` headers are
    /// allowed; a header prefixes the keys that follow it.
    pub fn parse_text(&mut self, text: &str) -> Result<()> {
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(s) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = s.trim().to_string();
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax { line: i + 1, text: raw.to_string() })?;
            let k = k.trim();
            if k.is_empty() {
                return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
            }
            let key = if section.is_empty() { k.to_string() } else { format!("{section}.{k}") };
            self.set(&key, v);
        }
        Ok(())
    }

    pub fn parse_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        self.parse_text(&text)
    }

    /// `key=value` as given on the command line.
    pub fn parse_assignment(&mut self, s: &str) -> Result<()> {
        let (k, v) = s.split_once('=').ok_or_else(|| ConfigError::Syntax { line: 0, text: s.to_string() })?;
        self.set(k, v);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

fn value<T: FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    v.parse().map_err(|e: T::Err| ConfigError::Value { key: key.into(), value: v.into(), reason: e.to_string() })
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| value(key, s)).collect()
}

fn pair(key: &str, v: &str) -> Result<(f64, f64)> {
    match list::<f64>(key, v)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(ConfigError::Value { key: key.into(), value: v.into(), reason: "expected `a, b`".into() }),
    }
}

/// `1..8` (inclusive), `3` or `1, 2, 4`.
pub fn parse_k_list(key: &str, v: &str) -> Result<Vec<i64>> {
    if let Some((a, b)) = v.split_once("..") {
        let a: i64 = value(key, a.trim())?;
        let b: i64 = value(key, b.trim().trim_start_matches('='))?;
        return Ok((a..=b).collect());
    }
    list(key, v)
}

/// `k:a` pairs, e.g. `1:1.0, 3:0.25`.
fn modes(key: &str, v: &str) -> Result<Vec<(i64, f64)>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (k, a) = s.split_once(':').ok_or_else(|| ConfigError::Value { key: key.into(), value: v.into(), reason: "expected `k:a`".into() })?;
            Ok((value(key, k.trim())?, value(key, a.trim())?))
        })
        .collect()
}

fn boolean(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(ConfigError::Value { key: key.into(), value: v.into(), reason: "expected true or false".into() }),
    }
}

impl ExperimentConfig {
    /// Defaults, then the overrides in key order. `weights.desk_scale` is
    /// applied first so that explicit weight constants refine it.
    pub fn from_overrides(o: &Overrides) -> Result<Self> {
        let mut c = Self::default();
        if let Some(v) = o.get("weights.desk_scale") {
            c.desk_scale = boolean("weights.desk_scale", v)?;
            if c.desk_scale {
                c.run.weights = WeightParams::desk_scale();
            }
        }
        for (key, v) in &o.0 {
            c.apply(key, v)?;
        }
        Ok(c)
    }

    fn apply(&mut self, key: &str, v: &str) -> Result<()> {
        let r = &mut self.run;
        let w = &mut r.weights;
        match key {
            "experiment" => self.experiment = v.parse().map_err(|e| ConfigError::Value { key: key.into(), value: v.into(), reason: e })?,
            "rng_seed" => self.rng_seed = value(key, v)?,
            "output_dir" => self.output_dir = PathBuf::from(v),
            "grid.nz" => r.nz = value(key, v)?,
            "grid.ny" => r.ny = value(key, v)?,
            "physics.kappa" => r.kappa = value(key, v)?,
            "physics.epsilon" => r.epsilon = value(key, v)?,
            "physics.delta" => r.delta = value(key, v)?,
            "physics.s0" => r.s0 = value(key, v)?,
            "physics.background_sign" => r.background_sign = value(key, v)?,
            "physics.lambda_b" => r.lambda_b = value(key, v)?,
            "physics.modes" => r.initial_modes = modes(key, v)?,
            "physics.nonlinear" => r.nonlinear = boolean(key, v)?,
            "time.dt" => r.dt = value(key, v)?,
            "time.t_max" => r.t_max = value(key, v)?,
            "time.output_every" => r.output_every = value(key, v)?,
            "weights.c1" => w.c1 = value(key, v)?,
            "weights.c0" => w.c0 = value(key, v)?,
            "weights.mu" => w.mu_override = Some(value(key, v)?),
            "weights.lambda_inf" => w.lambda_inf = value(key, v)?,
            "weights.delta_tilde" => w.delta_tilde = value(key, v)?,
            "weights.a" => w.a = value(key, v)?,
            "weights.sigma" => w.sigma = value(key, v)?,
            "weights.desk_scale" => {}
            "output.snapshots" => self.snapshots = boolean(key, v)?,
            "checks.strict" => self.strict = boolean(key, v)?,
            "fit.window" => self.fit_window = Some(pair(key, v)?),
            "kernel.k" => self.kernel_ks = parse_k_list(key, v)?,
            "kernel.ny" => self.kernel_ny = value(key, v)?,
            "linear.k" => self.linear_k = value(key, v)?,
            "linear.window" => self.linear_window = pair(key, v)?,
            "lemmas.samples" => self.lemma_samples = value(key, v)?,
            "toy.eta" => self.toy_etas = list(key, v)?,
            "toy.varsigma" => self.toy_varsigma = value(key, v)?,
            "sweep.epsilons" => self.sweep_epsilons = list(key, v)?,
            "sweep.t_max" => self.sweep_t_max = value(key, v)?,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Checks shared by every experiment plus the weight inequalities for
    /// the experiments that evaluate the weighted energy.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        let r = &self.run;
        if !(r.kappa > 0.0 && r.kappa <= 0.1) {
            return bad(format!("physics.kappa = {} not in (0, 0.1]", r.kappa));
        }
        r.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let kd = (r.nz / 3) as i64;
        if r.initial_modes.is_empty() || r.initial_modes.iter().any(|(k, _)| *k == 0 || k.abs() > kd) {
            return bad(format!("physics.modes needs wavenumbers with 1 <= |k| <= Nz/3 = {kd}"));
        }
        if self.kernel_ks.is_empty() || self.kernel_ks.contains(&0) {
            return bad("kernel.k must list nonzero wavenumbers".into());
        }
        if self.linear_k == 0 {
            return bad("linear.k must be nonzero".into());
        }
        if self.sweep_epsilons.len() < 2 || self.sweep_epsilons.iter().any(|e| *e <= 0.0) {
            return bad("sweep.epsilons needs at least two positive values".into());
        }
        if !(self.sweep_t_max > 0.0) {
            return bad(format!("sweep.t_max = {} must be > 0", self.sweep_t_max));
        }
        if self.toy_etas.iter().any(|e| *e <= 0.0) || self.toy_varsigma <= 0.0 {
            return bad("toy.eta and toy.varsigma must be positive".into());
        }
        if let Some((a, b)) = self.fit_window {
            if !(a >= 0.0 && b > a) {
                return bad(format!("fit.window = ({a}, {b}) is empty"));
            }
        }
        let weighted = matches!(self.experiment, Experiment::Simulate | Experiment::BootstrapSweep | Experiment::WeightsCheck);
        if weighted && !self.desk_scale {
            let lambda_b = (self.experiment != Experiment::WeightsCheck).then_some(r.lambda_b);
            r.weights.validate_analytic(lambda_b).map_err(|e| ConfigError::Invalid(format!("{e}; pass --desk-scale to run with small constants")))?;
        }
        Ok(())
    }
}
