use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use stx::{ConfigError, Experiment, ExperimentConfig, Overrides, WORKERS_ENV};

#[derive(Parser)]
#[command(name = "stx", version, about = "Stokes-transport damping experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the nonlinear system and write series.csv, meta.json, report.json.
    Simulate(Common),
    /// Decay of the stream function of frozen data.
    LinearDamping(Common),
    /// Build the kernel G for each k, fit its envelope and verify it.
    KernelCheck {
        #[command(flatten)]
        common: Common,
        /// Wavenumbers, e.g. `1..8` (inclusive) or `1,2,4`.
        #[arg(long)]
        k: Option<String>,
    },
    /// Sample the weight lemmas.
    WeightsCheck(Common),
    /// Integrate the toy model and compare with the Θ envelope.
    ToyModel(Common),
    /// Check the paraproduct split of the transport term.
    ParaproductCheck(Common),
    /// Run an ε-sweep and fit the energy scaling.
    BootstrapSweep(Common),
    /// Run the experiment named by the `experiment` key of the config.
    Run(Common),
}

#[derive(Args)]
struct Common {
    /// Config file of `section.key = value` lines.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Override a config key; repeatable, applied after the file.
    #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(short, long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Small weight constants; skips the analytic inequalities.
    #[arg(long)]
    desk_scale: bool,
    /// Enforce every check, including the decay exponents.
    #[arg(long)]
    strict: bool,
}

fn build(common: &Common, experiment: Option<Experiment>, k: Option<&str>) -> Result<ExperimentConfig, ConfigError> {
    let mut o = Overrides::default();
    if let Some(p) = &common.config {
        o.parse_file(p)?;
    }
    for s in &common.set {
        o.parse_assignment(s)?;
    }
    if let Some(d) = &common.output_dir {
        o.set("output_dir", &d.to_string_lossy());
    }
    if let Some(s) = common.seed {
        o.set("rng_seed", &s.to_string());
    }
    if common.desk_scale {
        o.set("weights.desk_scale", "true");
    }
    if common.strict {
        o.set("checks.strict", "true");
    }
    if let Some(k) = k {
        o.set("kernel.k", k);
    }
    if let Some(e) = experiment {
        o.set("experiment", e.name());
    }
    let cfg = ExperimentConfig::from_overrides(&o)?;
    cfg.validate()?;
    Ok(cfg)
}

fn init_workers() -> Result<(), String> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v.parse().map_err(|_| format!("{WORKERS_ENV} = `{v}` is not a worker count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_workers() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let (common, experiment, k) = match &cli.command {
        Command::Simulate(c) => (c, Some(Experiment::Simulate), None),
        Command::LinearDamping(c) => (c, Some(Experiment::LinearDamping), None),
        Command::KernelCheck { common, k } => (common, Some(Experiment::KernelCheck), k.as_deref()),
        Command::WeightsCheck(c) => (c, Some(Experiment::WeightsCheck), None),
        Command::ToyModel(c) => (c, Some(Experiment::ToyModel), None),
        Command::ParaproductCheck(c) => (c, Some(Experiment::ParaproductCheck), None),
        Command::BootstrapSweep(c) => (c, Some(Experiment::BootstrapSweep), None),
        Command::Run(c) => (c, None, None),
    };
    let cfg = match build(common, experiment, k) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match stx::run_experiment(&cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{}: some checks failed, see {}", cfg.experiment, cfg.output_dir.join("report.json").display());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let dump = serde_json::json!({ "experiment": cfg.experiment, "error": format!("{e:#}"), "config": cfg });
            if std::fs::create_dir_all(&cfg.output_dir).is_ok() {
                let _ = stx::output::write_json(&cfg.output_dir.join("failure.json"), &dump);
            }
            ExitCode::from(1)
        }
    }
}
