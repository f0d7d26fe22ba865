use std::path::Path;
use std::process::{Command, Output};

fn stx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stx")).args(args).env("STX_WORKERS", "1").output().expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const SMALL: [&str; 10] = ["--desk-scale", "-s", "grid.Nz=32", "-s", "time.t_max=2", "-s", "time.output_every=2", "-s", "time.dt=0.1", "-s"];

fn small_sim(dir: &Path, extra: &str) -> Output {
    let out = dir.to_str().unwrap();
    let mut args = vec!["simulate", "-o", out];
    args.extend(SMALL);
    args.push(extra);
    stx(&args)
}

#[test]
fn zero_amplitude_simulation_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = small_sim(dir.path(), "physics.epsilon=0");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("series.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap().split(',').count(), 12);
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        // t, then every column is zero except the empty support bounds.
        for (i, c) in cells.iter().enumerate().skip(1) {
            if i == 6 || i == 7 {
                assert_eq!(*c, "NaN");
            } else {
                assert_eq!(c.parse::<f64>().unwrap(), 0.0, "column {i} of {line}");
            }
        }
    }
    let report = json(&dir.path().join("report.json"));
    assert_eq!(report["pass"], true);
    assert_eq!(json(&dir.path().join("meta.json"))["config"]["run"]["epsilon"], 0.0);
}

#[test]
fn identical_configs_give_identical_series() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = small_sim(d.path(), "physics.epsilon=1e-3");
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("series.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "experiment = simulate\n[physics]\nepsilon = 5e-4\ndelta = 1e-3\n[grid]\nNz = 64\n").unwrap();
    let out = dir.path().join("out");
    let mut args = vec!["run", "-c", cfg.to_str().unwrap(), "-o", out.to_str().unwrap()];
    args.extend(SMALL);
    args.push("physics.delta=0");
    let o = stx(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let meta = json(&out.join("meta.json"));
    assert_eq!(meta["config"]["run"]["epsilon"], 5e-4);
    assert_eq!(meta["config"]["run"]["delta"], 0.0);
    assert_eq!(meta["config"]["run"]["nz"], 32);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(stx(&["simulate", "-o", out, "-s", "grid.nx=3"]).status.code(), Some(2));
    assert_eq!(stx(&["simulate", "-o", out, "-s", "physics.kappa=0.3", "--desk-scale"]).status.code(), Some(2));
    // The analytic constants need lambda_b beyond anything representable.
    let o = stx(&["simulate", "-o", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--desk-scale"));
    assert_eq!(stx(&["simulate", "-o", out, "--desk-scale", "-s", "physics.modes=50:1"]).status.code(), Some(2));
    assert_eq!(stx(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn failed_checks_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    // Far outside the perturbative regime the L² norm is no longer conserved
    // on this grid.
    let o = small_sim(dir.path(), "physics.epsilon=400");
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let report = json(&dir.path().join("report.json"));
    assert_eq!(report["pass"], false);
    assert!(dir.path().join("series.csv").exists());
}

#[test]
fn numerical_failure_exits_with_one_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    // Too coarse for the kernel to decay before the lattice edge.
    let o = stx(&["kernel-check", "--k", "1", "-o", dir.path().to_str().unwrap(), "-s", "kernel.Ny=257"]);
    assert_eq!(o.status.code(), Some(1));
    let dump = json(&dir.path().join("failure.json"));
    assert!(dump["error"].as_str().unwrap().contains("resolution"));
    assert_eq!(dump["experiment"], "kernel-check");
}

#[test]
fn kernel_check_reports_positive_rates() {
    let dir = tempfile::tempdir().unwrap();
    let o = stx(&["kernel-check", "--k", "1..2", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = json(&dir.path().join("kernel.json"));
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for (r, k) in rows.iter().zip([1, 2]) {
        assert_eq!(r["k"], k);
        assert!(r["lambda_fit"].as_f64().unwrap() > 0.0);
        assert!(r["C_fit"].as_f64().unwrap() > 0.0);
        assert!(r["max_relative_error"].as_f64().unwrap() <= 1e-6);
    }
    assert!(dir.path().join("kernel_samples.csv").exists());
}

#[test]
fn small_standalone_subcommands() {
    for (cmd, extra) in [
        ("weights-check", vec!["-s", "lemmas.samples=2000"]),
        ("toy-model", vec!["-s", "toy.eta=1e3"]),
        ("paraproduct-check", vec![]),
        ("linear-damping", vec!["-s", "grid.Nz=32"]),
    ] {
        let dir = tempfile::tempdir().unwrap();
        let mut args = vec![cmd, "-o", dir.path().to_str().unwrap()];
        args.extend(extra);
        let o = stx(&args);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        for f in ["report.json", "meta.json"] {
            assert!(dir.path().join(f).exists(), "{cmd} wrote no {f}");
        }
    }
}
