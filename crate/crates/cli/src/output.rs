use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::Path;

/// One pass/fail flag of a report. Disabled checks are reported but do not
/// affect the exit code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: String,
    pub pass: bool,
    pub enabled: bool,
}

impl Check {
    pub fn new(name: &str, value: f64, target: impl Into<String>, pass: bool) -> Self {
        Self { name: name.into(), value, target: target.into(), pass, enabled: true }
    }

    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self::new(name, value, format!("<= {limit:e}"), value <= limit)
    }

    /// `value` within `target ± tol`; a missing value fails.
    pub fn near(name: &str, value: Option<f64>, target: f64, tol: f64) -> Self {
        let v = value.unwrap_or(f64::NAN);
        Self::new(name, v, format!("{target} ± {tol}"), (v - target).abs() <= tol)
    }

    pub fn enabled(mut self, on: bool) -> Self {
        self.enabled = on;
        self
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().filter(|c| c.enabled).all(|c| c.pass)
}

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_f64).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(f64::NAN), "NaN");
    }

    #[test]
    fn disabled_checks_do_not_count() {
        let c = vec![Check::at_most("a", 1.0, 2.0), Check::at_most("b", 3.0, 2.0).enabled(false)];
        assert!(all_pass(&c));
        assert!(!all_pass(&[Check::near("c", None, 1.0, 0.1)]));
    }
}
