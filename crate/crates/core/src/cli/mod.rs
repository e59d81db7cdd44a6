//! Verification suites, reports and the command implementations behind the
//! `confmax` binary.

pub mod checks;
pub mod commands;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Exec;

/// Registered suites, in report order.
pub const SUITES: [&str; 8] =
    ["geometry", "ktypes", "maxwell", "conformal", "pairing", "lie-action", "branching", "planewave"];

/// Default tolerances, by name. Override with `--tol name=value`.
pub const DEFAULT_TOLERANCES: [(&str, f64); 14] = [
    ("annihilation", 1e-4),
    ("classification", 1e-10),
    ("embedding", 1e-6),
    ("factor", 1e-8),
    ("frequency", 1e-8),
    ("invariance_generic", 1e-3),
    ("invariance_k", 1e-6),
    ("maxwell", 1e-4),
    ("norm", 1e-8),
    ("offdiag", 1e-8),
    ("planewave", 1e-12),
    ("schur", 1e-10),
    ("star", 1e-12),
    ("structure", 1e-12),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::InvalidLabel(format!("unknown format {s:?} (json, csv)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Everything that determines a suite run. Echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    pub k_max: u32,
    /// Random points per check; `None` uses each check's own count.
    pub samples: Option<usize>,
    pub seed: u64,
    /// Quadrature order for the pairing checks (truncation order for
    /// `branching`); `None` means automatic.
    pub order: Option<u32>,
    pub tolerances: BTreeMap<String, f64>,
    pub output: Option<String>,
    pub format: Format,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: "all".into(),
            k_max: 5,
            samples: None,
            seed: 20_240_101,
            order: None,
            tolerances: DEFAULT_TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            output: None,
            format: Format::Json,
        }
    }
}

impl SuiteConfig {
    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| panic!("tolerance {name} is not registered"))
    }

    /// `samples` if given, else the check's default count.
    pub fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    /// Applies a `name=value` override.
    pub fn set_tolerance(&mut self, spec: &str) -> Result<()> {
        let (name, val) =
            spec.split_once('=').ok_or_else(|| Error::InvalidLabel(format!("tolerance {spec:?} is not name=value")))?;
        if !self.tolerances.contains_key(name) {
            let known: Vec<&str> = DEFAULT_TOLERANCES.iter().map(|(k, _)| *k).collect();
            return Err(Error::InvalidLabel(format!("unknown tolerance {name:?}; known: {}", known.join(", "))));
        }
        let v: f64 = val.parse().map_err(|_| Error::InvalidLabel(format!("bad tolerance value {val:?}")))?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidLabel(format!("tolerance {name} must be finite and nonnegative")));
        }
        self.tolerances.insert(name.to_string(), v);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.suite != "all" && !SUITES.contains(&self.suite.as_str()) {
            return Err(Error::InvalidLabel(format!(
                "unknown suite {:?}; known: all, {}",
                self.suite,
                SUITES.join(", ")
            )));
        }
        if self.samples == Some(0) {
            return Err(Error::InvalidLabel("samples must be positive".into()));
        }
        Ok(())
    }

    /// Seed for one check, independent of which other checks run.
    pub fn seed_for(&self, salt: &str) -> u64 {
        salt.bytes().fold(self.seed ^ 0x9e37_79b9_7f4a_7c15, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
    }
}

/// One measured quantity against its expectation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Unit of `measured` and `expected`, e.g. `pi^2` or `relative error`.
    pub unit: String,
    /// The raw value when `measured` is rescaled.
    pub raw: Option<f64>,
    pub detail: String,
}

impl Check {
    /// `measured <= tolerance` with an expected value of zero.
    pub fn error(id: impl Into<String>, description: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            measured,
            expected: 0.0,
            tolerance,
            passed: measured <= tolerance,
            unit: "error".into(),
            raw: None,
            detail: String::new(),
        }
    }

    /// `|measured - expected| <= tolerance * max(|expected|, 1)`.
    pub fn value(
        id: impl Into<String>,
        description: impl Into<String>,
        measured: f64,
        expected: f64,
        tolerance: f64,
        unit: &str,
    ) -> Self {
        let passed = (measured - expected).abs() <= tolerance * expected.abs().max(1.0);
        Self {
            id: id.into(),
            description: description.into(),
            measured,
            expected,
            tolerance,
            passed,
            unit: unit.into(),
            raw: None,
            detail: String::new(),
        }
    }

    pub fn flag(id: impl Into<String>, description: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            measured: if ok { 1.0 } else { 0.0 },
            expected: 1.0,
            tolerance: 0.0,
            passed: ok,
            unit: "flag".into(),
            raw: None,
            detail: detail.into(),
        }
    }

    pub fn with_raw(mut self, raw: f64) -> Self {
        self.raw = Some(raw);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    /// A check that could not be computed.
    pub fn failed(id: impl Into<String>, description: impl Into<String>, err: &Error) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            measured: f64::NAN,
            expected: f64::NAN,
            tolerance: 0.0,
            passed: false,
            unit: String::new(),
            raw: None,
            detail: err.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))? + "\n")
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["id", "measured", "expected", "tolerance", "passed", "unit", "raw", "detail"]).map_err(io)?;
        for c in &self.checks {
            w.write_record([
                c.id.clone(),
                format!("{:e}", c.measured),
                format!("{:e}", c.expected),
                format!("{:e}", c.tolerance),
                c.passed.to_string(),
                c.unit.clone(),
                c.raw.map(|r| format!("{r:e}")).unwrap_or_default(),
                c.detail.clone(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Runs the configured suite (or all of them). Checks are sorted by id.
pub fn run_suite(cfg: &SuiteConfig, exec: Exec) -> Result<Report> {
    cfg.validate()?;
    let names: Vec<&str> = if cfg.suite == "all" { SUITES.to_vec() } else { vec![cfg.suite.as_str()] };
    let mut checks = Vec::new();
    for name in names {
        checks.extend(checks::run(name, cfg, exec));
    }
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report { config: cfg.clone(), checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let mut cfg = SuiteConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.suite = "nope".into();
        assert!(cfg.validate().is_err());
        let mut cfg = SuiteConfig::default();
        assert!(cfg.set_tolerance("norm=1e-6").is_ok());
        assert_eq!(cfg.tol("norm"), 1e-6);
        assert!(cfg.set_tolerance("bogus=1").is_err());
        assert!(cfg.set_tolerance("norm").is_err());
        assert!(cfg.set_tolerance("norm=-1").is_err());
    }

    #[test]
    fn seeds_depend_on_salt() {
        let cfg = SuiteConfig::default();
        assert_ne!(cfg.seed_for("a"), cfg.seed_for("b"));
        assert_eq!(cfg.seed_for("a"), cfg.seed_for("a"));
    }
}
