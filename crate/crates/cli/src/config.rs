//! Flat `key = value` scenario files and their command-line overrides.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use weylbrane::cosmology::{time_grid, PowerLawScenario};
use weylbrane::report::format_number;

use crate::error::CliError;

pub const SCENARIO_KEYS: &[&str] = &[
    "p",
    "a0",
    "t0",
    "A1",
    "A2",
    "C1",
    "C2",
    "xi",
    "t_min",
    "t_max",
    "samples",
    "log_spacing",
    "l0",
    "output_dir",
];

pub const SWEEP_KEYS: &[&str] = &["p_min", "p_max", "steps"];

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub p: f64,
    pub a0: f64,
    pub t0: f64,
    pub a1: f64,
    pub a2: f64,
    pub c1: f64,
    pub c2: f64,
    pub xi: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub log_spacing: bool,
    pub l0: f64,
    pub output_dir: PathBuf,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let s = PowerLawScenario::default();
        Self {
            p: s.p,
            a0: s.a0,
            t0: s.t0,
            a1: s.a1,
            a2: s.a2,
            c1: s.c1,
            c2: s.c2,
            xi: s.xi,
            t_min: 1.0,
            t_max: 100.0,
            samples: 16,
            log_spacing: true,
            l0: 0.0,
            output_dir: PathBuf::from("output"),
        }
    }
}

impl ScenarioConfig {
    pub fn scenario(&self) -> PowerLawScenario {
        PowerLawScenario::new(self.p, self.a0, self.t0, self.a1, self.a2, self.c1, self.c2, self.xi)
    }

    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        time_grid(self.t_min, self.t_max, self.samples, self.log_spacing).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let reals = [
            ("p", self.p),
            ("a0", self.a0),
            ("t0", self.t0),
            ("A1", self.a1),
            ("A2", self.a2),
            ("C1", self.c1),
            ("C2", self.c2),
            ("xi", self.xi),
            ("t_min", self.t_min),
            ("t_max", self.t_max),
            ("l0", self.l0),
        ];
        if let Some((k, v)) = reals.iter().find(|(_, v)| !v.is_finite()) {
            return Err(CliError::Config(format!("{k} must be finite, got {v}")));
        }
        if !(self.a0 > 0.0) || !(self.t0 > 0.0) {
            return Err(CliError::Config("a0 and t0 must be positive".into()));
        }
        self.grid().map(|_| ())
    }

    /// Assigns one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "p" => self.p = parse_real(key, value)?,
            "a0" => self.a0 = parse_real(key, value)?,
            "t0" => self.t0 = parse_real(key, value)?,
            "A1" => self.a1 = parse_real(key, value)?,
            "A2" => self.a2 = parse_real(key, value)?,
            "C1" => self.c1 = parse_real(key, value)?,
            "C2" => self.c2 = parse_real(key, value)?,
            "xi" => self.xi = parse_real(key, value)?,
            "t_min" => self.t_min = parse_real(key, value)?,
            "t_max" => self.t_max = parse_real(key, value)?,
            "samples" => {
                self.samples = value
                    .parse()
                    .map_err(|_| CliError::Config(format!("samples: expected a non-negative integer, got `{value}`")))?
            }
            "log_spacing" => self.log_spacing = parse_bool(key, value)?,
            "l0" => self.l0 = parse_real(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            _ => return Err(unknown_key(key)),
        }
        Ok(())
    }

    /// The scenario as a key-value document that [`parse_document`] reads back.
    pub fn to_document(&self) -> String {
        let mut out = String::new();
        for (k, v) in [
            ("p", self.p),
            ("a0", self.a0),
            ("t0", self.t0),
            ("A1", self.a1),
            ("A2", self.a2),
            ("C1", self.c1),
            ("C2", self.c2),
            ("xi", self.xi),
            ("t_min", self.t_min),
            ("t_max", self.t_max),
        ] {
            let _ = writeln!(out, "{k} = {}", format_number(v));
        }
        let _ = writeln!(out, "samples = {}", self.samples);
        let _ = writeln!(out, "log_spacing = {}", self.log_spacing);
        let _ = writeln!(out, "l0 = {}", format_number(self.l0));
        let _ = writeln!(out, "output_dir = {}", self.output_dir.display());
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
    pub base: ScenarioConfig,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            p_min: 0.30,
            p_max: 0.56,
            steps: 27,
            base: ScenarioConfig::default(),
        }
    }
}

impl SweepSpec {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "p_min" => self.p_min = parse_real(key, value)?,
            "p_max" => self.p_max = parse_real(key, value)?,
            "steps" => {
                self.steps = value
                    .parse()
                    .map_err(|_| CliError::Config(format!("steps: expected a positive integer, got `{value}`")))?
            }
            _ => self.base.set(key, value)?,
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.base.validate()?;
        if self.steps < 1 {
            return Err(CliError::Config("steps must be at least 1".into()));
        }
        if !self.p_min.is_finite() || !self.p_max.is_finite() {
            return Err(CliError::Config("p_min and p_max must be finite".into()));
        }
        if self.steps > 1 && !(self.p_max > self.p_min) {
            return Err(CliError::Config(format!(
                "p_max ({}) must exceed p_min ({})",
                self.p_max, self.p_min
            )));
        }
        Ok(())
    }

    /// Inclusive of both endpoints; a single step yields `p_min` alone.
    pub fn p_grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.p_min];
        }
        let last = (self.steps - 1) as f64;
        let mut grid: Vec<f64> = (0..self.steps)
            .map(|i| self.p_min + (self.p_max - self.p_min) * (i as f64 / last))
            .collect();
        grid[self.steps - 1] = self.p_max;
        grid
    }
}

fn parse_real(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("{key}: expected a real number, got `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("{key}: expected true or false, got `{value}`"))),
    }
}

fn unknown_key(key: &str) -> CliError {
    CliError::Config(format!("unknown configuration key `{key}`"))
}

/// Parses `key = value` lines; `#` starts a comment. Keys outside `allowed`
/// and repeated keys are rejected.
pub fn parse_document(text: &str, allowed: &[&str]) -> Result<Vec<(String, String)>, CliError> {
    let mut entries: Vec<(String, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !allowed.contains(&k) {
            return Err(CliError::Config(format!("line {}: unknown configuration key `{k}`", n + 1)));
        }
        if v.is_empty() {
            return Err(CliError::Config(format!("line {}: missing value for `{k}`", n + 1)));
        }
        if entries.iter().any(|(e, _)| e == k) {
            return Err(CliError::Config(format!("line {}: duplicate key `{k}`", n + 1)));
        }
        entries.push((k.to_string(), v.to_string()));
    }
    Ok(entries)
}

pub fn read_document(path: &Path, allowed: &[&str]) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text, allowed)
}
