use std::fmt::Write as _;

use weylbrane::brane::{brane_csv, brane_state, model_lambda, BraneState};
use weylbrane::cosmology::admissibility;
use weylbrane::report::format_number;

use super::{write_output, Outcome};
use crate::config::ScenarioConfig;
use crate::error::CliError;

pub const FILE_NAME: &str = "brane.csv";

/// Direction of `ω_eff` along the grid, ignoring undefined samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Constant,
    StrictlyIncreasing,
    StrictlyDecreasing,
    Mixed,
}

impl Trend {
    pub fn of(values: &[f64]) -> Self {
        let v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
        if v.windows(2).all(|w| (w[1] - w[0]).abs() <= 1e-12 * (1.0 + w[0].abs())) {
            Trend::Constant
        } else if v.windows(2).all(|w| w[1] > w[0]) {
            Trend::StrictlyIncreasing
        } else if v.windows(2).all(|w| w[1] < w[0]) {
            Trend::StrictlyDecreasing
        } else {
            Trend::Mixed
        }
    }

    fn label(self) -> &'static str {
        match self {
            Trend::Constant => "constant",
            Trend::StrictlyIncreasing => "strictly increasing",
            Trend::StrictlyDecreasing => "strictly decreasing",
            Trend::Mixed => "not monotonic",
        }
    }
}

/// Brane fluid over the configured grid; `ω_eff` is NaN where `ρ_eff` vanishes.
pub fn states(cfg: &ScenarioConfig) -> Result<Vec<BraneState>, CliError> {
    let scenario = cfg.scenario();
    scenario.gamma()?;
    let model = scenario.model()?;
    let lambda = model_lambda(&model, cfg.l0);
    cfg.grid()?
        .into_iter()
        .map(|t| brane_state(&model.f, &model.a, &lambda, t).map_err(CliError::from))
        .collect()
}

pub fn run(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let scenario = cfg.scenario();
    let gamma = scenario.gamma()?;
    let rows = states(cfg)?;
    let csv = brane_csv(&rows);
    let path = write_output(&cfg.output_dir, FILE_NAME, &csv)?;

    let flags = admissibility(cfg.p);
    let omega: Vec<f64> = rows.iter().map(|s| s.omega_eff).collect();
    let undefined = omega.iter().filter(|w| w.is_nan()).count();
    let (first, last) = (rows[0], rows[rows.len() - 1]);

    let mut s = String::new();
    let _ = writeln!(s, "brane: p = {}, xi = {}, C1 = {}, l0 = {}", cfg.p, cfg.xi, cfg.c1, cfg.l0);
    let _ = writeln!(s, "  gamma              = {}", format_number(gamma));
    let _ = writeln!(s, "  discriminant       = {}", format_number(scenario.discriminant()));
    let _ = writeln!(
        s,
        "  lambda_coefficient = {}",
        format_number(scenario.lambda_coefficient().unwrap_or(f64::NAN))
    );
    let _ = writeln!(
        s,
        "  real_gamma = {}, omega_decreasing = {}, admissible_window = {}, de_sitter = {}",
        flags.real_gamma, flags.omega_decreasing, flags.admissible_window, flags.de_sitter
    );
    let _ = writeln!(s, "  omega_eff(t = {}) = {}", format_number(first.t), format_number(first.omega_eff));
    let _ = writeln!(s, "  omega_eff(t = {}) = {}", format_number(last.t), format_number(last.omega_eff));
    let _ = writeln!(s, "  omega_eff over grid: {}", Trend::of(&omega).label());
    if undefined > 0 {
        let _ = writeln!(s, "  omega_eff undefined (vanishing rho_eff) at {undefined} sample(s)");
    }
    let _ = writeln!(s, "  wrote {} rows to {}", rows.len(), path.display());
    Ok(Outcome { path, csv, summary: s })
}
