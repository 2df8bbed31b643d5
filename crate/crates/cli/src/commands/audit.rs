use std::fmt::Write as _;

use weylbrane::brane::{brane_residuals, model_lambda};
use weylbrane::cosmology::{bulk_system_residuals, u_equation_residual};
use weylbrane::report::{Equation, EquationResidual, ResidualReport};
use weylbrane::weyl::{bulk_residuals_riemann, split_residuals, SplitCase};

use super::{write_output, Outcome};
use crate::config::ScenarioConfig;
use crate::error::CliError;

pub const FILE_NAME: &str = "audit.csv";
pub const THRESHOLD: f64 = 1e-8;

/// Residual table over the points `(t, 0, 0, 0, l0)` of the grid.
pub fn report(cfg: &ScenarioConfig) -> Result<ResidualReport, CliError> {
    let model = cfg.scenario().model()?;
    let frame = model.frame();
    let lapse = model.lapse();
    let lambda = model_lambda(&model, cfg.l0);
    let mut report = ResidualReport::new(["t", "x1", "x2", "x3", "l"]);
    for t in cfg.grid()? {
        let point = [t, 0.0, 0.0, 0.0, cfg.l0];
        let mut entries = split_residuals(&frame, &lapse, &point, SplitCase::ExtraOnly)?;
        entries.extend(
            bulk_residuals_riemann(&frame, &point)?
                .into_iter()
                .filter(|r| r.equation == Equation::RiemannWave),
        );
        entries.extend(bulk_system_residuals(&model, t)?);
        let u = u_equation_residual(&model, t)?;
        entries.push(EquationResidual::scalar(Equation::UEquation, u.u_equation));
        entries.extend(brane_residuals(&model.f, &model.a, &lambda, t)?);
        report.record(&point, &entries);
    }
    Ok(report)
}

pub fn run(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let rep = report(cfg)?;
    let csv = rep.to_csv();
    let path = write_output(&cfg.output_dir, FILE_NAME, &csv)?;
    let mut s = String::new();
    let _ = writeln!(s, "audit: p = {}, xi = {}, C1 = {}, l0 = {}", cfg.p, cfg.xi, cfg.c1, cfg.l0);
    s.push_str(&rep.summary(THRESHOLD));
    let _ = writeln!(s, "  residuals are reported, not asserted");
    let _ = writeln!(s, "  wrote {} rows to {}", rep.rows().len(), path.display());
    Ok(Outcome { path, csv, summary: s })
}
