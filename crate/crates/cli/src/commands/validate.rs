//! Golden checks of the curvature engine and the Weyl structure.

use std::fmt::Write as _;

use weylbrane::cosmology::{gamma_exponent, TimeFunction, WarpedModel};
use weylbrane::geometry::{
    christoffel, curvature_with, weyl_connection, weyl_curvature_with, MetricField, RiemannSign, ScalarField,
};
use weylbrane::report::format_number;
use weylbrane::weyl::{compatibility_residual, frame_transform, split_residuals, SplitCase, WeylFrame};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn close(name: &'static str, got: f64, want: f64, tol: f64) -> Check {
    Check {
        name,
        passed: (got - want).abs() <= tol,
        detail: format!("got {}, expected {}", format_number(got), format_number(want)),
    }
}

fn small(name: &'static str, got: f64, tol: f64) -> Check {
    Check {
        name,
        passed: got <= tol,
        detail: format!("max |residual| = {} (tolerance {})", format_number(got), format_number(tol)),
    }
}

fn power_law_warp(p: f64, gamma: f64) -> WarpedModel {
    WarpedModel::new(TimeFunction::power_law(1.0, p), TimeFunction::log_power(1.0, gamma), 1.0, 0.0, 1.0)
}

fn frw(p: f64) -> MetricField {
    weylbrane::cosmology::frw_metric(&TimeFunction::power_law(1.0, p))
}

fn extra_potential() -> ScalarField {
    ScalarField::linear(vec![0.0, 0.0, 0.0, 0.0, 1.0], 0.0)
}

fn checks_inner(sign: RiemannSign) -> Result<Vec<Check>, Box<dyn std::error::Error>> {
    const T: usize = 0;
    const X: usize = 1;
    const L: usize = 4;
    let mink5 = MetricField::minkowski(5)?;
    let mink4 = MetricField::minkowski(4)?;
    let p5 = [0.3, -1.2, 0.7, 2.0, 0.4];
    let mut out = Vec::new();

    let flat = curvature_with(&mink5, &p5, sign)?;
    out.push(small("minkowski-5d-curvature-vanishes", flat.riemann.max_abs().max(flat.einstein.amax()), 1e-14));
    out.push(small("minkowski-4d-christoffel-vanishes", christoffel(&mink4, &[1.0, 2.0, 3.0, 4.0])?.max_abs(), 0.0));

    out.push(close("frw-christoffel-t-xx", christoffel(&frw(0.5), &[1.0, 0.0, 0.0, 0.0])?[(T, X, X)], 0.5, 1e-14));

    let log_warp = WarpedModel::new(TimeFunction::constant(1.0), TimeFunction::log_power(1.0, 1.0), 0.0, 0.0, 1.0);
    out.push(close("warped-christoffel-t-ll", christoffel(&log_warp.metric5(), &[2.0, 0.0, 0.0, 0.0, 0.0])?[(T, L, L)], 2.0, 1e-14));

    let frw_curv = curvature_with(&frw(2.0 / 3.0), &[1.0, 0.0, 0.0, 0.0], sign)?;
    out.push(close("frw-einstein-tt", frw_curv.einstein[(T, T)], 4.0 / 3.0, 1e-12));
    out.push(close("frw-einstein-mixed-tt", frw_curv.einstein_mixed()[(T, T)], 4.0 / 3.0, 1e-12));

    let warped = curvature_with(&power_law_warp(0.5, 0.5).metric5(), &[1.0, 0.0, 0.0, 0.0, 0.0], sign)?;
    out.push(close("warped-einstein-tt", warped.einstein[(T, T)], 1.5, 1e-12));
    let off = (0..4).map(|a| warped.einstein[(a, L)].abs()).fold(0.0, f64::max);
    out.push(small("warped-einstein-mixed-block-vanishes", off, 1e-12));
    out.push(small(
        "warped-einstein-symmetric",
        (&warped.einstein - warped.einstein.transpose()).amax(),
        1e-12,
    ));

    let wc = weyl_connection(&mink5, &extra_potential(), &p5)?;
    out.push(close("weyl-connection-t-tl", wc[(T, T, L)], -0.5, 1e-15));
    out.push(close("weyl-connection-l-tt", wc[(L, T, T)], -0.5, 1e-15));

    let model = power_law_warp(0.45, gamma_exponent(0.45).unwrap_or(f64::NAN));
    let constant = ScalarField::constant(5, 3.0);
    let pt = [1.7, 0.1, 0.2, 0.3, 0.4];
    let same = weyl_connection(&model.metric5(), &constant, &pt)? == christoffel(&model.metric5(), &pt)?;
    out.push(Check {
        name: "weyl-connection-constant-potential-is-levi-civita",
        passed: same,
        detail: format!("bitwise equal: {same}"),
    });

    let wr = weyl_curvature_with(&mink5, &extra_potential(), &p5, sign)?;
    out.push(close("weyl-ricci-tt", wr.ricci[(T, T)], 0.75, 1e-14));
    out.push(close("weyl-ricci-xx", wr.ricci[(X, X)], -0.75, 1e-14));
    out.push(close("weyl-ricci-ll", wr.ricci[(L, L)], 0.0, 1e-14));

    let frame = WeylFrame::new(model.metric5(), model.potential(), 1.0)?;
    let compat = compatibility_residual(&frame, &pt)?.max_abs();
    out.push(small("weyl-compatibility", compat, 1e-10));
    let f = ScalarField::new(5, |x| (x[0] * 0.3).sin() + x[4] * x[4] * 0.2 + x[1] * 0.1);
    let moved = compatibility_residual(&frame_transform(&frame, &f), &pt)?.max_abs();
    out.push(small("weyl-compatibility-after-frame-change", moved, 1e-10));

    let split = split_residuals(&frame, &model.lapse(), &pt, SplitCase::ExtraOnly)?;
    let flux = split
        .iter()
        .filter(|r| r.equation.id().starts_with("lapse_flux"))
        .fold(0.0, |m: f64, r| m.max(r.max_abs()));
    out.push(small("linear-weyl-field-lapse-flux", flux, 1e-12));

    let g = gamma_exponent(5.0 / 9.0).unwrap_or(f64::NAN);
    out.push(close("de-sitter-exponent", g, 0.0, 1e-12));
    Ok(out)
}

/// All golden checks under the given Riemann sign convention.
pub fn checks(sign: RiemannSign) -> Vec<Check> {
    checks_inner(sign).unwrap_or_else(|e| {
        vec![Check {
            name: "engine-evaluation",
            passed: false,
            detail: e.to_string(),
        }]
    })
}

pub fn render(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        let _ = writeln!(s, "[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(s, "validate: {passed}/{} checks passed", checks.len());
    s
}

/// Report text; the error names how many checks failed.
pub fn run(flip_riemann_sign: bool) -> (String, Result<(), CliError>) {
    let sign = if flip_riemann_sign {
        RiemannSign::Reversed
    } else {
        RiemannSign::Standard
    };
    let all = checks(sign);
    let report = render(&all);
    let failed = all.iter().filter(|c| !c.passed).count();
    let status = if failed > 0 {
        Err(CliError::ValidationFailed {
            failed,
            total: all.len(),
        })
    } else {
        Ok(())
    };
    (report, status)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pristine_engine_passes() {
        let all = checks(RiemannSign::Standard);
        assert!(all.len() >= 10);
        for c in &all {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn flipped_sign_is_caught() {
        let all = checks(RiemannSign::Reversed);
        let failed: Vec<_> = all.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        assert!(failed.contains(&"frw-einstein-tt"));
        assert!(failed.contains(&"weyl-ricci-tt"));
    }

    #[test]
    fn report_is_deterministic() {
        assert_eq!(run(false).0, run(false).0);
        assert!(run(false).1.is_ok());
        assert_eq!(run(true).1.unwrap_err().exit_code(), 1);
    }
}
