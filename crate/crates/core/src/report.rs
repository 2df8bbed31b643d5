//! Residual bookkeeping and the fixed numeric text format shared by all CSV output.

use std::fmt::Write as _;

/// Field equations and derived identities the toolkit can audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Equation {
    /// Bulk tensor equation written with the Weyl connection.
    WeylField,
    /// Bulk scalar equation written with the Weyl connection.
    WeylScalar,
    /// Bulk tensor equation in Riemannian form with the scalar as a source.
    RiemannField,
    /// Riemannian wave equation for the Weyl potential.
    RiemannWave,
    /// Spacetime block of the foliated bulk equations.
    SplitSpacetime,
    /// Mixed spacetime/extra block of the foliated bulk equations.
    SplitMixed,
    /// Extra-extra component of the foliated bulk equations.
    SplitExtra,
    /// Spacetime block when the potential depends only on the extra coordinate.
    ExtraOnlySpacetime,
    ExtraOnlyMixed,
    ExtraOnlyExtra,
    /// `∂_l[√|g| Φ⁻² φ_l²]`.
    LapseFluxSquared,
    /// `∂_l[√|g| Φ⁻² φ_l]`, the wave-equation flux.
    LapseFluxLinear,
    /// `3H² + 3ḞH` against the Weyl source.
    BulkHubble,
    /// `2ä/a + H² + 2ḞH + F̈ + Ḟ²` against the Weyl source.
    BulkSpatial,
    /// `−3(ä/a + H²)` against the Weyl source.
    BulkExtra,
    /// `F̈ + Ḟ² + 2HḞ + 5ä/a + 4H²`.
    WarpCombination,
    /// `ü + 4(ä/a + H²)u` with `u = a e^F`.
    UEquation,
    /// `bulk_spatial − bulk_extra − warp_combination`, zero by algebra.
    BulkCombinationIdentity,
    /// `3H² − ρ_im − Λ` on the brane.
    BraneEnergy,
    /// `2ä/a + H² + p_im − Λ` on the brane.
    BranePressure,
}

impl Equation {
    pub fn id(&self) -> &'static str {
        match self {
            Equation::WeylField => "weyl_field",
            Equation::WeylScalar => "weyl_scalar",
            Equation::RiemannField => "riemann_field",
            Equation::RiemannWave => "riemann_wave",
            Equation::SplitSpacetime => "split_spacetime",
            Equation::SplitMixed => "split_mixed",
            Equation::SplitExtra => "split_extra",
            Equation::ExtraOnlySpacetime => "extra_only_spacetime",
            Equation::ExtraOnlyMixed => "extra_only_mixed",
            Equation::ExtraOnlyExtra => "extra_only_extra",
            Equation::LapseFluxSquared => "lapse_flux_squared",
            Equation::LapseFluxLinear => "lapse_flux_linear",
            Equation::BulkHubble => "bulk_hubble",
            Equation::BulkSpatial => "bulk_spatial",
            Equation::BulkExtra => "bulk_extra",
            Equation::WarpCombination => "warp_combination",
            Equation::UEquation => "u_equation",
            Equation::BulkCombinationIdentity => "bulk_combination_identity",
            Equation::BraneEnergy => "brane_energy",
            Equation::BranePressure => "brane_pressure",
        }
    }
}

/// Residual of one equation at one point.
///
/// `value` is the signed residual for scalar equations and the max-abs over
/// components for tensor equations; `components` keeps the raw entries.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationResidual {
    pub equation: Equation,
    pub value: f64,
    pub components: Vec<f64>,
}

impl EquationResidual {
    pub fn scalar(equation: Equation, value: f64) -> Self {
        Self {
            equation,
            value,
            components: vec![value],
        }
    }

    pub fn tensor(equation: Equation, components: Vec<f64>) -> Self {
        let value = components.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Self {
            equation,
            value,
            components,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.value.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRow {
    pub equation: Equation,
    pub point: Vec<f64>,
    pub residual: f64,
}

/// Per-equation residual tables over a grid of points.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    labels: Vec<String>,
    rows: Vec<ResidualRow>,
}

impl ResidualReport {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        Self {
            labels: labels.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &[ResidualRow] {
        &self.rows
    }

    pub fn record(&mut self, point: &[f64], entries: &[EquationResidual]) {
        for e in entries {
            self.rows.push(ResidualRow {
                equation: e.equation,
                point: point.to_vec(),
                residual: e.value,
            });
        }
    }

    pub fn extend(&mut self, other: ResidualReport) {
        self.rows.extend(other.rows);
    }

    /// Equations in order of first appearance.
    pub fn equations(&self) -> Vec<Equation> {
        let mut seen = Vec::new();
        for r in &self.rows {
            if !seen.contains(&r.equation) {
                seen.push(r.equation);
            }
        }
        seen
    }

    pub fn column(&self, equation: Equation) -> Vec<&ResidualRow> {
        self.rows.iter().filter(|r| r.equation == equation).collect()
    }

    /// Largest `|residual|` for `equation` over the grid; NaN propagates.
    pub fn max_abs(&self, equation: Equation) -> Option<f64> {
        let col = self.column(equation);
        if col.is_empty() {
            return None;
        }
        Some(col.iter().fold(0.0f64, |m, r| {
            if m.is_nan() || r.residual.is_nan() {
                f64::NAN
            } else {
                m.max(r.residual.abs())
            }
        }))
    }

    pub fn holds(&self, equation: Equation, threshold: f64) -> Option<bool> {
        self.max_abs(equation).map(|m| m <= threshold)
    }

    /// CSV with header `equation_id,<labels...>,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("equation_id");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push_str(",residual\n");
        for r in &self.rows {
            out.push_str(r.equation.id());
            for v in &r.point {
                out.push(',');
                out.push_str(&format_number(*v));
            }
            out.push(',');
            out.push_str(&format_number(r.residual));
            out.push('\n');
        }
        out
    }

    /// Plain-text block: one line per equation with its max-abs residual.
    pub fn summary(&self, threshold: f64) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "residual summary (threshold {})", format_number(threshold));
        for eq in self.equations() {
            let m = self.max_abs(eq).unwrap_or(f64::NAN);
            let verdict = if m <= threshold { "holds" } else { "violated" };
            let _ = writeln!(
                out,
                "  {:<26} max_abs = {}  points = {:>3}  {}",
                eq.id(),
                format_number(m),
                self.column(eq).len(),
                verdict
            );
        }
        out
    }
}

/// Fixed text form for numbers: scientific, 17 significant digits.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{:.16e}", v)
    }
}
