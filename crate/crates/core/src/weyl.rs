//! Weyl frames and residuals of the five-dimensional bulk field equations.
//!
//! A frame is a metric together with a scalar potential `φ`; the Weyl one-form
//! is `σ = dφ`, so integrability holds by construction. The coupling `ξ` only
//! ever enters through `6 − 5ξ` in the Riemannian form of the equations.
//!
//! The extra coordinate is always the last one.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::geometry::{
    Connection, CurvatureBundle, GeometryError, MetricField, MetricJet, RiemannSign, ScalarField, ScalarJet, Tensor3,
};
use crate::numerics::Jet2;
use crate::report::{Equation, EquationResidual};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeylError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("potential is defined on {potential} coordinates but the metric on {metric}")]
    DimensionMismatch { metric: usize, potential: usize },
    #[error("coupling constant must be finite")]
    NonFiniteCoupling,
    #[error("bulk equations need a five-dimensional frame, got {0}")]
    NotFiveDimensional(usize),
    #[error("metric has non-zero g_(alpha l) at {point:?}: unsupported foliation")]
    UnsupportedFoliation { point: Vec<f64> },
    #[error("lapse must be strictly positive, got {value} at {point:?}")]
    NonPositiveLapse { value: f64, point: Vec<f64> },
    #[error("lapse squared {lapse_sq} does not match -g_ll = {g_ll} at {point:?}")]
    LapseMismatch { lapse_sq: f64, g_ll: f64, point: Vec<f64> },
    #[error("potential has non-zero spacetime gradient at {point:?}")]
    PotentialNotExtraOnly { point: Vec<f64> },
}

/// Metric, Weyl potential and coupling constant.
#[derive(Clone, Debug)]
pub struct WeylFrame {
    pub metric: MetricField,
    pub phi: ScalarField,
    pub xi: f64,
}

impl WeylFrame {
    pub fn new(metric: MetricField, phi: ScalarField, xi: f64) -> Result<Self, WeylError> {
        if metric.dim() != phi.dim() {
            return Err(WeylError::DimensionMismatch {
                metric: metric.dim(),
                potential: phi.dim(),
            });
        }
        if !xi.is_finite() {
            return Err(WeylError::NonFiniteCoupling);
        }
        Ok(Self { metric, phi, xi })
    }

    /// `6 − 5ξ`
    pub fn coupling(&self) -> f64 {
        coupling(self.xi)
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }
}

/// `6 − 5ξ`, the only combination in which `ξ` reaches the Riemannian equations.
pub fn coupling(xi: f64) -> f64 {
    6.0 - 5.0 * xi
}

/// Lapse `Φ` of the block metric `g_αβ dx^α dx^β − Φ² dl²`.
#[derive(Clone, Debug)]
pub struct LapseModel {
    pub field: ScalarField,
}

impl LapseModel {
    pub fn new(field: ScalarField) -> Self {
        Self { field }
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        Self::new(ScalarField::constant(dim, value))
    }

    pub fn value_at(&self, point: &[f64]) -> Result<f64, WeylError> {
        let v = self.field.value_at(point);
        if v > 0.0 {
            Ok(v)
        } else {
            Err(WeylError::NonPositiveLapse {
                value: v,
                point: point.to_vec(),
            })
        }
    }
}

/// `∇_a g_bc − σ_a g_bc` in the frame's own Weyl connection, indexed `(a, b, c)`.
pub fn compatibility_residual(frame: &WeylFrame, point: &[f64]) -> Result<Tensor3, WeylError> {
    let m = MetricJet::sample(&frame.metric, point)?;
    let p = ScalarJet::sample(&frame.phi, point)?;
    let conn = Connection::weyl(&m, &p);
    let mut q = conn.metric_derivative(&m);
    let n = m.dim();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                q[(a, b, c)] -= p.grad[a] * m.g[(b, c)];
            }
        }
    }
    Ok(q)
}

/// Moves to the equivalent frame `(e^{−f} g, φ − f)`.
pub fn frame_transform(frame: &WeylFrame, f: &ScalarField) -> WeylFrame {
    let g = frame.metric.clone();
    let ff = f.clone();
    let metric = MetricField::new(g.signature().to_vec(), move |x| {
        let w = (-ff.eval_jets(x)).exp();
        g.eval_jets(x).into_iter().map(|c| c * w).collect()
    })
    .expect("signature was already validated");
    WeylFrame {
        metric,
        phi: frame.phi.add(&f.scaled(-1.0)),
        xi: frame.xi,
    }
}

fn flatten(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().iter().copied().collect()
}

/// Residuals of the Weyl-form tensor and scalar equations.
///
/// Tensor: `𝒢_ab + φ_{a;b} − (2ξ−1)φ_aφ_b + ξ g_ab φ_cφ^c` with
/// `φ_{a;b} = ∂_a∂_bφ − Γ^c_{ab}φ_c` in the Weyl connection.
/// Scalar: `φ^a_{;a} + 2φ_aφ^a` with `φ^a_{;a} = ∂_a(g^{ab}φ_b) + Γ^a_{ac}φ^c`.
pub fn bulk_residuals_weyl(frame: &WeylFrame, point: &[f64]) -> Result<Vec<EquationResidual>, WeylError> {
    let m = MetricJet::sample(&frame.metric, point)?;
    let p = ScalarJet::sample(&frame.phi, point)?;
    let n = m.dim();
    let conn = Connection::weyl(&m, &p);
    let bundle = CurvatureBundle::from_connection(&m, &conn, RiemannSign::Standard);
    let xi = frame.xi;

    let up: DVector<f64> = &m.g_inv * &p.grad;
    let sq = p.grad.dot(&up);
    let hess = conn.hessian(&p);
    let field = DMatrix::from_fn(n, n, |a, b| {
        bundle.einstein[(a, b)] + hess[(a, b)] - (2.0 * xi - 1.0) * p.grad[a] * p.grad[b] + xi * m.g[(a, b)] * sq
    });

    let dginv = m.dg_inv();
    let mut div = 0.0;
    for a in 0..n {
        for b in 0..n {
            div += dginv[a][(a, b)] * p.grad[b] + m.g_inv[(a, b)] * p.hess[(a, b)];
        }
        for c in 0..n {
            div += conn.gamma[(a, a, c)] * up[c];
        }
    }
    Ok(vec![
        EquationResidual::tensor(Equation::WeylField, flatten(&field)),
        EquationResidual::scalar(Equation::WeylScalar, div + 2.0 * sq),
    ])
}

/// Residuals of the Riemannian-form tensor equation and the wave equation `□̃φ = 0`.
pub fn bulk_residuals_riemann(frame: &WeylFrame, point: &[f64]) -> Result<Vec<EquationResidual>, WeylError> {
    let m = MetricJet::sample(&frame.metric, point)?;
    let p = ScalarJet::sample(&frame.phi, point)?;
    let n = m.dim();
    let conn = Connection::levi_civita(&m);
    let bundle = CurvatureBundle::from_connection(&m, &conn, RiemannSign::Standard);
    let k = frame.coupling();

    let sq = p.grad.dot(&(&m.g_inv * &p.grad));
    let field = DMatrix::from_fn(n, n, |a, b| {
        bundle.einstein[(a, b)] - 0.5 * k * (p.grad[a] * p.grad[b] - 0.5 * m.g[(a, b)] * sq)
    });
    let wave = m.g_inv.component_mul(&conn.hessian(&p)).sum();
    Ok(vec![
        EquationResidual::tensor(Equation::RiemannField, flatten(&field)),
        EquationResidual::scalar(Equation::RiemannWave, wave),
    ])
}

/// Which form of the foliated equations to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitCase {
    /// `φ(x, l)`: spacetime, mixed and extra projections.
    General,
    /// `φ(l)`: additionally the reduced projections and both lapse-flux forms.
    ExtraOnly,
}

/// Projections of the Riemannian bulk equations onto the `l = const` foliation.
pub fn split_residuals(
    frame: &WeylFrame,
    lapse: &LapseModel,
    point: &[f64],
    case: SplitCase,
) -> Result<Vec<EquationResidual>, WeylError> {
    let n = frame.dim();
    if n != 5 {
        return Err(WeylError::NotFiveDimensional(n));
    }
    let l = n - 1;
    let m = MetricJet::sample(&frame.metric, point)?;
    let scale = m.g.amax();
    if (0..l).any(|a| m.g[(a, l)].abs() > 1e-14 * scale || m.g[(l, a)].abs() > 1e-14 * scale) {
        return Err(WeylError::UnsupportedFoliation { point: point.to_vec() });
    }
    let lapse_jet = ScalarJet::sample(&lapse.field, point)?;
    let big_phi = lapse_jet.value;
    if !(big_phi > 0.0) {
        return Err(WeylError::NonPositiveLapse {
            value: big_phi,
            point: point.to_vec(),
        });
    }
    let lapse_sq = big_phi * big_phi;
    if (lapse_sq + m.g[(l, l)]).abs() > 1e-12 * lapse_sq {
        return Err(WeylError::LapseMismatch {
            lapse_sq,
            g_ll: m.g[(l, l)],
            point: point.to_vec(),
        });
    }

    let p = ScalarJet::sample(&frame.phi, point)?;
    let conn = Connection::levi_civita(&m);
    let bundle = CurvatureBundle::from_connection(&m, &conn, RiemannSign::Standard);
    let ein = &bundle.einstein;
    let k = frame.coupling();

    let h = m.g.view((0, 0), (l, l)).into_owned();
    let h_inv = m.g_inv.view((0, 0), (l, l)).into_owned();
    let grad4 = p.grad.rows(0, l).into_owned();
    let phi_l = p.grad[l];
    let sq4 = grad4.dot(&(&h_inv * &grad4));
    let inv_lapse_sq = 1.0 / lapse_sq;

    let spacetime: Vec<f64> = (0..l)
        .flat_map(|a| (0..l).map(move |b| (a, b)))
        .map(|(a, b)| {
            ein[(a, b)] - 0.5 * k * (grad4[a] * grad4[b] - 0.5 * h[(a, b)] * (sq4 - inv_lapse_sq * phi_l * phi_l))
        })
        .collect();
    let mixed: Vec<f64> = (0..l).map(|a| ein[(a, l)] - 0.5 * k * grad4[a] * phi_l).collect();
    let extra = ein[(l, l)] - 0.25 * k * (phi_l * phi_l + lapse_sq * sq4);

    let mut out = vec![
        EquationResidual::tensor(Equation::SplitSpacetime, spacetime),
        EquationResidual::tensor(Equation::SplitMixed, mixed),
        EquationResidual::scalar(Equation::SplitExtra, extra),
    ];

    if case == SplitCase::ExtraOnly {
        if grad4.iter().any(|v| *v != 0.0) {
            return Err(WeylError::PotentialNotExtraOnly { point: point.to_vec() });
        }
        let reduced: Vec<f64> = (0..l)
            .flat_map(|a| (0..l).map(move |b| (a, b)))
            .map(|(a, b)| ein[(a, b)] + 0.25 * (5.0 * frame.xi - 6.0) * inv_lapse_sq * h[(a, b)] * phi_l * phi_l)
            .collect();
        let reduced_mixed: Vec<f64> = (0..l).map(|a| ein[(a, l)]).collect();
        let reduced_extra = ein[(l, l)] - 0.25 * k * phi_l * phi_l;

        // S = √|g| Φ⁻², ∂_l S = S(½ g^{ab}∂_l g_ab − 2 ∂_lΦ/Φ)
        let det = m.g.determinant();
        let s = det.abs().sqrt() * inv_lapse_sq;
        let ds = s * (0.5 * m.g_inv.component_mul(&m.dg[l]).sum() - 2.0 * lapse_jet.grad[l] / big_phi);
        let phi_ll = p.hess[(l, l)];
        let flux_sq = ds * phi_l * phi_l + s * 2.0 * phi_l * phi_ll;
        let flux_lin = ds * phi_l + s * phi_ll;

        out.extend([
            EquationResidual::tensor(Equation::ExtraOnlySpacetime, reduced),
            EquationResidual::tensor(Equation::ExtraOnlyMixed, reduced_mixed),
            EquationResidual::scalar(Equation::ExtraOnlyExtra, reduced_extra),
            EquationResidual::scalar(Equation::LapseFluxSquared, flux_sq),
            EquationResidual::scalar(Equation::LapseFluxLinear, flux_lin),
        ]);
    }
    Ok(out)
}

/// `Σ c_k x_k² + d_k x_k`
pub fn quadratic_field(square: Vec<f64>, linear: Vec<f64>) -> ScalarField {
    let dim = square.len();
    ScalarField::new(dim, move |x| {
        let mut acc = Jet2::constant(0.0);
        for (i, xi) in x.iter().enumerate() {
            acc += *xi * *xi * square[i] + *xi * linear[i];
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const L: usize = 4;

    fn warped() -> MetricField {
        // a = t^0.45, e^F = t^0.7
        MetricField::diagonal(vec![1, -1, -1, -1, -1], |x| {
            let a2 = x[0].powf(0.9);
            vec![Jet2::constant(1.0), -a2, -a2, -a2, -x[0].powf(1.4)]
        })
        .unwrap()
    }

    fn warped_lapse() -> LapseModel {
        LapseModel::new(ScalarField::new(5, |x| x[0].powf(0.7)))
    }

    fn linear_l(c1: f64, c2: f64) -> ScalarField {
        ScalarField::linear(vec![0.0, 0.0, 0.0, 0.0, c1], c2)
    }

    const P: [f64; 5] = [2.0, 0.3, -0.2, 0.1, 0.7];

    #[test]
    fn compatibility_zero_potential() {
        let f = WeylFrame::new(warped(), ScalarField::constant(5, 0.0), 1.0).unwrap();
        assert!(compatibility_residual(&f, &P).unwrap().max_abs() <= 1e-14);
    }

    #[test]
    fn compatibility_linear_potential() {
        let mink = WeylFrame::new(MetricField::minkowski(5).unwrap(), linear_l(1.0, 0.0), 1.0).unwrap();
        assert!(compatibility_residual(&mink, &P).unwrap().max_abs() <= 1e-12);
        let w = WeylFrame::new(warped(), linear_l(1.3, 0.2), 1.0).unwrap();
        assert!(compatibility_residual(&w, &P).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn transform_by_zero_is_identity() {
        let f = WeylFrame::new(warped(), linear_l(1.0, 0.5), 1.0).unwrap();
        let g = frame_transform(&f, &ScalarField::constant(5, 0.0));
        assert_eq!(f.metric.value_at(&P).unwrap(), g.metric.value_at(&P).unwrap());
        assert_eq!(f.phi.value_at(&P), g.phi.value_at(&P));
    }

    #[test]
    fn transform_inverse_restores_frame() {
        let f = WeylFrame::new(warped(), linear_l(1.0, 0.5), 1.0).unwrap();
        let shift = quadratic_field(vec![0.1, 0.0, 0.2, 0.0, 0.3], vec![0.0, 1.0, 0.0, -1.0, 0.5]);
        let back = frame_transform(&frame_transform(&f, &shift), &shift.scaled(-1.0));
        let diff = f.metric.value_at(&P).unwrap() - back.metric.value_at(&P).unwrap();
        assert!(diff.amax() <= 1e-14);
        assert!((f.phi.value_at(&P) - back.phi.value_at(&P)).abs() <= 1e-14);
    }

    #[test]
    fn transformed_frame_stays_compatible() {
        let f = WeylFrame::new(warped(), linear_l(1.0, 0.5), 1.0).unwrap();
        let shift = quadratic_field(vec![0.05, 0.1, 0.0, 0.02, 0.3], vec![0.4, 0.0, 0.1, 0.0, -0.2]);
        let g = frame_transform(&f, &shift);
        assert!(compatibility_residual(&g, &P).unwrap().max_abs() <= 1e-10);
    }

    #[test]
    fn flat_vacuum_satisfies_both_forms() {
        let f = WeylFrame::new(MetricField::minkowski(5).unwrap(), ScalarField::constant(5, 0.0), 0.3).unwrap();
        for r in bulk_residuals_weyl(&f, &P).unwrap() {
            assert_eq!(r.max_abs(), 0.0, "{:?}", r.equation);
        }
        for r in bulk_residuals_riemann(&f, &P).unwrap() {
            assert_eq!(r.max_abs(), 0.0, "{:?}", r.equation);
        }
    }

    #[test]
    fn minkowski_linear_potential_riemann_form() {
        // G̃ = 0, φ_a = δ_a^l, φ_cφ^c = −1: residual_ab = −½k[δ^l_aδ^l_b + ½η_ab]
        let xi = 0.4;
        let k = coupling(xi);
        let f = WeylFrame::new(MetricField::minkowski(5).unwrap(), linear_l(1.0, 0.0), xi).unwrap();
        let r = bulk_residuals_riemann(&f, &P).unwrap();
        assert_eq!(r[1].value, 0.0);
        let c = &r[0].components;
        assert!((c[0] - (-0.25 * k)).abs() < 1e-15);
        assert!((c[6] - (0.25 * k)).abs() < 1e-15);
        assert!((c[24] - (-0.5 * k * 0.5)).abs() < 1e-15);
        assert!(r[0].value > 0.0);
    }

    #[test]
    fn critical_coupling_leaves_pure_einstein() {
        let f = WeylFrame::new(warped(), quadratic_field(vec![0.1; 5], vec![0.2; 5]), 1.2).unwrap();
        let r = bulk_residuals_riemann(&f, &P).unwrap();
        let ein = crate::geometry::curvature(&f.metric, &P).unwrap().einstein;
        assert_eq!(r[0].components, flatten(&ein));
    }

    #[test]
    fn linear_potential_on_warped_background() {
        let f = WeylFrame::new(warped(), linear_l(1.5, -0.3), 1.0).unwrap();
        let riem = bulk_residuals_riemann(&f, &P).unwrap();
        assert_eq!(riem[1].value, 0.0);
        let split = split_residuals(&f, &warped_lapse(), &P, SplitCase::ExtraOnly).unwrap();
        let get = |e: Equation| split.iter().find(|r| r.equation == e).unwrap().value;
        assert_eq!(get(Equation::LapseFluxSquared), 0.0);
        assert_eq!(get(Equation::LapseFluxLinear), 0.0);
        assert!(get(Equation::ExtraOnlyMixed) <= 1e-10);
    }

    #[test]
    fn split_matches_full_riemann_form() {
        let f = WeylFrame::new(warped(), quadratic_field(vec![0.1, 0.0, 0.3, 0.0, 0.2], vec![0.5; 5]), 0.7).unwrap();
        let full = bulk_residuals_riemann(&f, &P).unwrap();
        let split = split_residuals(&f, &warped_lapse(), &P, SplitCase::General).unwrap();
        let c = &full[0].components;
        for a in 0..4 {
            for b in 0..4 {
                assert!((split[0].components[a * 4 + b] - c[a * 5 + b]).abs() < 1e-12);
            }
            assert!((split[1].components[a] - c[a * 5 + L]).abs() < 1e-12);
        }
        assert!((split[2].value - c[L * 5 + L]).abs() < 1e-12);
    }

    #[test]
    fn zero_potential_reduces_to_einstein_projections() {
        let f = WeylFrame::new(warped(), ScalarField::constant(5, 0.0), 1.0).unwrap();
        let split = split_residuals(&f, &warped_lapse(), &P, SplitCase::ExtraOnly).unwrap();
        let ein = crate::geometry::curvature(&f.metric, &P).unwrap().einstein;
        let get = |e: Equation| split.iter().find(|r| r.equation == e).unwrap().clone();
        assert_eq!(get(Equation::ExtraOnlyExtra).value, ein[(L, L)]);
        assert_eq!(get(Equation::ExtraOnlySpacetime).components[0], ein[(0, 0)]);
    }

    #[test]
    fn off_block_metric_is_rejected() {
        let g = MetricField::new(vec![1, -1, -1, -1, -1], |x| {
            let mut m = vec![Jet2::constant(0.0); 25];
            for i in 0..5 {
                m[i * 5 + i] = Jet2::constant(if i == 0 { 1.0 } else { -1.0 });
            }
            m[4] = x[0] * 0.1;
            m[20] = x[0] * 0.1;
            m
        })
        .unwrap();
        let f = WeylFrame::new(g, ScalarField::constant(5, 0.0), 1.0).unwrap();
        let err = split_residuals(&f, &LapseModel::constant(5, 1.0), &P, SplitCase::General).unwrap_err();
        assert!(matches!(err, WeylError::UnsupportedFoliation { .. }));
    }

    #[test]
    fn spacetime_dependent_potential_is_not_extra_only() {
        let f = WeylFrame::new(warped(), ScalarField::linear(vec![1.0, 0.0, 0.0, 0.0, 1.0], 0.0), 1.0).unwrap();
        let err = split_residuals(&f, &warped_lapse(), &P, SplitCase::ExtraOnly).unwrap_err();
        assert!(matches!(err, WeylError::PotentialNotExtraOnly { .. }));
    }

    #[test]
    fn lapse_must_match_metric() {
        let f = WeylFrame::new(warped(), linear_l(1.0, 0.0), 1.0).unwrap();
        let err = split_residuals(&f, &LapseModel::constant(5, 3.0), &P, SplitCase::General).unwrap_err();
        assert!(matches!(err, WeylError::LapseMismatch { .. }));
        assert!(LapseModel::constant(5, -1.0).value_at(&P).is_err());
    }

    #[test]
    fn mismatched_potential_dimension() {
        let err = WeylFrame::new(warped(), ScalarField::constant(4, 0.0), 1.0).unwrap_err();
        assert_eq!(err, WeylError::DimensionMismatch { metric: 5, potential: 4 });
    }
}
