//! Metric → connection → curvature engine.
//!
//! Works in any dimension up to five and any signature. Curvature is built
//! from exact jet derivatives of the metric, in two flavours: Levi-Civita and
//! the integrable Weyl connection generated by a scalar potential.
//!
//! Conventions:
//!
//! * `R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}`
//! * `R_{bd} = R^a_{bad}` (first index against third), never symmetrized
//! * `G_{ab} = R_{ab} − ½ R g_{ab}`
//!
//! With signature `(+,−,−,−)` this gives `G_tt = +3H²` for flat FRW.

mod connection;
mod field;
mod tensor;

pub use connection::Connection;
pub use field::{MetricField, MetricJet, ScalarField, ScalarJet};
pub use tensor::{Tensor3, Tensor4};

use nalgebra::DMatrix;
use thiserror::Error;

pub const MAX_DIM: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("dimension {0} not supported (1..=5)")]
    UnsupportedDimension(usize),
    #[error("signature entries must be +1 or -1")]
    InvalidSignature,
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("metric is singular at {point:?}")]
    SingularMetric { point: Vec<f64> },
    #[error("metric is not symmetric at {point:?}")]
    NonSymmetric { point: Vec<f64> },
    #[error("non-finite metric value or derivative at {point:?}")]
    NonFinite { point: Vec<f64> },
    #[error("metric eigenvalue signs do not match the declared signature at {point:?}")]
    SignatureMismatch { point: Vec<f64> },
}

/// Overall sign applied to the Riemann tensor.
///
/// Only [`RiemannSign::Standard`] matches the documented convention; the
/// reversed variant exists so convention checks can be exercised against a
/// deliberately wrong engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RiemannSign {
    #[default]
    Standard,
    Reversed,
}

/// Connection and curvature data at a single point.
#[derive(Clone, Debug)]
pub struct CurvatureBundle {
    pub point: Vec<f64>,
    pub metric: DMatrix<f64>,
    pub metric_inv: DMatrix<f64>,
    pub gamma: Tensor3,
    pub riemann: Tensor4,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
    pub einstein: DMatrix<f64>,
}

impl CurvatureBundle {
    pub fn from_connection(m: &MetricJet, conn: &Connection, sign: RiemannSign) -> Self {
        let n = m.dim();
        let mut riemann = conn.riemann();
        if sign == RiemannSign::Reversed {
            riemann.scale(-1.0);
        }
        let ricci = DMatrix::from_fn(n, n, |b, d| (0..n).map(|a| riemann[(a, b, a, d)]).sum());
        let scalar = m.g_inv.component_mul(&ricci).sum();
        let einstein = &ricci - &m.g * (0.5 * scalar);
        Self {
            point: m.point.clone(),
            metric: m.g.clone(),
            metric_inv: m.g_inv.clone(),
            gamma: conn.gamma.clone(),
            riemann,
            ricci,
            scalar,
            einstein,
        }
    }

    /// `G^a_b = g^{ac} G_{cb}`
    pub fn einstein_mixed(&self) -> DMatrix<f64> {
        &self.metric_inv * &self.einstein
    }

    /// `G^{ab} = g^{ac} g^{bd} G_{cd}`
    pub fn einstein_upper(&self) -> DMatrix<f64> {
        &self.metric_inv * &self.einstein * &self.metric_inv
    }

    /// True when every curvature entry is exactly zero or within `tol`.
    pub fn is_flat(&self, tol: f64) -> bool {
        self.riemann.max_abs() <= tol
            && self.ricci.amax() <= tol
            && self.scalar.abs() <= tol
            && self.einstein.amax() <= tol
    }
}

/// Levi-Civita symbols `Γ^a_{bc} = ½ g^{ad}(∂_b g_dc + ∂_c g_db − ∂_d g_bc)`.
pub fn christoffel(metric: &MetricField, point: &[f64]) -> Result<Tensor3, GeometryError> {
    let m = MetricJet::sample(metric, point)?;
    Ok(Connection::levi_civita(&m).gamma)
}

/// Riemannian curvature of `metric` at `point`.
pub fn curvature(metric: &MetricField, point: &[f64]) -> Result<CurvatureBundle, GeometryError> {
    curvature_with(metric, point, RiemannSign::Standard)
}

pub fn curvature_with(metric: &MetricField, point: &[f64], sign: RiemannSign) -> Result<CurvatureBundle, GeometryError> {
    let m = MetricJet::sample(metric, point)?;
    let conn = Connection::levi_civita(&m);
    Ok(CurvatureBundle::from_connection(&m, &conn, sign))
}

/// Coefficients of the integrable Weyl connection generated by `phi`.
pub fn weyl_connection(metric: &MetricField, phi: &ScalarField, point: &[f64]) -> Result<Tensor3, GeometryError> {
    let m = MetricJet::sample(metric, point)?;
    let p = ScalarJet::sample(phi, point)?;
    Ok(Connection::weyl(&m, &p).gamma)
}

/// Curvature of the Weyl connection; Ricci by first-index contraction, scalar by metric trace.
pub fn weyl_curvature(metric: &MetricField, phi: &ScalarField, point: &[f64]) -> Result<CurvatureBundle, GeometryError> {
    weyl_curvature_with(metric, phi, point, RiemannSign::Standard)
}

pub fn weyl_curvature_with(
    metric: &MetricField,
    phi: &ScalarField,
    point: &[f64],
    sign: RiemannSign,
) -> Result<CurvatureBundle, GeometryError> {
    let m = MetricJet::sample(metric, point)?;
    let p = ScalarJet::sample(phi, point)?;
    let conn = Connection::weyl(&m, &p);
    Ok(CurvatureBundle::from_connection(&m, &conn, sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Jet2;

    const T: usize = 0;
    const X: usize = 1;
    const L: usize = 4;

    fn frw(p: f64) -> MetricField {
        MetricField::diagonal(vec![1, -1, -1, -1], move |x| {
            let a2 = x[0].powf(2.0 * p);
            vec![Jet2::constant(1.0), -a2, -a2, -a2]
        })
        .unwrap()
    }

    fn warped(p: f64, gamma: f64) -> MetricField {
        MetricField::diagonal(vec![1, -1, -1, -1, -1], move |x| {
            let a2 = x[0].powf(2.0 * p);
            let e2f = x[0].powf(2.0 * gamma);
            vec![Jet2::constant(1.0), -a2, -a2, -a2, -e2f]
        })
        .unwrap()
    }

    #[test]
    fn minkowski_christoffel_vanishes() {
        let g = MetricField::minkowski(5).unwrap();
        let gam = christoffel(&g, &[0.3, -1.0, 2.0, 0.1, 7.0]).unwrap();
        assert_eq!(gam.max_abs(), 0.0);
    }

    #[test]
    fn frw_christoffel_t_xx() {
        let gam = christoffel(&frw(0.5), &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((gam[(T, X, X)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn warped_christoffel_t_ll() {
        // F = ln t: e^{2F} = t², Γ^t_ll = Ḟ e^{2F} = t = 2 at t = 2
        let g = MetricField::diagonal(vec![1, -1, -1, -1, -1], |x| {
            let f = x[0].ln();
            vec![Jet2::constant(1.0), -Jet2::constant(1.0), -Jet2::constant(1.0), -Jet2::constant(1.0), -(f * 2.0).exp()]
        })
        .unwrap();
        let gam = christoffel(&g, &[2.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((gam[(T, L, L)] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn minkowski_is_flat_in_every_dimension() {
        for n in 1..=5 {
            let g = MetricField::minkowski(n).unwrap();
            let point: Vec<f64> = (0..n).map(|i| i as f64 * 0.7 - 1.0).collect();
            assert!(curvature(&g, &point).unwrap().is_flat(0.0));
        }
    }

    #[test]
    fn frw_energy_density_sign() {
        // a = t^{2/3}: H = 2/3 at t = 1, G_tt = 3H² = 4/3
        let c = curvature(&frw(2.0 / 3.0), &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((c.einstein[(T, T)] - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn warped_einstein_tt() {
        let c = curvature(&warped(0.5, 0.5), &[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((c.einstein[(T, T)] - 1.5).abs() < 1e-12);
        for alpha in 0..4 {
            assert!(c.einstein[(alpha, L)].abs() <= 1e-12);
        }
    }

    #[test]
    fn reversed_sign_flips_einstein() {
        let g = frw(2.0 / 3.0);
        let p = [1.3, 0.0, 0.0, 0.0];
        let a = curvature(&g, &p).unwrap();
        let b = curvature_with(&g, &p, RiemannSign::Reversed).unwrap();
        assert!((a.einstein[(T, T)] + b.einstein[(T, T)]).abs() < 1e-15);
    }

    #[test]
    fn weyl_connection_on_minkowski() {
        let g = MetricField::minkowski(5).unwrap();
        let phi = ScalarField::linear(vec![0.0, 0.0, 0.0, 0.0, 1.0], 0.0);
        let gam = weyl_connection(&g, &phi, &[0.0, 0.0, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(gam[(T, T, L)], -0.5);
        assert_eq!(gam[(L, T, T)], -0.5);
    }

    #[test]
    fn constant_potential_reduces_to_levi_civita() {
        let g = warped(0.45, 0.7);
        let phi = ScalarField::constant(5, 3.0);
        let p = [2.5, 0.1, 0.2, 0.3, 0.4];
        assert_eq!(weyl_connection(&g, &phi, &p).unwrap(), christoffel(&g, &p).unwrap());
        let w = weyl_curvature(&g, &phi, &p).unwrap();
        let r = curvature(&g, &p).unwrap();
        assert_eq!(w.riemann, r.riemann);
        assert_eq!(w.einstein, r.einstein);
    }

    #[test]
    fn zero_potential_on_minkowski_is_flat() {
        let g = MetricField::minkowski(5).unwrap();
        let phi = ScalarField::constant(5, 0.0);
        assert!(weyl_curvature(&g, &phi, &[1.0; 5]).unwrap().is_flat(0.0));
    }

    #[test]
    fn singular_metric_is_rejected() {
        let g = MetricField::diagonal(vec![1, -1], |x| vec![x[0], -Jet2::constant(1.0)]).unwrap();
        assert!(matches!(curvature(&g, &[0.0, 0.0]), Err(GeometryError::SingularMetric { .. })));
    }

    #[test]
    fn point_dimension_is_checked() {
        let g = MetricField::minkowski(4).unwrap();
        assert!(matches!(christoffel(&g, &[0.0; 5]), Err(GeometryError::DimensionMismatch { .. })));
    }

    #[test]
    fn oversized_dimension_is_rejected() {
        assert_eq!(MetricField::minkowski(6).unwrap_err(), GeometryError::UnsupportedDimension(6));
    }

    #[test]
    fn signature_check() {
        let g = frw(0.5);
        g.check_signature(&[2.0, 0.0, 0.0, 0.0]).unwrap();
        let wrong = MetricField::diagonal(vec![1, -1, -1, -1], |_| vec![Jet2::constant(1.0); 4]).unwrap();
        assert!(wrong.check_signature(&[0.0; 4]).is_err());
    }
}
