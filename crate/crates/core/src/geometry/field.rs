use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::{GeometryError, MAX_DIM};
use crate::numerics::Jet2;

type MetricFn = dyn Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync;
type ScalarFn = dyn Fn(&[Jet2]) -> Jet2 + Send + Sync;

/// Smooth map from coordinates to a symmetric metric matrix.
///
/// The closure receives one jet per coordinate and returns the `dim × dim`
/// components in row-major order. Evaluating on jets is what lets the engine
/// read off exact first and second partial derivatives.
#[derive(Clone)]
pub struct MetricField {
    dim: usize,
    signature: Vec<i8>,
    eval: Arc<MetricFn>,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("dim", &self.dim)
            .field("signature", &self.signature)
            .finish_non_exhaustive()
    }
}

impl MetricField {
    pub fn new<F>(signature: Vec<i8>, eval: F) -> Result<Self, GeometryError>
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        let dim = signature.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(GeometryError::UnsupportedDimension(dim));
        }
        if signature.iter().any(|s| *s != 1 && *s != -1) {
            return Err(GeometryError::InvalidSignature);
        }
        Ok(Self {
            dim,
            signature,
            eval: Arc::new(eval),
        })
    }

    /// Metric whose only non-zero components sit on the diagonal.
    pub fn diagonal<F>(signature: Vec<i8>, diag: F) -> Result<Self, GeometryError>
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        let n = signature.len();
        Self::new(signature, move |x| {
            let d = diag(x);
            let mut out = vec![Jet2::constant(0.0); n * n];
            for (i, v) in d.into_iter().enumerate().take(n) {
                out[i * n + i] = v;
            }
            out
        })
    }

    /// Flat metric `diag(+1, -1, ..., -1)`.
    pub fn minkowski(dim: usize) -> Result<Self, GeometryError> {
        let signature: Vec<i8> = (0..dim).map(|i| if i == 0 { 1 } else { -1 }).collect();
        let sig = signature.clone();
        Self::diagonal(signature, move |_| sig.iter().map(|s| Jet2::constant(*s as f64)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signature(&self) -> &[i8] {
        &self.signature
    }

    /// Raw jet evaluation; `x.len()` must equal `dim`.
    pub fn eval_jets(&self, x: &[Jet2]) -> Vec<Jet2> {
        (self.eval)(x)
    }

    /// Plain components at a point, checked for finiteness and symmetry.
    pub fn value_at(&self, point: &[f64]) -> Result<DMatrix<f64>, GeometryError> {
        self.check_point(point)?;
        let x: Vec<Jet2> = point.iter().map(|&v| Jet2::constant(v)).collect();
        let comps = self.eval_jets(&x);
        self.check_len(comps.len())?;
        let g = DMatrix::from_fn(self.dim, self.dim, |i, j| comps[i * self.dim + j].value);
        check_matrix(&g, point)?;
        Ok(g)
    }

    /// Verifies the eigenvalue signs at `point` agree with the declared signature.
    pub fn check_signature(&self, point: &[f64]) -> Result<(), GeometryError> {
        let g = self.value_at(point)?;
        let eig = g.symmetric_eigen();
        let mut found: Vec<i8> = eig.eigenvalues.iter().map(|v| if *v > 0.0 { 1 } else { -1 }).collect();
        let mut expected = self.signature.clone();
        found.sort_unstable();
        expected.sort_unstable();
        if eig.eigenvalues.iter().any(|v| *v == 0.0) || found != expected {
            return Err(GeometryError::SignatureMismatch { point: point.to_vec() });
        }
        Ok(())
    }

    pub(crate) fn check_point(&self, point: &[f64]) -> Result<(), GeometryError> {
        if point.len() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<(), GeometryError> {
        if len != self.dim * self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim * self.dim,
                found: len,
            });
        }
        Ok(())
    }
}

pub(crate) fn check_matrix(g: &DMatrix<f64>, point: &[f64]) -> Result<(), GeometryError> {
    if g.iter().any(|v| !v.is_finite()) {
        return Err(GeometryError::NonFinite { point: point.to_vec() });
    }
    let n = g.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (g[(i, j)], g[(j, i)]);
            if (a - b).abs() > 1e-14 * (1.0 + a.abs().max(b.abs())) {
                return Err(GeometryError::NonSymmetric { point: point.to_vec() });
            }
        }
    }
    Ok(())
}

/// Smooth scalar function of the coordinates.
#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    eval: Arc<ScalarFn>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField").field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl ScalarField {
    pub fn new<F>(dim: usize, eval: F) -> Self
    where
        F: Fn(&[Jet2]) -> Jet2 + Send + Sync + 'static,
    {
        Self {
            dim,
            eval: Arc::new(eval),
        }
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        Self::new(dim, move |_| Jet2::constant(value))
    }

    /// `offset + Σ slope_i x^i`.
    pub fn linear(slopes: Vec<f64>, offset: f64) -> Self {
        let dim = slopes.len();
        Self::new(dim, move |x| {
            slopes
                .iter()
                .zip(x)
                .fold(Jet2::constant(offset), |acc, (s, xi)| acc + *xi * *s)
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval_jets(&self, x: &[Jet2]) -> Jet2 {
        (self.eval)(x)
    }

    pub fn value_at(&self, point: &[f64]) -> f64 {
        let x: Vec<Jet2> = point.iter().map(|&v| Jet2::constant(v)).collect();
        self.eval_jets(&x).value
    }

    /// Pointwise sum.
    pub fn add(&self, other: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), other.clone());
        ScalarField::new(self.dim, move |x| a.eval_jets(x) + b.eval_jets(x))
    }

    /// Pointwise `s · self`.
    pub fn scaled(&self, s: f64) -> ScalarField {
        let a = self.clone();
        ScalarField::new(self.dim, move |x| a.eval_jets(x) * s)
    }
}

/// Seeds jets at `point` along the sum of the listed coordinate directions.
pub(crate) fn seeded(point: &[f64], dirs: &[usize]) -> Vec<Jet2> {
    point
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if dirs.contains(&i) {
                Jet2::variable(v)
            } else {
                Jet2::constant(v)
            }
        })
        .collect()
}

/// Value, gradient and Hessian of a vector-valued jet function at a point.
///
/// `first[c][k]` is `∂_c` of component `k`, `second[c][d][k]` is `∂_c∂_d`.
pub(crate) struct Partials {
    pub value: Vec<f64>,
    pub first: Vec<Vec<f64>>,
    pub second: Vec<Vec<Vec<f64>>>,
}

pub(crate) fn partials(point: &[f64], eval: impl Fn(&[Jet2]) -> Vec<Jet2>) -> Partials {
    let n = point.len();
    let mut value = Vec::new();
    let mut first = vec![Vec::new(); n];
    let mut pure = vec![Vec::new(); n];
    for c in 0..n {
        let out = eval(&seeded(point, &[c]));
        if c == 0 {
            value = out.iter().map(|j| j.value).collect();
        }
        first[c] = out.iter().map(|j| j.d1).collect();
        pure[c] = out.iter().map(|j| j.d2).collect();
    }
    if n == 0 {
        value = eval(&[]).iter().map(|j| j.value).collect();
    }
    let m = value.len();
    let mut second = vec![vec![vec![0.0; m]; n]; n];
    for c in 0..n {
        second[c][c] = pure[c].clone();
        for d in (c + 1)..n {
            let out = eval(&seeded(point, &[c, d]));
            for k in 0..m {
                let mixed = 0.5 * (out[k].d2 - pure[c][k] - pure[d][k]);
                second[c][d][k] = mixed;
                second[d][c][k] = mixed;
            }
        }
    }
    Partials { value, first, second }
}

/// Metric components with exact first and second partials at one point.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub point: Vec<f64>,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    /// `dg[c] = ∂_c g`
    pub dg: Vec<DMatrix<f64>>,
    /// `ddg[c][d] = ∂_c ∂_d g`
    pub ddg: Vec<Vec<DMatrix<f64>>>,
}

impl MetricJet {
    pub fn sample(metric: &MetricField, point: &[f64]) -> Result<Self, GeometryError> {
        metric.check_point(point)?;
        let n = metric.dim();
        let p = partials(point, |x| metric.eval_jets(x));
        metric.check_len(p.value.len())?;
        let to_mat = |v: &[f64]| DMatrix::from_fn(n, n, |i, j| v[i * n + j]);
        let g = to_mat(&p.value);
        check_matrix(&g, point)?;
        let dg: Vec<_> = p.first.iter().map(|v| to_mat(v)).collect();
        let ddg: Vec<Vec<_>> = p
            .second
            .iter()
            .map(|row| row.iter().map(|v| to_mat(v)).collect())
            .collect();
        if dg.iter().chain(ddg.iter().flatten()).any(|m| m.iter().any(|v| !v.is_finite())) {
            return Err(GeometryError::NonFinite { point: point.to_vec() });
        }
        let g_inv = invert(&g, point)?;
        Ok(Self {
            point: point.to_vec(),
            g,
            g_inv,
            dg,
            ddg,
        })
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// `∂_c g^{ab} = -g^{ad} ∂_c g_{de} g^{eb}`
    pub fn dg_inv(&self) -> Vec<DMatrix<f64>> {
        self.dg.iter().map(|d| -(&self.g_inv * d * &self.g_inv)).collect()
    }
}

pub(crate) fn invert(g: &DMatrix<f64>, point: &[f64]) -> Result<DMatrix<f64>, GeometryError> {
    let scale = g.row_iter().map(|r| r.norm()).product::<f64>();
    let det = g.determinant();
    if scale == 0.0 || det.abs() <= 1e-13 * scale {
        return Err(GeometryError::SingularMetric { point: point.to_vec() });
    }
    g.clone()
        .try_inverse()
        .ok_or_else(|| GeometryError::SingularMetric { point: point.to_vec() })
}

/// Scalar value with exact gradient and Hessian at one point.
#[derive(Clone, Debug)]
pub struct ScalarJet {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

impl ScalarJet {
    pub fn sample(field: &ScalarField, point: &[f64]) -> Result<Self, GeometryError> {
        if point.len() != field.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: field.dim(),
                found: point.len(),
            });
        }
        let n = point.len();
        let p = partials(point, |x| vec![field.eval_jets(x)]);
        let grad = DVector::from_fn(n, |c, _| p.first[c][0]);
        let hess = DMatrix::from_fn(n, n, |c, d| p.second[c][d][0]);
        if !p.value[0].is_finite() || grad.iter().chain(hess.iter()).any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite { point: point.to_vec() });
        }
        Ok(Self {
            value: p.value[0],
            grad,
            hess,
        })
    }
}
