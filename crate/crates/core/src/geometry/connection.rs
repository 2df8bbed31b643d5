use nalgebra::{DMatrix, DVector};

use super::field::{MetricJet, ScalarJet};
use super::tensor::{Tensor3, Tensor4};

/// Connection coefficients `Γ^a_{bc}` and their partials `∂_e Γ^a_{bc}` at a point.
#[derive(Clone, Debug)]
pub struct Connection {
    pub gamma: Tensor3,
    /// Indexed `(e, a, b, c)`.
    pub dgamma: Tensor4,
}

impl Connection {
    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    /// Levi-Civita connection of the sampled metric.
    pub fn levi_civita(m: &MetricJet) -> Self {
        let n = m.dim();
        let ginv = &m.g_inv;
        let dginv = m.dg_inv();

        // Γ_{dbc} = ½(∂_b g_dc + ∂_c g_db − ∂_d g_bc)
        let lowered = Tensor3::from_fn(n, |d, b, c| 0.5 * (m.dg[b][(d, c)] + m.dg[c][(d, b)] - m.dg[d][(b, c)]));
        let gamma = Tensor3::from_fn(n, |a, b, c| (0..n).map(|d| ginv[(a, d)] * lowered[(d, b, c)]).sum());

        let mut dgamma = Tensor4::zeros(n);
        for e in 0..n {
            let dd = &m.ddg[e];
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let mut acc = 0.0;
                        for d in 0..n {
                            let dlow = 0.5 * (dd[b][(d, c)] + dd[c][(d, b)] - dd[d][(b, c)]);
                            acc += dginv[e][(a, d)] * lowered[(d, b, c)] + ginv[(a, d)] * dlow;
                        }
                        dgamma[(e, a, b, c)] = acc;
                    }
                }
            }
        }
        Self { gamma, dgamma }
    }

    /// Integrable Weyl connection `Γ = {} − ½(φ_b δ^a_c + φ_c δ^a_b − g_bc φ^a)`.
    ///
    /// Built as Levi-Civita plus a correction, so a constant potential leaves
    /// every coefficient bit-identical to the Levi-Civita result.
    pub fn weyl(m: &MetricJet, phi: &ScalarJet) -> Self {
        let mut conn = Self::levi_civita(m);
        let n = m.dim();
        let ginv = &m.g_inv;
        let dginv = m.dg_inv();
        let grad = &phi.grad;
        let up: DVector<f64> = ginv * grad;
        // ∂_e φ^a = ∂_e g^{ad} φ_d + g^{ad} ∂_e φ_d
        let dup: Vec<DVector<f64>> = (0..n)
            .map(|e| &dginv[e] * grad + ginv * phi.hess.column(e))
            .collect();
        let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };

        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let corr = -0.5 * (grad[b] * delta(a, c) + grad[c] * delta(a, b) - m.g[(b, c)] * up[a]);
                    conn.gamma[(a, b, c)] += corr;
                    for e in 0..n {
                        let dcorr = -0.5
                            * (phi.hess[(e, b)] * delta(a, c) + phi.hess[(e, c)] * delta(a, b)
                                - m.dg[e][(b, c)] * up[a]
                                - m.g[(b, c)] * dup[e][a]);
                        conn.dgamma[(e, a, b, c)] += dcorr;
                    }
                }
            }
        }
        conn
    }

    /// `R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}`
    pub fn riemann(&self) -> Tensor4 {
        let n = self.dim();
        let g = &self.gamma;
        let dg = &self.dgamma;
        let mut r = Tensor4::zeros(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut v = dg[(c, a, d, b)] - dg[(d, a, c, b)];
                        for e in 0..n {
                            v += g[(a, c, e)] * g[(e, d, b)] - g[(a, d, e)] * g[(e, c, b)];
                        }
                        r[(a, b, c, d)] = v;
                    }
                }
            }
        }
        r
    }

    /// `∇_b ∇_a φ = ∂_a∂_b φ − Γ^c_{ab} φ_c`
    pub fn hessian(&self, phi: &ScalarJet) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |a, b| {
            phi.hess[(a, b)] - (0..n).map(|c| self.gamma[(c, a, b)] * phi.grad[c]).sum::<f64>()
        })
    }

    /// Covariant derivative of the metric, `∇_a g_{bc}`, indexed `(a, b, c)`.
    pub fn metric_derivative(&self, m: &MetricJet) -> Tensor3 {
        let n = self.dim();
        Tensor3::from_fn(n, |a, b, c| {
            let mut v = m.dg[a][(b, c)];
            for d in 0..n {
                v -= self.gamma[(d, a, b)] * m.g[(d, c)] + self.gamma[(d, a, c)] * m.g[(b, d)];
            }
            v
        })
    }
}
