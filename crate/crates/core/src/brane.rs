//! Four-dimensional quantities induced on the slice `l = l₀` of a block bulk
//! `g_αβ(x, l) dx^α dx^β − Φ²(x, l) dl²`.
//!
//! Derivatives along `l` are written `⋆`. The FRW reduction uses the mixed
//! components `ρ = T^t_t`, `P = −T^r_r`.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::cosmology::{frw_metric, CosmologyError, TimeFunction, WarpedModel};
use crate::geometry::{Connection, GeometryError, MetricField, MetricJet, ScalarField, ScalarJet};
use crate::numerics::Jet2;
use crate::report::{format_number, Equation, EquationResidual};
use crate::weyl::{coupling, LapseModel, WeylError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BraneError {
    #[error("induced geometry needs a five-dimensional bulk metric, got dimension {0}")]
    NotFiveDimensional(usize),
    #[error("lapse must be strictly positive, got {0}")]
    NonPositiveLapse(f64),
    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("effective energy density vanishes at t = {t}: equation of state undefined")]
    UndefinedOmega { t: f64 },
    #[error("equation-of-state paths disagree at t = {t}: ratio {ratio}, bracket {bracket}")]
    OmegaPathsDisagree { t: f64, ratio: f64, bracket: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Cosmology(#[from] CosmologyError),
}

/// The 4D metric `h_αβ(x) = g_αβ(x, l₀)` on one slice.
#[derive(Clone, Debug)]
pub struct InducedGeometry {
    pub metric4: MetricField,
    pub l0: f64,
}

impl InducedGeometry {
    /// Bulk coordinates of a point on the slice.
    pub fn bulk_point(&self, x: &[f64]) -> Vec<f64> {
        let mut p = x.to_vec();
        p.push(self.l0);
        p
    }
}

/// Restricts a five-dimensional metric to `l = l₀`.
///
/// Block form is checked wherever the induced data is evaluated, since the
/// bulk metric is generally singular somewhere.
pub fn induce_metric(metric5: &MetricField, l0: f64) -> Result<InducedGeometry, BraneError> {
    if metric5.dim() != 5 {
        return Err(BraneError::NotFiveDimensional(metric5.dim()));
    }
    let parent = metric5.clone();
    let metric4 = MetricField::new(metric5.signature()[..4].to_vec(), move |x| {
        let mut x5 = x.to_vec();
        x5.push(Jet2::constant(l0));
        let g = parent.eval_jets(&x5);
        (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| g[a * 5 + b]).collect()
    })?;
    Ok(InducedGeometry { metric4, l0 })
}

fn check_block(m: &MetricJet, lapse: f64, point: &[f64]) -> Result<(), BraneError> {
    let scale = m.g.amax();
    if (0..4).any(|a| m.g[(a, 4)].abs() > 1e-14 * scale || m.g[(4, a)].abs() > 1e-14 * scale) {
        return Err(WeylError::UnsupportedFoliation { point: point.to_vec() }.into());
    }
    let lapse_sq = lapse * lapse;
    if (lapse_sq + m.g[(4, 4)]).abs() > 1e-12 * lapse_sq {
        return Err(WeylError::LapseMismatch {
            lapse_sq,
            g_ll: m.g[(4, 4)],
            point: point.to_vec(),
        }
        .into());
    }
    Ok(())
}

/// Induced-matter stress-energy `T_αβ` at a 4D point of the slice `l = l₀`:
///
/// `Φ_{α||β}/Φ + (1/2Φ²){ (Φ⋆/Φ) g⋆ − g⋆⋆ + g^{λμ} g⋆_{αλ} g⋆_{βμ}
///  − ½ (g^{μν} g⋆_{μν}) g⋆ + ¼ g [g⋆^{μν} g⋆_{μν} + (g^{μν} g⋆_{μν})²] }`
///
/// with `||` the covariant derivative of the induced metric.
pub fn induced_stress_energy(
    metric5: &MetricField,
    lapse: &LapseModel,
    l0: f64,
    point: &[f64],
) -> Result<DMatrix<f64>, BraneError> {
    let induced = induce_metric(metric5, l0)?;
    let x5 = induced.bulk_point(point);
    let bulk = MetricJet::sample(metric5, &x5)?;
    let lapse_jet = ScalarJet::sample(&lapse.field, &x5)?;
    let big_phi = lapse_jet.value;
    if !(big_phi > 0.0) {
        return Err(BraneError::NonPositiveLapse(big_phi));
    }
    check_block(&bulk, big_phi, &x5)?;

    let slice = MetricJet::sample(&induced.metric4, point)?;
    let conn = Connection::levi_civita(&slice);
    let lapse4 = ScalarJet {
        value: big_phi,
        grad: lapse_jet.grad.rows(0, 4).into_owned(),
        hess: lapse_jet.hess.view((0, 0), (4, 4)).into_owned(),
    };
    let hessian = conn.hessian(&lapse4) / big_phi;

    let g = &slice.g;
    let g_inv = &slice.g_inv;
    let gs = bulk.dg[4].view((0, 0), (4, 4)).into_owned();
    let gss = bulk.ddg[4][4].view((0, 0), (4, 4)).into_owned();
    let gs_up = -(g_inv * &gs * g_inv);
    let trace = g_inv.component_mul(&gs).sum();
    let contracted = gs_up.component_mul(&gs).sum();
    let lapse_star = lapse_jet.grad[4];

    let bracket = &gs * (lapse_star / big_phi) - &gss + &gs * g_inv * &gs - &gs * (0.5 * trace)
        + g * (0.25 * (contracted + trace * trace));
    Ok(hessian + bracket / (2.0 * big_phi * big_phi))
}

/// `T_αβ = F_{,αβ} + F_{,α}F_{,β} − Γ^γ_αβ F_{,γ}` on `diag(1, −a², −a², −a²)` at `(t, 0, 0, 0)`.
pub fn induced_stress_energy_frw_tensor(f: &TimeFunction, a: &TimeFunction, t: f64) -> Result<DMatrix<f64>, BraneError> {
    if !(t > 0.0) {
        return Err(BraneError::NonPositiveTime(t));
    }
    let point = [t, 0.0, 0.0, 0.0];
    let slice = MetricJet::sample(&frw_metric(a), &point)?;
    let f = f.clone();
    let warp = ScalarJet::sample(&ScalarField::new(4, move |x| f.eval(x[0])), &point)?;
    let conn = Connection::levi_civita(&slice);
    Ok(conn.hessian(&warp) + &warp.grad * warp.grad.transpose())
}

/// `(ρ_im, P_im) = (T^t_t, −T^r_r)`, which reduce to `(F̈ + Ḟ², −HḞ)`.
pub fn induced_stress_energy_frw(f: &TimeFunction, a: &TimeFunction, t: f64) -> Result<(f64, f64), BraneError> {
    let lower = induced_stress_energy_frw_tensor(f, a, t)?;
    let slice = frw_metric(a).value_at(&[t, 0.0, 0.0, 0.0])?;
    let inv = slice.try_inverse().ok_or(GeometryError::SingularMetric {
        point: vec![t, 0.0, 0.0, 0.0],
    })?;
    let mixed = inv * lower;
    Ok((mixed[(0, 0)], -mixed[(1, 1)]))
}

/// `Λ = ¼(6 − 5ξ) Φ⁻² φ_l²` on the slice.
pub fn lambda_induced(lapse_value: f64, phi_l: f64, xi: f64) -> Result<f64, BraneError> {
    if !(lapse_value > 0.0) {
        return Err(BraneError::NonPositiveLapse(lapse_value));
    }
    Ok(0.25 * coupling(xi) * phi_l * phi_l / (lapse_value * lapse_value))
}

/// `Λ(t)` of a warped model on the slice `l = l₀`, from its lapse and potential.
pub fn model_lambda(model: &WarpedModel, l0: f64) -> impl Fn(f64) -> f64 + Send + Sync + Clone {
    let model = model.clone();
    let (lapse, potential) = (model.lapse(), model.potential());
    move |t| {
        let x = [t, 0.0, 0.0, 0.0, l0];
        let phi_l = ScalarJet::sample(&potential, &x).map_or(f64::NAN, |j| j.grad[4]);
        let big_phi = lapse.field.value_at(&x);
        lambda_induced(big_phi, phi_l, model.xi).unwrap_or(f64::NAN)
    }
}

/// Induced fluid on the brane at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BraneState {
    pub t: f64,
    pub a: f64,
    pub f: f64,
    pub rho_im: f64,
    pub p_im: f64,
    pub lambda: f64,
    pub rho_eff: f64,
    pub p_eff: f64,
    pub omega_eff: f64,
}

pub const BRANE_CSV_HEADER: &str = "t,a,F,rho_im,p_im,lambda,rho_eff,p_eff,omega_eff";

impl BraneState {
    pub fn csv_row(&self) -> String {
        [
            self.t,
            self.a,
            self.f,
            self.rho_im,
            self.p_im,
            self.lambda,
            self.rho_eff,
            self.p_eff,
            self.omega_eff,
        ]
        .iter()
        .map(|v| format_number(*v))
        .collect::<Vec<_>>()
        .join(",")
    }
}

pub fn brane_csv(states: &[BraneState]) -> String {
    let mut out = String::from(BRANE_CSV_HEADER);
    out.push('\n');
    for s in states {
        let _ = writeln!(out, "{}", s.csv_row());
    }
    out
}

/// Effective density `ρ_im + Λ`, pressure `P_im − Λ` and `ω = P_eff/ρ_eff`.
///
/// `ω` is also evaluated as `−[1 − (Ḟ² + F̈ − HḞ)/(F̈ + Ḟ² + Λ)]`; the two
/// forms must agree.
pub fn effective_fluid(
    f: &TimeFunction,
    a: &TimeFunction,
    lambda_fn: impl Fn(f64) -> f64,
    t: f64,
) -> Result<BraneState, BraneError> {
    let state = brane_state(f, a, lambda_fn, t)?;
    if state.omega_eff.is_nan() {
        return Err(BraneError::UndefinedOmega { t });
    }
    Ok(state)
}

/// Like [`effective_fluid`], but reports an undefined `ω` as NaN so a whole
/// time series can be tabulated.
pub fn brane_state(
    f: &TimeFunction,
    a: &TimeFunction,
    lambda_fn: impl Fn(f64) -> f64,
    t: f64,
) -> Result<BraneState, BraneError> {
    let (rho_im, p_im) = induced_stress_energy_frw(f, a, t)?;
    let lambda = lambda_fn(t);
    let rho_eff = rho_im + lambda;
    let p_eff = p_im - lambda;
    let (aj, fj) = (a.jet(t), f.jet(t));
    let mut state = BraneState {
        t,
        a: aj.value,
        f: fj.value,
        rho_im,
        p_im,
        lambda,
        rho_eff,
        p_eff,
        omega_eff: f64::NAN,
    };
    if !(rho_eff.abs() > 1e-12 * (rho_im.abs() + lambda.abs())) {
        return Ok(state);
    }
    let ratio = p_eff / rho_eff;
    let h = aj.d1 / aj.value;
    let kinetic = fj.d1 * fj.d1 + fj.d2;
    let bracket = -(1.0 - (kinetic - h * fj.d1) / (fj.d2 + fj.d1 * fj.d1 + lambda));
    if !((ratio - bracket).abs() <= 1e-10 * (1.0 + ratio.abs())) {
        return Err(BraneError::OmegaPathsDisagree { t, ratio, bracket });
    }
    state.omega_eff = ratio;
    Ok(state)
}

/// Residuals of `3H² = ρ_im + Λ` and `2ä/a + H² = −(P_im − Λ)`.
pub fn brane_residuals(
    f: &TimeFunction,
    a: &TimeFunction,
    lambda_fn: impl Fn(f64) -> f64,
    t: f64,
) -> Result<Vec<EquationResidual>, BraneError> {
    let (rho_im, p_im) = induced_stress_energy_frw(f, a, t)?;
    let lambda = lambda_fn(t);
    let aj = a.jet(t);
    let h = aj.d1 / aj.value;
    let acc = aj.d2 / aj.value;
    Ok(vec![
        EquationResidual::scalar(Equation::BraneEnergy, 3.0 * h * h - rho_im - lambda),
        EquationResidual::scalar(Equation::BranePressure, 2.0 * acc + h * h + (p_im - lambda)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosmology::{gamma_exponent, PowerLawScenario};

    fn static_bulk(g_tt: impl Fn(Jet2) -> Jet2 + Send + Sync + 'static) -> MetricField {
        MetricField::diagonal(vec![1, -1, -1, -1, -1], move |x| {
            vec![g_tt(x[4]), -Jet2::constant(1.0), -Jet2::constant(1.0), -Jet2::constant(1.0), -Jet2::constant(1.0)]
        })
        .unwrap()
    }

    #[test]
    fn minkowski_slice() {
        let ind = induce_metric(&MetricField::minkowski(5).unwrap(), 0.3).unwrap();
        let h = ind.metric4.value_at(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(h, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, -1.0, -1.0])));
    }

    #[test]
    fn slice_evaluation() {
        let ind = induce_metric(&static_bulk(|l| l * l + 1.0), 2.0).unwrap();
        assert_eq!(ind.metric4.value_at(&[0.0; 4]).unwrap()[(0, 0)], 5.0);
    }

    #[test]
    fn rejects_four_dimensional_parent() {
        assert_eq!(
            induce_metric(&MetricField::minkowski(4).unwrap(), 0.0).unwrap_err(),
            BraneError::NotFiveDimensional(4)
        );
    }

    #[test]
    fn warped_slice_is_frw() {
        let model = PowerLawScenario::default().model().unwrap();
        let ind = induce_metric(&model.metric5(), 0.7).unwrap();
        let t = 3.0;
        let h = ind.metric4.value_at(&[t, 0.0, 0.0, 0.0]).unwrap();
        let frw = model.frw_metric().value_at(&[t, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(h, frw);
    }

    #[test]
    fn l_independent_metric_with_unit_lapse() {
        let metric = MetricField::minkowski(5).unwrap();
        let t = induced_stress_energy(&metric, &LapseModel::constant(5, 1.0), 0.0, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(t.amax(), 0.0);
    }

    #[test]
    fn exponential_warp_fixture() {
        // g_αβ = e^{2kl} η, Φ = 1: the bracket is 0 − 4k² + 4k² − 8k² + 12k² (times g),
        // so T = 2k² e^{2kl₀} η.
        let k = 0.3;
        let l0 = 0.5;
        let metric = MetricField::diagonal(vec![1, -1, -1, -1, -1], move |x| {
            let w = (x[4] * (2.0 * k)).exp();
            vec![w, -w, -w, -w, -Jet2::constant(1.0)]
        })
        .unwrap();
        let t = induced_stress_energy(&metric, &LapseModel::constant(5, 1.0), l0, &[0.0; 4]).unwrap();
        let expected = 2.0 * k * k * (2.0 * k * l0).exp();
        for a in 0..4 {
            let eta = if a == 0 { 1.0 } else { -1.0 };
            for b in 0..4 {
                let want = if a == b { expected * eta } else { 0.0 };
                assert!((t[(a, b)] - want).abs() < 1e-14, "{a}{b}: {}", t[(a, b)]);
            }
        }
    }

    #[test]
    fn general_path_matches_frw_path() {
        let model = PowerLawScenario::default().model().unwrap();
        let t = 2.5;
        let general = induced_stress_energy(&model.metric5(), &model.lapse(), 0.0, &[t, 0.0, 0.0, 0.0]).unwrap();
        let frw = induced_stress_energy_frw_tensor(&model.f, &model.a, t).unwrap();
        assert!((general - frw).amax() < 1e-12);
    }

    #[test]
    fn lapse_mismatch_is_rejected() {
        let metric = MetricField::minkowski(5).unwrap();
        let err = induced_stress_energy(&metric, &LapseModel::constant(5, 2.0), 0.0, &[0.0; 4]).unwrap_err();
        assert!(matches!(err, BraneError::Weyl(WeylError::LapseMismatch { .. })));
    }

    #[test]
    fn frw_density_and_pressure() {
        let a = TimeFunction::power_law(1.0, 0.5);
        assert_eq!(induced_stress_energy_frw(&TimeFunction::constant(0.2), &a, 1.5).unwrap(), (0.0, 0.0));

        let (rho, p) = induced_stress_energy_frw(&TimeFunction::log_power(1.0, 0.5), &a, 1.0).unwrap();
        assert!((rho + 0.25).abs() < 1e-15 && (p + 0.25).abs() < 1e-15);

        let pw = 0.45;
        let g = gamma_exponent(pw).unwrap();
        let (rho, p) =
            induced_stress_energy_frw(&TimeFunction::log_power(1.3, g), &TimeFunction::power_law(1.0, pw), 2.0).unwrap();
        assert!((rho - (g * g - g) / 4.0).abs() < 1e-15);
        assert!((p + pw * g / 4.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_induced(1.0, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(lambda_induced(3.0, 7.0, 1.2).unwrap(), 0.0);
        assert_eq!(lambda_induced(1.0, 2.0, 1.0).unwrap(), 1.0);
        assert_eq!(lambda_induced(0.0, 2.0, 1.0).unwrap_err(), BraneError::NonPositiveLapse(0.0));
    }

    #[test]
    fn model_lambda_matches_power_law() {
        let s = PowerLawScenario { c1: 1.7, ..PowerLawScenario::default() };
        let lam = model_lambda(&s.model().unwrap(), 0.4);
        let closed = crate::cosmology::lambda_powerlaw(&s).unwrap();
        for t in [1.0, 5.0, 60.0] {
            assert!((lam(t) / closed.at(t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn de_sitter_brane() {
        let model = PowerLawScenario::with_p(5.0 / 9.0).model().unwrap();
        let lam = model_lambda(&model, 0.0);
        for t in [1.0, 10.0, 100.0] {
            let s = effective_fluid(&model.f, &model.a, &lam, t).unwrap();
            assert!((s.omega_eff + 1.0).abs() < 1e-12, "{s:?}");
        }
    }

    #[test]
    fn stiff_brane_at_critical_coupling() {
        let s = PowerLawScenario { xi: 1.2, ..PowerLawScenario::with_p(0.5) };
        let model = s.model().unwrap();
        let st = effective_fluid(&model.f, &model.a, model_lambda(&model, 0.0), 3.0).unwrap();
        assert_eq!(st.lambda, 0.0);
        assert!((st.omega_eff - 1.0).abs() < 1e-14);
    }

    #[test]
    fn vacuum_energy() {
        let st = effective_fluid(&TimeFunction::constant(0.0), &TimeFunction::power_law(1.0, 0.5), |_| 0.8, 2.0).unwrap();
        assert_eq!((st.rho_eff, st.p_eff, st.omega_eff), (0.8, -0.8, -1.0));
    }

    #[test]
    fn vanishing_density_is_an_error() {
        let err = effective_fluid(&TimeFunction::constant(0.0), &TimeFunction::constant(1.0), |_| 0.0, 1.0).unwrap_err();
        assert_eq!(err, BraneError::UndefinedOmega { t: 1.0 });
    }

    #[test]
    fn tabulated_state_marks_undefined_omega() {
        let st = brane_state(&TimeFunction::constant(0.0), &TimeFunction::constant(1.0), |_| 0.0, 1.0).unwrap();
        assert!(st.omega_eff.is_nan());
        assert_eq!(st.rho_eff, 0.0);
    }

    #[test]
    fn static_empty_brane() {
        for r in brane_residuals(&TimeFunction::constant(0.3), &TimeFunction::constant(2.0), |_| 0.0, 4.0).unwrap() {
            assert_eq!(r.value, 0.0);
        }
    }

    #[test]
    fn csv_header_and_row() {
        let model = PowerLawScenario::default().model().unwrap();
        let st = effective_fluid(&model.f, &model.a, model_lambda(&model, 0.0), 2.0).unwrap();
        let csv = brane_csv(&[st]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(BRANE_CSV_HEADER));
        assert_eq!(lines.next().unwrap().split(',').count(), 9);
    }
}
