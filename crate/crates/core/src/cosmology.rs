//! Warped five-dimensional cosmology `dt² − a²(t) dr² − e^{2F(t)} dl²` with a
//! Weyl potential linear in the extra coordinate, and its power-law family.
//!
//! For `a = a₀(t/t₀)^p` the combination `u = a e^F` obeys the Euler equation
//! `ü + 4p(2p−1)u/t² = 0`, with indicial exponents `½ ± ½√D`,
//! `D(p) = 1 − 32p² + 16p`. Choosing the growing branch alone gives
//! `F = ln(B₁ t^γ)` with `γ = ½ − p + ½√D`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::geometry::{GeometryError, MetricField, ScalarField};
use crate::numerics::{integrate_ivp_with, IvpOptions, Jet2, NumericsError, Trajectory};
use crate::report::{Equation, EquationResidual};
use crate::weyl::{coupling, LapseModel, WeylError, WeylFrame};

/// `|D| ≤ DISCRIMINANT_TOL` is treated as a repeated root.
pub const DISCRIMINANT_TOL: f64 = 1e-12;

/// Upper end of the real-exponent window, `¼ + √6/8`.
pub fn p_max_real() -> f64 {
    0.25 + 6f64.sqrt() / 8.0
}

pub const P_DE_SITTER: f64 = 5.0 / 9.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CosmologyError {
    #[error("complex exponents: p = {p} outside admissible range (D = {discriminant}); p must range in the interval 0 < p <= 1/4 + sqrt(6)/8")]
    ComplexExponents { p: f64, discriminant: f64 },
    #[error("B1 must be non-zero")]
    ZeroB1,
    #[error("warp factor B1 = {0} must be positive to take its logarithm")]
    NonPositiveWarp(f64),
    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("effective equation of state is singular at t = {t}")]
    SingularState { t: f64 },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// Smooth function of cosmic time, evaluated on jets.
#[derive(Clone)]
pub struct TimeFunction(Arc<dyn Fn(Jet2) -> Jet2 + Send + Sync>);

impl fmt::Debug for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("TimeFunction(..)")
    }
}

impl TimeFunction {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(Jet2) -> Jet2 + Send + Sync + 'static,
    {
        Self(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| Jet2::constant(c))
    }

    /// `coefficient · t^exponent`
    pub fn power_law(coefficient: f64, exponent: f64) -> Self {
        Self::new(move |t| t.powf(exponent) * coefficient)
    }

    /// `ln(b) + γ ln t`, i.e. `ln(b t^γ)`.
    pub fn log_power(b: f64, gamma: f64) -> Self {
        let lb = b.ln();
        Self::new(move |t| t.ln() * gamma + lb)
    }

    pub fn eval(&self, t: Jet2) -> Jet2 {
        (self.0)(t)
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(Jet2::constant(t)).value
    }

    /// Value with first and second time derivatives.
    pub fn jet(&self, t: f64) -> Jet2 {
        self.eval(Jet2::variable(t))
    }
}

/// Time derivatives of the scale factor and warp exponent at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub t: f64,
    pub a: Jet2,
    pub f: Jet2,
}

impl Kinematics {
    pub fn hubble(&self) -> f64 {
        self.a.d1 / self.a.value
    }

    /// `ä/a`
    pub fn acceleration(&self) -> f64 {
        self.a.d2 / self.a.value
    }
}

/// The warped bulk `diag(1, −a², −a², −a², −e^{2F})` with `φ = C₁ l + C₂`.
#[derive(Clone, Debug)]
pub struct WarpedModel {
    pub a: TimeFunction,
    pub f: TimeFunction,
    pub c1: f64,
    pub c2: f64,
    pub xi: f64,
}

impl WarpedModel {
    pub fn new(a: TimeFunction, f: TimeFunction, c1: f64, c2: f64, xi: f64) -> Self {
        Self { a, f, c1, c2, xi }
    }

    pub fn kinematics(&self, t: f64) -> Kinematics {
        Kinematics {
            t,
            a: self.a.jet(t),
            f: self.f.jet(t),
        }
    }

    /// Coordinates `(t, x¹, x², x³, l)`.
    pub fn metric5(&self) -> MetricField {
        let (a, f) = (self.a.clone(), self.f.clone());
        MetricField::diagonal(vec![1, -1, -1, -1, -1], move |x| {
            let av = a.eval(x[0]);
            let a2 = av * av;
            vec![Jet2::constant(1.0), -a2, -a2, -a2, -(f.eval(x[0]) * 2.0).exp()]
        })
        .expect("fixed five-dimensional signature")
    }

    /// Flat FRW slice `diag(1, −a², −a², −a²)`.
    pub fn frw_metric(&self) -> MetricField {
        frw_metric(&self.a)
    }

    /// `φ = C₁ l + C₂`
    pub fn potential(&self) -> ScalarField {
        ScalarField::linear(vec![0.0, 0.0, 0.0, 0.0, self.c1], self.c2)
    }

    /// `Φ = e^{F(t)}`
    pub fn lapse(&self) -> LapseModel {
        let f = self.f.clone();
        LapseModel::new(ScalarField::new(5, move |x| f.eval(x[0]).exp()))
    }

    pub fn frame(&self) -> WeylFrame {
        WeylFrame::new(self.metric5(), self.potential(), self.xi).expect("dimensions agree by construction")
    }

    /// `¼(6 − 5ξ) C₁² e^{−2F}`
    pub fn weyl_source(&self, t: f64) -> f64 {
        0.25 * coupling(self.xi) * self.c1 * self.c1 * (-2.0 * self.f.value(t)).exp()
    }
}

pub fn frw_metric(a: &TimeFunction) -> MetricField {
    let a = a.clone();
    MetricField::diagonal(vec![1, -1, -1, -1], move |x| {
        let av = a.eval(x[0]);
        let a2 = av * av;
        vec![Jet2::constant(1.0), -a2, -a2, -a2]
    })
    .expect("fixed four-dimensional signature")
}

/// `D(p) = 1 − 32p² + 16p`
pub fn discriminant(p: f64) -> f64 {
    1.0 - 32.0 * p * p + 16.0 * p
}

fn checked_sqrt_discriminant(p: f64) -> Result<f64, CosmologyError> {
    let d = discriminant(p);
    if d < -DISCRIMINANT_TOL || d.is_nan() {
        return Err(CosmologyError::ComplexExponents { p, discriminant: d });
    }
    Ok(d.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    /// Growing solution, `A₂ = 0`.
    #[default]
    Plus,
    /// Decaying solution, `A₁ = 0`.
    Minus,
}

/// `γ = ½ − p + ½√D(p)` on the growing branch.
pub fn gamma_exponent(p: f64) -> Result<f64, CosmologyError> {
    gamma_exponent_branch(p, Branch::Plus)
}

pub fn gamma_exponent_branch(p: f64, branch: Branch) -> Result<f64, CosmologyError> {
    let s = checked_sqrt_discriminant(p)?;
    Ok(match branch {
        Branch::Plus => (0.5 - p) + 0.5 * s,
        Branch::Minus => (0.5 - p) - 0.5 * s,
    })
}

/// Parameter-window classification for the power-law family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Admissibility {
    /// `D(p) ≥ 0` and `p > 0`.
    pub real_gamma: bool,
    /// `2 − 2γ > 0`, the decaying-correction condition (equivalent to `p > 1/3`).
    pub omega_decreasing: bool,
    pub admissible_window: bool,
    /// `p = 5/9` within `1e-12`.
    pub de_sitter: bool,
}

pub fn admissibility(p: f64) -> Admissibility {
    let gamma = gamma_exponent(p).ok();
    let real_gamma = gamma.is_some() && p > 0.0;
    let omega_decreasing = gamma.is_some_and(|g| 2.0 - 2.0 * g > 0.0);
    Admissibility {
        real_gamma,
        omega_decreasing,
        admissible_window: real_gamma && omega_decreasing,
        de_sitter: (p - P_DE_SITTER).abs() <= 1e-12,
    }
}

/// Constants of the power-law example.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawScenario {
    pub p: f64,
    pub a0: f64,
    pub t0: f64,
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub c1: f64,
    pub c2: f64,
    pub xi: f64,
}

impl Default for PowerLawScenario {
    fn default() -> Self {
        Self::new(0.45, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0)
    }
}

impl PowerLawScenario {
    /// `B₁ = A₁ t₀^p / a₀` is derived from the other constants.
    #[allow(clippy::too_many_arguments)]
    pub fn new(p: f64, a0: f64, t0: f64, a1: f64, a2: f64, c1: f64, c2: f64, xi: f64) -> Self {
        Self {
            p,
            a0,
            t0,
            a1,
            a2,
            b1: a1 * t0.powf(p) / a0,
            c1,
            c2,
            xi,
        }
    }

    /// Default constants with a different exponent.
    pub fn with_p(p: f64) -> Self {
        Self {
            p,
            ..Self::default()
        }
        .rederive()
    }

    /// Recomputes `B₁` after fields were edited.
    pub fn rederive(self) -> Self {
        Self::new(self.p, self.a0, self.t0, self.a1, self.a2, self.c1, self.c2, self.xi)
    }

    pub fn discriminant(&self) -> f64 {
        discriminant(self.p)
    }

    pub fn gamma(&self) -> Result<f64, CosmologyError> {
        gamma_exponent(self.p)
    }

    /// `a(t) = a₀ (t/t₀)^p`
    pub fn scale_factor(&self) -> TimeFunction {
        TimeFunction::power_law(self.a0 * self.t0.powf(-self.p), self.p)
    }

    /// `F = ln(u/a)`; reduces to `ln(B₁ t^γ)` when `A₂ = 0`.
    pub fn warp(&self) -> Result<TimeFunction, CosmologyError> {
        if self.a2 == 0.0 {
            let gamma = self.gamma()?;
            if !(self.b1 > 0.0) {
                return Err(CosmologyError::NonPositiveWarp(self.b1));
            }
            return Ok(TimeFunction::log_power(self.b1, gamma));
        }
        let u = u_general(self)?;
        let a = self.scale_factor();
        Ok(TimeFunction::new(move |t| (u.eval(t) / a.eval(t)).ln()))
    }

    pub fn model(&self) -> Result<WarpedModel, CosmologyError> {
        Ok(WarpedModel::new(self.scale_factor(), self.warp()?, self.c1, self.c2, self.xi))
    }

    /// `(C₁/2)² (6 − 5ξ) B₁⁻²`
    pub fn lambda_coefficient(&self) -> Result<f64, CosmologyError> {
        if self.b1 == 0.0 {
            return Err(CosmologyError::ZeroB1);
        }
        Ok((0.5 * self.c1).powi(2) * coupling(self.xi) / (self.b1 * self.b1))
    }
}

/// Closed-form solution of `ü + 4p(2p−1)u/t² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UClosedForm {
    /// `A₁ t^{r₊} + A₂ t^{r₋}`
    Distinct { a1: f64, a2: f64, r_plus: f64, r_minus: f64 },
    /// `(A₁ + A₂ ln t) √t`
    Repeated { a1: f64, a2: f64 },
}

impl UClosedForm {
    pub fn eval(&self, t: Jet2) -> Jet2 {
        match *self {
            UClosedForm::Distinct { a1, a2, r_plus, r_minus } => t.powf(r_plus) * a1 + t.powf(r_minus) * a2,
            UClosedForm::Repeated { a1, a2 } => (t.ln() * a2 + a1) * t.sqrt(),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(Jet2::constant(t)).value
    }

    /// `(u, u̇)` at `t`, for seeding an integrator.
    pub fn state(&self, t: f64) -> [f64; 2] {
        let j = self.eval(Jet2::variable(t));
        [j.value, j.d1]
    }
}

pub fn u_general(scenario: &PowerLawScenario) -> Result<UClosedForm, CosmologyError> {
    let d = scenario.discriminant();
    let s = checked_sqrt_discriminant(scenario.p)?;
    if d.abs() <= DISCRIMINANT_TOL {
        return Ok(UClosedForm::Repeated {
            a1: scenario.a1,
            a2: scenario.a2,
        });
    }
    Ok(UClosedForm::Distinct {
        a1: scenario.a1,
        a2: scenario.a2,
        r_plus: 0.5 + 0.5 * s,
        r_minus: 0.5 - 0.5 * s,
    })
}

/// Both forms of the `u` equation at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UResidual {
    pub t: f64,
    pub u: f64,
    /// `ü + 4(ä/a + H²)u`
    pub u_equation: f64,
    /// `F̈ + Ḟ² + 2HḞ + 5ä/a + 4H²`
    pub warp_combination: f64,
    /// `u_equation − u · warp_combination`, zero by algebra.
    pub identity_gap: f64,
    /// `|ü| + |4(ä/a + H²)u|`, the natural size of `u_equation`.
    pub scale: f64,
}

fn warp_combination(k: &Kinematics) -> f64 {
    let (h, acc) = (k.hubble(), k.acceleration());
    k.f.d2 + k.f.d1 * k.f.d1 + 2.0 * h * k.f.d1 + 5.0 * acc + 4.0 * h * h
}

pub fn u_equation_residual(model: &WarpedModel, t: f64) -> Result<UResidual, CosmologyError> {
    if !(t > 0.0) {
        return Err(CosmologyError::NonPositiveTime(t));
    }
    let k = model.kinematics(t);
    let u = model.a.eval(Jet2::variable(t)) * model.f.eval(Jet2::variable(t)).exp();
    let (h, acc) = (k.hubble(), k.acceleration());
    let source = 4.0 * (acc + h * h) * u.value;
    let u_equation = u.d2 + source;
    let warp = warp_combination(&k);
    Ok(UResidual {
        t,
        u: u.value,
        u_equation,
        warp_combination: warp,
        identity_gap: u_equation - u.value * warp,
        scale: u.d2.abs() + source.abs(),
    })
}

/// Integrates `ü + [4p(2p−1)/t²] u = 0` from `(t0, u0, du0)` to `tf`; state is `(u, u̇)`.
pub fn solve_u_numeric(p: f64, u0: f64, du0: f64, t0: f64, tf: f64) -> Result<Trajectory, CosmologyError> {
    solve_u_numeric_with(p, u0, du0, t0, tf, &IvpOptions::default())
}

pub fn solve_u_numeric_with(
    p: f64,
    u0: f64,
    du0: f64,
    t0: f64,
    tf: f64,
    opts: &IvpOptions,
) -> Result<Trajectory, CosmologyError> {
    if !(t0 > 0.0) {
        return Err(CosmologyError::NonPositiveTime(t0));
    }
    let k = 4.0 * p * (2.0 * p - 1.0);
    let rhs = move |t: f64, y: &[f64]| vec![y[1], -k * y[0] / (t * t)];
    Ok(integrate_ivp_with(rhs, t0, &[u0, du0], tf, opts)?)
}

/// Residuals of the three warped bulk equations, each written as
/// `lhs − ¼(6−5ξ)C₁²e^{−2F}`, plus their combination.
///
/// The extra-extra equation carries its geometric side as `−3(ä/a + H²)` so
/// all three share the same source; then `bulk_spatial − bulk_extra` equals
/// `warp_combination` identically.
pub fn bulk_system_residuals(model: &WarpedModel, t: f64) -> Result<Vec<EquationResidual>, CosmologyError> {
    if !(t > 0.0) {
        return Err(CosmologyError::NonPositiveTime(t));
    }
    let k = model.kinematics(t);
    let (h, acc) = (k.hubble(), k.acceleration());
    let (df, ddf) = (k.f.d1, k.f.d2);
    let source = model.weyl_source(t);

    let hubble = 3.0 * h * h + 3.0 * df * h - source;
    let spatial = 2.0 * acc + h * h + 2.0 * df * h + ddf + df * df - source;
    let extra = -3.0 * (acc + h * h) - source;
    let warp = warp_combination(&k);
    Ok(vec![
        EquationResidual::scalar(Equation::BulkHubble, hubble),
        EquationResidual::scalar(Equation::BulkSpatial, spatial),
        EquationResidual::scalar(Equation::BulkExtra, extra),
        EquationResidual::scalar(Equation::WarpCombination, warp),
        EquationResidual::scalar(Equation::BulkCombinationIdentity, spatial - extra - warp),
    ])
}

/// Closed-form `Λ(t) = (C₁/2)²(6−5ξ) B₁⁻² t^{−2γ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaPowerLaw {
    pub coefficient: f64,
    pub gamma: f64,
}

impl LambdaPowerLaw {
    pub fn at(&self, t: f64) -> f64 {
        self.coefficient * t.powf(-2.0 * self.gamma)
    }
}

pub fn lambda_powerlaw(scenario: &PowerLawScenario) -> Result<LambdaPowerLaw, CosmologyError> {
    Ok(LambdaPowerLaw {
        coefficient: scenario.lambda_coefficient()?,
        gamma: scenario.gamma()?,
    })
}

/// Closed-form effective equation of state of the power-law brane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaPowerLaw {
    pub p: f64,
    pub gamma: f64,
    pub lambda_coefficient: f64,
}

impl OmegaPowerLaw {
    /// `−[1 − (γ² − γ − pγ)/(γ² − γ + Λ₀ t^{2−2γ})]`
    pub fn at(&self, t: f64) -> Result<f64, CosmologyError> {
        let g = self.gamma;
        let quad = g * g - g;
        let lam = self.lambda_coefficient * t.powf(2.0 - 2.0 * g);
        let den = quad + lam;
        if den == 0.0 || den.abs() <= 1e-12 * (quad.abs() + lam.abs()) {
            return Err(CosmologyError::SingularState { t });
        }
        Ok(-(1.0 - (quad - self.p * g) / den))
    }
}

pub fn omega_eff_powerlaw(scenario: &PowerLawScenario) -> Result<OmegaPowerLaw, CosmologyError> {
    Ok(OmegaPowerLaw {
        p: scenario.p,
        gamma: scenario.gamma()?,
        lambda_coefficient: scenario.lambda_coefficient()?,
    })
}

/// `samples` points from `t_min` to `t_max`, both endpoints included.
pub fn time_grid(t_min: f64, t_max: f64, samples: usize, log_spacing: bool) -> Result<Vec<f64>, CosmologyError> {
    if !(t_min > 0.0) {
        return Err(CosmologyError::InvalidGrid(format!("t_min must be positive, got {t_min}")));
    }
    if !(t_max > t_min) {
        return Err(CosmologyError::InvalidGrid(format!("t_max ({t_max}) must exceed t_min ({t_min})")));
    }
    if samples < 2 {
        return Err(CosmologyError::InvalidGrid(format!("need at least 2 samples, got {samples}")));
    }
    let last = (samples - 1) as f64;
    let mut grid: Vec<f64> = (0..samples)
        .map(|i| {
            let s = i as f64 / last;
            if log_spacing {
                t_min * (t_max / t_min).powf(s)
            } else {
                t_min + (t_max - t_min) * s
            }
        })
        .collect();
    grid[0] = t_min;
    grid[samples - 1] = t_max;
    Ok(grid)
}

/// 16 log-spaced instants on `[1, 100]`.
pub fn default_grid() -> Vec<f64> {
    time_grid(1.0, 100.0, 16, true).expect("static grid is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_reference_points() {
        assert!(gamma_exponent(5.0 / 9.0).unwrap().abs() < 1e-14);
        assert_eq!(gamma_exponent(0.5).unwrap(), 0.5);
        assert!((gamma_exponent(1.0 / 3.0).unwrap() - 1.0).abs() < 1e-15);
        match gamma_exponent(0.6) {
            Err(CosmologyError::ComplexExponents { discriminant, .. }) => {
                assert!((discriminant + 0.92).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn minus_branch() {
        // p = 1/2: exponents of u are 1 and 0, so γ₋ = 0 − p = −1/2
        assert_eq!(gamma_exponent_branch(0.5, Branch::Minus).unwrap(), -0.5);
    }

    #[test]
    fn boundary_gamma_is_continuous() {
        let pb = p_max_real();
        assert!(discriminant(pb).abs() <= 1e-12);
        let g_edge = gamma_exponent(pb).unwrap();
        let g_in = gamma_exponent(pb - 1e-12).unwrap();
        assert!((g_edge - g_in).abs() < 1e-5);
        assert!((g_edge - (0.5 - pb)).abs() < 1e-6);
    }

    #[test]
    fn admissibility_examples() {
        let a = admissibility(0.45);
        assert_eq!(
            a,
            Admissibility {
                real_gamma: true,
                omega_decreasing: true,
                admissible_window: true,
                de_sitter: false
            }
        );
        assert!(admissibility(5.0 / 9.0).de_sitter);
        let low = admissibility(0.2);
        assert!(low.real_gamma && !low.omega_decreasing && !low.admissible_window);
        let high = admissibility(0.6);
        assert!(!high.real_gamma && !high.admissible_window);
        assert!(!admissibility(-0.01).real_gamma);
    }

    #[test]
    fn u_closed_form_examples() {
        let zero = PowerLawScenario { a1: 0.0, ..PowerLawScenario::with_p(0.45) };
        assert_eq!(u_general(&zero).unwrap().value(3.0), 0.0);

        let half = u_general(&PowerLawScenario::with_p(0.5)).unwrap();
        assert!((half.value(7.0) - 7.0).abs() < 1e-14);

        match u_general(&PowerLawScenario::with_p(1.0 / 3.0)).unwrap() {
            UClosedForm::Distinct { r_plus, r_minus, .. } => {
                assert!((r_plus - 4.0 / 3.0).abs() < 1e-15);
                assert!((r_minus + 1.0 / 3.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn repeated_root_solves_the_euler_equation() {
        let p = p_max_real();
        let s = PowerLawScenario { a1: 0.7, a2: 1.3, ..PowerLawScenario::with_p(p) };
        let u = u_general(&s).unwrap();
        assert!(matches!(u, UClosedForm::Repeated { .. }));
        let k = 4.0 * p * (2.0 * p - 1.0);
        for t in [1.0, 2.5, 9.0] {
            let j = u.eval(Jet2::variable(t));
            assert!((j.d2 + k * j.value / (t * t)).abs() < 1e-9);
        }
    }

    #[test]
    fn power_law_solves_u_equation() {
        for p in [0.35, 0.45, 0.5, 5.0 / 9.0] {
            let model = PowerLawScenario::with_p(p).model().unwrap();
            for t in [1.0, 3.0, 10.0] {
                let r = u_equation_residual(&model, t).unwrap();
                assert!(r.u_equation.abs() <= 1e-9 * r.scale.max(1.0), "p={p} t={t} {r:?}");
            }
        }
    }

    #[test]
    fn warp_combination_for_constant_warp() {
        let model = WarpedModel::new(TimeFunction::power_law(1.0, 0.5), TimeFunction::constant(0.3), 1.0, 0.0, 1.0);
        let r = u_equation_residual(&model, 1.0).unwrap();
        assert!((r.warp_combination + 0.25).abs() < 1e-15);
        assert!(r.identity_gap.abs() < 1e-15);
    }

    #[test]
    fn trivial_u_has_zero_residual() {
        let s = PowerLawScenario { a1: 0.0, a2: 0.0, ..PowerLawScenario::with_p(0.45) };
        let u = u_general(&s).unwrap();
        let j = u.eval(Jet2::variable(2.0));
        assert_eq!(j.d2 + 4.0 * 0.45 * (0.9 - 1.0) * j.value / 4.0, 0.0);
    }

    #[test]
    fn u_numeric_zero_coefficient() {
        let traj = solve_u_numeric(0.5, 1.0, 1.0, 1.0, 10.0).unwrap();
        for i in 0..=90 {
            let t = 1.0 + 0.1 * i as f64;
            let u = traj.component_at(t.min(10.0), 0).unwrap();
            assert!((u - t.min(10.0)).abs() <= 1e-8 * t);
        }
    }

    #[test]
    fn u_numeric_requires_positive_start() {
        assert!(matches!(
            solve_u_numeric(0.45, 1.0, 1.0, 0.0, 1.0),
            Err(CosmologyError::NonPositiveTime(_))
        ));
    }

    #[test]
    fn static_vacuum_bulk() {
        let model = WarpedModel::new(TimeFunction::constant(2.0), TimeFunction::constant(0.5), 0.0, 0.0, 1.0);
        for r in bulk_system_residuals(&model, 3.0).unwrap() {
            assert_eq!(r.value, 0.0, "{:?}", r.equation);
        }
    }

    #[test]
    fn critical_coupling_hubble_residual() {
        let model = WarpedModel::new(TimeFunction::power_law(1.0, 0.5), TimeFunction::log_power(1.0, 0.5), 1.0, 0.0, 1.2);
        // 3p(p + γ)/t² with p = γ = ½
        let r = bulk_system_residuals(&model, 1.0).unwrap();
        assert!((r[0].value - 1.5).abs() < 1e-15);
    }

    #[test]
    fn combination_identity_on_defaults() {
        let model = PowerLawScenario::default().model().unwrap();
        for t in default_grid() {
            let r = bulk_system_residuals(&model, t).unwrap();
            assert!(r[4].value.abs() <= 1e-9);
        }
    }

    #[test]
    fn lambda_examples() {
        let crit = PowerLawScenario { xi: 1.2, ..PowerLawScenario::with_p(0.45) };
        assert_eq!(lambda_powerlaw(&crit).unwrap().at(5.0), 0.0);

        let ds = PowerLawScenario { c1: 2.0, ..PowerLawScenario::with_p(5.0 / 9.0) };
        let lam = lambda_powerlaw(&ds).unwrap();
        for t in [1.0, 10.0, 100.0] {
            assert!((lam.at(t) - 1.0).abs() < 1e-12);
        }

        let half = PowerLawScenario { c1: 2.0, ..PowerLawScenario::with_p(0.5) };
        assert!((lambda_powerlaw(&half).unwrap().at(4.0) - 0.25).abs() < 1e-15);

        let zero_b = PowerLawScenario { a1: 0.0, ..PowerLawScenario::with_p(0.45) }.rederive();
        assert_eq!(lambda_powerlaw(&zero_b).unwrap_err(), CosmologyError::ZeroB1);
    }

    #[test]
    fn omega_examples() {
        let ds = omega_eff_powerlaw(&PowerLawScenario::with_p(5.0 / 9.0)).unwrap();
        for t in default_grid() {
            assert!((ds.at(t).unwrap() + 1.0).abs() < 1e-12);
        }
        let crit = PowerLawScenario { xi: 1.2, ..PowerLawScenario::with_p(0.5) };
        let w = omega_eff_powerlaw(&crit).unwrap();
        for t in [1.0, 7.0, 50.0] {
            assert!((w.at(t).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn omega_singular_state() {
        // p = 1/2 defaults: γ² − γ = −1/4 and Λ₀ t = 1/4 at t = 1
        let w = omega_eff_powerlaw(&PowerLawScenario::with_p(0.5)).unwrap();
        assert_eq!(w.at(1.0).unwrap_err(), CosmologyError::SingularState { t: 1.0 });
    }

    #[test]
    fn grids() {
        let g = default_grid();
        assert_eq!(g.len(), 16);
        assert_eq!((g[0], g[15]), (1.0, 100.0));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(time_grid(0.0, 1.0, 4, true).is_err());
        assert!(time_grid(2.0, 1.0, 4, false).is_err());
        assert!(time_grid(1.0, 2.0, 1, false).is_err());
        assert_eq!(time_grid(1.0, 2.0, 3, false).unwrap(), vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn scenario_derives_b1() {
        let s = PowerLawScenario::new(0.5, 2.0, 4.0, 3.0, 0.0, 1.0, 0.0, 1.0);
        assert!((s.b1 - 3.0).abs() < 1e-15);
        let m = s.model().unwrap();
        // u = a e^F = A₁ t^{p+γ}
        let t = 2.7;
        let u = m.a.value(t) * m.f.value(t).exp();
        assert!((u - 3.0 * t.powf(0.5 + 0.5)).abs() < 1e-12);
    }

    #[test]
    fn general_warp_matches_particular_when_a2_vanishes() {
        let s = PowerLawScenario::with_p(0.45);
        let tiny = PowerLawScenario { a2: 1e-300, ..s };
        let (f0, f1) = (s.warp().unwrap(), tiny.warp().unwrap());
        for t in [1.0, 4.0, 30.0] {
            assert!((f0.value(t) - f1.value(t)).abs() < 1e-13);
        }
    }
}
