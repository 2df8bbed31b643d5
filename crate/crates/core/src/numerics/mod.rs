//! Differentiation and integration kernels.

mod ivp;
mod jet;

pub use ivp::{integrate_ivp, integrate_ivp_with, IvpOptions, Tolerances, Trajectory};
pub use jet::Jet2;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("evaluation outside domain at t = {t}: non-finite derivative")]
    OutsideDomain { t: f64 },
    #[error("integration span must satisfy tf > t0 (t0 = {t0}, tf = {tf})")]
    InvalidSpan { t0: f64, tf: f64 },
    #[error("tolerances must be strictly positive")]
    InvalidTolerance,
    #[error("step size underflow at t = {t} (h = {h}): stiff or singular problem")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("step budget exhausted at t = {t} after {steps} steps")]
    TooManySteps { t: f64, steps: usize },
    #[error("non-finite state encountered at t = {t}")]
    NonFiniteState { t: f64 },
    #[error("vector field returned {found} components, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("query t = {t} outside integrated span [{lo}, {hi}]")]
    OutOfSpan { t: f64, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeOrder {
    First,
    Second,
}

/// Exact first or second derivative of `f` at `t` by jet propagation.
pub fn derivative<F>(f: F, t: f64, order: DerivativeOrder) -> Result<f64, NumericsError>
where
    F: Fn(Jet2) -> Jet2,
{
    let jet = f(Jet2::variable(t));
    let d = match order {
        DerivativeOrder::First => jet.d1,
        DerivativeOrder::Second => jet.d2,
    };
    if d.is_finite() && jet.value.is_finite() {
        Ok(d)
    } else {
        Err(NumericsError::OutsideDomain { t })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_slope() {
        assert_eq!(derivative(|t| t * t * t, 2.0, DerivativeOrder::First).unwrap(), 12.0);
    }

    #[test]
    fn sine_curvature_at_origin() {
        assert_eq!(derivative(Jet2::sin, 0.0, DerivativeOrder::Second).unwrap(), 0.0);
    }

    #[test]
    fn log_power_slope() {
        // d/dt ln(B t^γ) = γ / t
        let d = derivative(|t| (t.powf(0.5) * 1.0).ln(), 4.0, DerivativeOrder::First).unwrap();
        assert!((d - 0.125).abs() < 1e-16);
    }

    #[test]
    fn outside_domain_is_reported() {
        let err = derivative(Jet2::ln, -1.0, DerivativeOrder::First).unwrap_err();
        assert_eq!(err, NumericsError::OutsideDomain { t: -1.0 });
    }
}
