//! Adaptive Dormand–Prince 5(4) integrator with continuous output.

use super::NumericsError;

/// Step controller settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IvpOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// First trial step; chosen automatically when `None`.
    pub initial_step: Option<f64>,
}

impl Default for IvpOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            max_steps: 1_000_000,
            initial_step: None,
        }
    }
}

/// Tolerances a trajectory was produced with.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

/// Quartic interpolant over one accepted step.
#[derive(Clone, Debug)]
struct DenseSegment {
    t0: f64,
    h: f64,
    coeffs: [Vec<f64>; 5],
}

impl DenseSegment {
    fn eval(&self, t: f64) -> Vec<f64> {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        (0..r1.len())
            .map(|i| r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i]))))
            .collect()
    }
}

/// Accepted steps of an integration plus a continuous extension between them.
#[derive(Clone, Debug)]
pub struct Trajectory {
    samples: Vec<(f64, Vec<f64>)>,
    segments: Vec<DenseSegment>,
    tolerances: Tolerances,
}

impl Trajectory {
    pub fn samples(&self) -> &[(f64, Vec<f64>)] {
        &self.samples
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances
    }

    pub fn t_span(&self) -> (f64, f64) {
        (self.samples[0].0, self.samples[self.samples.len() - 1].0)
    }

    /// Interpolated state at `t`, which must lie inside the integrated span.
    pub fn at(&self, t: f64) -> Result<Vec<f64>, NumericsError> {
        let (lo, hi) = self.t_span();
        if !(t >= lo && t <= hi) {
            return Err(NumericsError::OutOfSpan { t, lo, hi });
        }
        if self.segments.is_empty() {
            return Ok(self.samples[0].1.clone());
        }
        let idx = self
            .segments
            .partition_point(|seg| seg.t0 + seg.h < t)
            .min(self.segments.len() - 1);
        Ok(self.segments[idx].eval(t))
    }

    /// One state component at `t`.
    pub fn component_at(&self, t: f64, index: usize) -> Result<f64, NumericsError> {
        self.at(t).map(|y| y[index])
    }
}

// Dormand–Prince tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the 5th and embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Continuous extension.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

fn axpy(y: &[f64], h: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = y.to_vec();
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn eval_rhs<F>(f: &F, t: f64, y: &[f64]) -> Result<Vec<f64>, NumericsError>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let dy = f(t, y);
    if dy.len() != y.len() {
        return Err(NumericsError::DimensionMismatch {
            expected: y.len(),
            found: dy.len(),
        });
    }
    if dy.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFiniteState { t });
    }
    Ok(dy)
}

fn rms_norm(v: &[f64], scale: &[f64]) -> f64 {
    let n = v.len().max(1) as f64;
    (v.iter().zip(scale).map(|(x, s)| (x / s).powi(2)).sum::<f64>() / n).sqrt()
}

fn initial_step<F>(f: &F, t0: f64, y0: &[f64], f0: &[f64], span: f64, opts: &IvpOptions) -> Result<f64, NumericsError>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let scale: Vec<f64> = y0.iter().map(|y| opts.atol + opts.rtol * y.abs()).collect();
    let d0 = rms_norm(y0, &scale);
    let d1 = rms_norm(f0, &scale);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = eval_rhs(f, t0 + h0, &y1)?;
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms_norm(&diff, &scale) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    Ok((100.0 * h0).min(h1).min(span))
}

/// Integrates `y' = f(t, y)` from `t0` to `tf` (`tf > t0`) with the given options.
pub fn integrate_ivp_with<F>(
    f: F,
    t0: f64,
    y0: &[f64],
    tf: f64,
    opts: &IvpOptions,
) -> Result<Trajectory, NumericsError>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    if !(tf > t0) {
        return Err(NumericsError::InvalidSpan { t0, tf });
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(NumericsError::InvalidTolerance);
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFiniteState { t: t0 });
    }

    let span = tf - t0;
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k1 = eval_rhs(&f, t, &y)?;
    let mut h = match opts.initial_step {
        Some(h) => h.min(span),
        None => initial_step(&f, t0, y0, &k1, span, opts)?,
    };

    let mut samples = vec![(t, y.clone())];
    let mut segments = Vec::new();
    let mut rejected_last = false;
    let mut steps = 0usize;

    while t < tf {
        if steps >= opts.max_steps {
            return Err(NumericsError::TooManySteps { t, steps });
        }
        steps += 1;

        if h <= 16.0 * f64::EPSILON * t.abs().max(f64::MIN_POSITIVE) {
            return Err(NumericsError::StepSizeUnderflow { t, h });
        }
        let last = t + h >= tf;
        if last {
            h = tf - t;
        }

        let y2 = axpy(&y, h, &[(A21, &k1)]);
        let k2 = eval_rhs(&f, t + C2 * h, &y2)?;
        let y3 = axpy(&y, h, &[(A31, &k1), (A32, &k2)]);
        let k3 = eval_rhs(&f, t + C3 * h, &y3)?;
        let y4 = axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        let k4 = eval_rhs(&f, t + C4 * h, &y4)?;
        let y5 = axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        let k5 = eval_rhs(&f, t + C5 * h, &y5)?;
        let y6 = axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        let k6 = eval_rhs(&f, t + h, &y6)?;
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let t_new = if last { tf } else { t + h };
        let k7 = eval_rhs(&f, t_new, &y_new)?;

        let err_vec: Vec<f64> = (0..y.len())
            .map(|i| h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]))
            .collect();
        let scale: Vec<f64> = y
            .iter()
            .zip(&y_new)
            .map(|(a, b)| opts.atol + opts.rtol * a.abs().max(b.abs()))
            .collect();
        let err = rms_norm(&err_vec, &scale);
        if !err.is_finite() {
            return Err(NumericsError::NonFiniteState { t });
        }

        let mut fac = if err == 0.0 { FAC_MAX } else { SAFETY * err.powf(-0.2) };
        fac = fac.clamp(FAC_MIN, FAC_MAX);

        if err <= 1.0 {
            let ydiff: Vec<f64> = y_new.iter().zip(&y).map(|(a, b)| a - b).collect();
            let bspl: Vec<f64> = (0..y.len()).map(|i| h * k1[i] - ydiff[i]).collect();
            let r4: Vec<f64> = (0..y.len()).map(|i| ydiff[i] - h * k7[i] - bspl[i]).collect();
            let r5: Vec<f64> = (0..y.len())
                .map(|i| h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]))
                .collect();
            segments.push(DenseSegment {
                t0: t,
                h: t_new - t,
                coeffs: [y.clone(), ydiff, bspl, r4, r5],
            });

            t = t_new;
            y = y_new;
            k1 = k7;
            samples.push((t, y.clone()));

            if rejected_last {
                fac = fac.min(1.0);
            }
            rejected_last = false;
            h *= fac;
        } else {
            rejected_last = true;
            h *= fac.min(1.0);
        }
    }

    Ok(Trajectory {
        samples,
        segments,
        tolerances: Tolerances {
            rtol: opts.rtol,
            atol: opts.atol,
        },
    })
}

/// Integrates `y' = f(t, y)` on `[t0, tf]` with the given tolerances.
pub fn integrate_ivp<F>(f: F, t0: f64, y0: &[f64], tf: f64, rtol: f64, atol: f64) -> Result<Trajectory, NumericsError>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let opts = IvpOptions {
        rtol,
        atol,
        ..IvpOptions::default()
    };
    integrate_ivp_with(f, t0, y0, tf, &opts)
}
