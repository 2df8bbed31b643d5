//! Second-order forward-mode jets.
//!
//! A [`Jet2`] carries a value together with its first and second derivative
//! along a single seeded direction. Arithmetic propagates both derivatives
//! exactly through the chain, product and quotient rules, so a polynomial
//! evaluated on jets yields its derivative coefficients up to rounding.
//!
//! Mixed partials are recovered by polarization: seeding the direction
//! `e_i + e_j` gives `∂ᵢᵢf + 2∂ᵢⱼf + ∂ⱼⱼf` in the second slot.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Truncated Taylor expansion `f + f'ε + ½f''ε²` stored as `(f, f', f'')`.
#[derive(Copy, Clone, Debug, PartialEq, Default)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    #[inline]
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    /// Lifts a constant: both derivatives are zero.
    #[inline]
    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    /// The independent variable itself, seeded with unit speed.
    #[inline]
    pub const fn variable(value: f64) -> Self {
        Self::new(value, 1.0, 0.0)
    }

    /// Applies a scalar function given its value and first two derivatives at `self.value`.
    #[inline]
    fn chain(self, f: f64, df: f64, ddf: f64) -> Self {
        Self {
            value: f,
            d1: df * self.d1,
            d2: ddf * self.d1 * self.d1 + df * self.d2,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.value;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let r = 1.0 / self.value;
        self.chain(self.value.ln(), r, -r * r)
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.value))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    /// Real power with a constant exponent.
    pub fn powf(self, n: f64) -> Self {
        if n == 0.0 {
            return Self::constant(1.0);
        }
        if n == 1.0 {
            return self;
        }
        let x = self.value;
        let p2 = x.powf(n - 2.0);
        let p1 = p2 * x;
        self.chain(p1 * x, n * p1, n * (n - 1.0) * p2)
    }

    /// Integer power by repeated multiplication, so polynomial coefficients stay exact.
    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(1.0),
            n if n < 0 => self.powi(-n).recip(),
            n => {
                let mut acc = self;
                for _ in 1..n {
                    acc = acc * self;
                }
                acc
            }
        }
    }
}

impl From<f64> for Jet2 {
    fn from(value: f64) -> Self {
        Self::constant(value)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    #[inline]
    fn neg(self) -> Jet2 {
        Jet2::new(-self.value, -self.d1, -self.d2)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2::new(self.value + rhs.value, self.d1 + rhs.d1, self.d2 + rhs.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(self, rhs: Jet2) -> Jet2 {
        Jet2::new(self.value - rhs.value, self.d1 - rhs.d1, self.d2 - rhs.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, rhs: Jet2) -> Jet2 {
        Jet2::new(
            self.value * rhs.value,
            self.d1 * rhs.value + self.value * rhs.d1,
            self.d2 * rhs.value + 2.0 * self.d1 * rhs.d1 + self.value * rhs.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[inline]
    fn div(self, rhs: Jet2) -> Jet2 {
        self * rhs.recip()
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(self, rhs: f64) -> Jet2 {
        Jet2::new(self.value + rhs, self.d1, self.d2)
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(self, rhs: f64) -> Jet2 {
        Jet2::new(self.value - rhs, self.d1, self.d2)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, rhs: f64) -> Jet2 {
        Jet2::new(self.value * rhs, self.d1 * rhs, self.d2 * rhs)
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn div(self, rhs: f64) -> Jet2 {
        Jet2::new(self.value / rhs, self.d1 / rhs, self.d2 / rhs)
    }
}

impl Add<Jet2> for f64 {
    type Output = Jet2;
    #[inline]
    fn add(self, rhs: Jet2) -> Jet2 {
        rhs + self
    }
}

impl Sub<Jet2> for f64 {
    type Output = Jet2;
    #[inline]
    fn sub(self, rhs: Jet2) -> Jet2 {
        Jet2::new(self - rhs.value, -rhs.d1, -rhs.d2)
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    #[inline]
    fn mul(self, rhs: Jet2) -> Jet2 {
        rhs * self
    }
}

impl Div<Jet2> for f64 {
    type Output = Jet2;
    #[inline]
    fn div(self, rhs: Jet2) -> Jet2 {
        rhs.recip() * self
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, rhs: Jet2) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, rhs: Jet2) {
        *self = *self - rhs;
    }
}

impl MulAssign for Jet2 {
    fn mul_assign(&mut self, rhs: Jet2) {
        *self = *self * rhs;
    }
}
