//! Dual numbers `a + eps a*` with `eps^2 = 0`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::PURE_DUAL_TOL;

/// A dual number `re + eps du`.
///
/// Equality is exact on both parts. Addition, subtraction and multiplication
/// are total; division and the analytic functions that can leave their domain
/// return [`Result`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DualScalar {
    pub re: f64,
    pub du: f64,
}

impl DualScalar {
    pub const ZERO: DualScalar = DualScalar { re: 0.0, du: 0.0 };
    pub const ONE: DualScalar = DualScalar { re: 1.0, du: 0.0 };
    /// The dual unit `eps`.
    pub const EPS: DualScalar = DualScalar { re: 0.0, du: 1.0 };

    #[inline]
    pub const fn new(re: f64, du: f64) -> Self {
        DualScalar { re, du }
    }

    #[inline]
    pub const fn real(re: f64) -> Self {
        DualScalar { re, du: 0.0 }
    }

    /// Checked constructor rejecting NaN and infinities.
    pub fn try_new(re: f64, du: f64) -> Result<Self> {
        DualScalar { re, du }.finite("constructor")
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.du.is_finite()
    }

    pub(crate) fn finite(self, context: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite { context })
        }
    }

    /// `|re| <= tol`.
    #[inline]
    pub fn is_pure_dual(self, tol: f64) -> bool {
        self.re.abs() <= tol
    }

    /// Largest absolute difference over both parts.
    pub fn max_abs_diff(self, other: DualScalar) -> f64 {
        (self.re - other.re).abs().max((self.du - other.du).abs())
    }

    pub fn scale(self, k: f64) -> Self {
        DualScalar::new(self.re * k, self.du * k)
    }

    pub fn div(self, rhs: DualScalar) -> Result<Self> {
        self.div_with_tol(rhs, PURE_DUAL_TOL)
    }

    /// `a/b + eps (a* b - a b*) / b^2`, refusing divisors with `|b| <= tol`.
    pub fn div_with_tol(self, rhs: DualScalar, tol: f64) -> Result<Self> {
        if rhs.is_pure_dual(tol) {
            return Err(Error::PureDualDivisor { re: rhs.re });
        }
        let b = rhs.re;
        DualScalar::new(self.re / b, (self.du * b - self.re * rhs.du) / (b * b)).finite("division")
    }

    pub fn recip(self) -> Result<Self> {
        DualScalar::ONE.div(self)
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// [`DualScalar::recip`].
    pub fn powi(self, n: i32) -> Result<Self> {
        let mut base = if n < 0 { self.recip()? } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = DualScalar::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc.finite("powi")
    }

    pub fn apply(self, f: AnalyticFn) -> Result<Self> {
        f.apply(self)
    }

    pub fn sin(self) -> Self {
        DualScalar::new(self.re.sin(), self.du * self.re.cos())
    }

    pub fn cos(self) -> Self {
        DualScalar::new(self.re.cos(), -self.du * self.re.sin())
    }

    pub fn exp(self) -> Result<Self> {
        let e = self.re.exp();
        DualScalar::new(e, self.du * e).finite("exp")
    }

    pub fn atan(self) -> Self {
        DualScalar::new(self.re.atan(), self.du / (1.0 + self.re * self.re))
    }

    pub fn sqrt(self) -> Result<Self> {
        AnalyticFn::Sqrt.apply(self)
    }

    pub fn ln(self) -> Result<Self> {
        AnalyticFn::Log.apply(self)
    }

    pub fn tan(self) -> Result<Self> {
        AnalyticFn::Tan.apply(self)
    }
}

/// The real functions that can be lifted to dual arguments via
/// `f(a + eps a*) = f(a) + eps a* f'(a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AnalyticFn {
    Sin,
    Cos,
    Tan,
    Sqrt,
    Exp,
    Log,
    Atan,
}

impl AnalyticFn {
    pub const ALL: [AnalyticFn; 7] = [
        AnalyticFn::Sin,
        AnalyticFn::Cos,
        AnalyticFn::Tan,
        AnalyticFn::Sqrt,
        AnalyticFn::Exp,
        AnalyticFn::Log,
        AnalyticFn::Atan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnalyticFn::Sin => "sin",
            AnalyticFn::Cos => "cos",
            AnalyticFn::Tan => "tan",
            AnalyticFn::Sqrt => "sqrt",
            AnalyticFn::Exp => "exp",
            AnalyticFn::Log => "log",
            AnalyticFn::Atan => "atan",
        }
    }

    pub fn from_name(name: &str) -> Option<AnalyticFn> {
        AnalyticFn::ALL.iter().copied().find(|f| f.name() == name)
    }

    /// Whether `x` lies in the real domain where the dual lift is defined.
    pub fn in_domain(self, x: f64) -> bool {
        match self {
            AnalyticFn::Sqrt | AnalyticFn::Log => x > 0.0,
            AnalyticFn::Tan => x.cos().abs() > PURE_DUAL_TOL,
            _ => true,
        }
    }

    pub fn apply(self, x: DualScalar) -> Result<DualScalar> {
        if !x.is_finite() {
            return Err(Error::NonFinite { context: self.name() });
        }
        if !self.in_domain(x.re) {
            return Err(Error::Domain {
                func: self.name(),
                re: x.re,
            });
        }
        let a = x.re;
        let (value, slope) = match self {
            AnalyticFn::Sin => (a.sin(), a.cos()),
            AnalyticFn::Cos => (a.cos(), -a.sin()),
            AnalyticFn::Tan => {
                let t = a.tan();
                (t, 1.0 + t * t)
            }
            AnalyticFn::Sqrt => {
                let r = a.sqrt();
                (r, 0.5 / r)
            }
            AnalyticFn::Exp => {
                let e = a.exp();
                (e, e)
            }
            AnalyticFn::Log => (a.ln(), 1.0 / a),
            AnalyticFn::Atan => (a.atan(), 1.0 / (1.0 + a * a)),
        };
        DualScalar::new(value, x.du * slope).finite(self.name())
    }
}

impl fmt::Display for AnalyticFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.du.is_sign_negative() {
            write!(f, "{}-eps*{}", self.re, -self.du)
        } else {
            write!(f, "{}+eps*{}", self.re, self.du)
        }
    }
}

impl From<f64> for DualScalar {
    fn from(re: f64) -> Self {
        DualScalar::real(re)
    }
}

impl Add for DualScalar {
    type Output = DualScalar;
    #[inline]
    fn add(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl Sub for DualScalar {
    type Output = DualScalar;
    #[inline]
    fn sub(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl Neg for DualScalar {
    type Output = DualScalar;
    #[inline]
    fn neg(self) -> DualScalar {
        DualScalar::new(-self.re, -self.du)
    }
}

impl Mul for DualScalar {
    type Output = DualScalar;
    #[inline]
    fn mul(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.re * rhs.re, self.re * rhs.du + rhs.re * self.du)
    }
}

impl Mul<f64> for DualScalar {
    type Output = DualScalar;
    #[inline]
    fn mul(self, rhs: f64) -> DualScalar {
        self.scale(rhs)
    }
}

impl AddAssign for DualScalar {
    fn add_assign(&mut self, rhs: DualScalar) {
        *self = *self + rhs;
    }
}

impl SubAssign for DualScalar {
    fn sub_assign(&mut self, rhs: DualScalar) {
        *self = *self - rhs;
    }
}

impl MulAssign for DualScalar {
    fn mul_assign(&mut self, rhs: DualScalar) {
        *self = *self * rhs;
    }
}

impl Sum for DualScalar {
    fn sum<I: Iterator<Item = DualScalar>>(iter: I) -> DualScalar {
        iter.fold(DualScalar::ZERO, Add::add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn d(re: f64, du: f64) -> DualScalar {
        DualScalar::new(re, du)
    }

    #[test]
    fn addition_examples() {
        assert_eq!(d(1.0, 2.0) + d(3.0, 4.0), d(4.0, 6.0));
        let x = d(-2.5, 7.0);
        assert_eq!(x + DualScalar::ZERO, x);
        assert_eq!(x + (-x), d(0.0, 0.0));
        assert_eq!(x - x, DualScalar::ZERO);
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(DualScalar::EPS * DualScalar::EPS, DualScalar::ZERO);
        assert_eq!(d(2.0, 3.0) * d(4.0, 5.0), d(8.0, 22.0));
        let x = d(1.25, -3.0);
        assert_eq!(x * DualScalar::ONE, x);
    }

    #[test]
    fn division_examples() {
        assert_eq!(d(6.0, 4.0).div(d(2.0, 2.0)).unwrap(), d(3.0, -1.0));
        let x = d(3.5, -1.5);
        let q = x.div(x).unwrap();
        assert!(q.max_abs_diff(DualScalar::ONE) <= 1e-15);
        assert_eq!(
            d(1.0, 1.0).div(d(0.0, 5.0)),
            Err(Error::PureDualDivisor { re: 0.0 })
        );
    }

    #[test]
    fn analytic_examples() {
        assert_eq!(d(4.0, 4.0).sqrt().unwrap(), d(2.0, 1.0));
        assert_eq!(AnalyticFn::Cos.apply(d(0.0, 1.0)).unwrap(), d(1.0, 0.0));
        let c = AnalyticFn::Cos.apply(d(FRAC_PI_2, 1.0)).unwrap();
        assert!(c.re.abs() < 1e-15);
        assert!((c.du + 1.0).abs() < 1e-15);
    }

    #[test]
    fn analytic_domain_errors() {
        assert!(matches!(
            d(-1.0, 0.0).sqrt(),
            Err(Error::Domain { func: "sqrt", .. })
        ));
        assert!(matches!(d(0.0, 1.0).ln(), Err(Error::Domain { .. })));
        assert!(matches!(d(FRAC_PI_2, 0.0).tan(), Err(Error::Domain { .. })));
        assert!(matches!(d(1000.0, 0.0).exp(), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn pure_dual_threshold() {
        assert!(d(0.0, 3.0).is_pure_dual(1e-9));
        assert!(!d(1.0, 3.0).is_pure_dual(1e-9));
        assert!(d(1e-12, 3.0).is_pure_dual(1e-9));
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let x = d(1.5, 0.25);
        assert!(x.powi(3).unwrap().max_abs_diff(x * x * x) < 1e-15);
        assert!(x.powi(0).unwrap() == DualScalar::ONE);
        let inv2 = x.powi(-2).unwrap();
        assert!((inv2 * x * x).max_abs_diff(DualScalar::ONE) < 1e-15);
    }

    #[test]
    fn serde_shape() {
        let s = serde_json::to_string(&d(1.0, -2.0)).unwrap();
        assert_eq!(s, r#"{"re":1.0,"du":-2.0}"#);
    }

    #[test]
    fn try_new_rejects_nan() {
        assert!(DualScalar::try_new(f64::NAN, 0.0).is_err());
        assert!(DualScalar::try_new(1.0, f64::INFINITY).is_err());
    }
}
