//! Truncated Taylor (jet) arithmetic over dual-number coefficients.
//!
//! A [`Jet`] holds normalized Taylor coefficients `c_k = f^(k)(t0) / k!` of a
//! dual-valued function of one real parameter. Every curve in the crate is
//! evaluated by pushing a parameter jet through its defining expression, which
//! gives derivatives exact to round-off.
//!
//! Jets carry the index of their highest trustworthy coefficient. Building a
//! principal normal or a tangent as a jet differentiates the position jet and
//! so consumes orders; the Frenet apparatus needs order 3, hence the working
//! length of eight coefficients leaves room for an offset (two orders), an
//! involute (one) and an arc-length reparametrization (one) on top.

use std::ops::{Add, Mul, Neg, Sub};

use crate::dual::{AnalyticFn, DualScalar};
use crate::error::{Error, Result};
use crate::vector::DualVec3;

/// Number of Taylor coefficients stored per jet.
pub const JET_LEN: usize = 8;
/// Highest coefficient index.
pub const MAX_ORDER: usize = JET_LEN - 1;

const FACTORIAL: [f64; JET_LEN] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    coeffs: [DualScalar; JET_LEN],
    order: usize,
}

/// Value and first three parameter-derivatives of a dual-valued quantity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet3 {
    pub d0: DualScalar,
    pub d1: DualScalar,
    pub d2: DualScalar,
    pub d3: DualScalar,
}

impl Jet {
    pub fn constant(c: DualScalar) -> Jet {
        let mut coeffs = [DualScalar::ZERO; JET_LEN];
        coeffs[0] = c;
        Jet {
            coeffs,
            order: MAX_ORDER,
        }
    }

    /// The independent variable expanded at `t0`: `t0 + 1*dt`.
    pub fn variable(t0: DualScalar) -> Jet {
        let mut j = Jet::constant(t0);
        j.coeffs[1] = DualScalar::ONE;
        j
    }

    pub fn from_coeffs(coeffs: [DualScalar; JET_LEN], order: usize) -> Jet {
        let mut c = coeffs;
        for x in c.iter_mut().skip(order + 1) {
            *x = DualScalar::ZERO;
        }
        Jet {
            coeffs: c,
            order: order.min(MAX_ORDER),
        }
    }

    pub fn from_real_coeffs(coeffs: &[f64]) -> Jet {
        let mut c = [DualScalar::ZERO; JET_LEN];
        for (slot, &x) in c.iter_mut().zip(coeffs) {
            *slot = DualScalar::real(x);
        }
        Jet::from_coeffs(c, coeffs.len().saturating_sub(1).min(MAX_ORDER))
    }

    #[inline]
    pub fn value(&self) -> DualScalar {
        self.coeffs[0]
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> DualScalar {
        self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[DualScalar; JET_LEN] {
        &self.coeffs
    }

    /// `k`-th derivative with respect to the expansion parameter.
    pub fn derivative(&self, k: usize) -> Result<DualScalar> {
        if k > self.order {
            return Err(Error::InsufficientJetOrder {
                needed: k,
                available: self.order,
            });
        }
        Ok(self.coeffs[k].scale(FACTORIAL[k]))
    }

    pub fn to_jet3(&self) -> Result<Jet3> {
        Ok(Jet3 {
            d0: self.derivative(0)?,
            d1: self.derivative(1)?,
            d2: self.derivative(2)?,
            d3: self.derivative(3)?,
        })
    }

    /// The differentiated series; loses one order.
    pub fn differentiate(&self) -> Result<Jet> {
        if self.order == 0 {
            return Err(Error::InsufficientJetOrder {
                needed: 1,
                available: 0,
            });
        }
        let mut c = [DualScalar::ZERO; JET_LEN];
        for k in 0..self.order {
            c[k] = self.coeffs[k + 1].scale((k + 1) as f64);
        }
        Ok(Jet {
            coeffs: c,
            order: self.order - 1,
        })
    }

    /// Antiderivative with constant term `c0`; gains one order.
    pub fn integrate(&self, c0: DualScalar) -> Jet {
        let mut c = [DualScalar::ZERO; JET_LEN];
        c[0] = c0;
        let top = (self.order + 1).min(MAX_ORDER);
        for k in 1..=top {
            c[k] = self.coeffs[k - 1].scale(1.0 / k as f64);
        }
        Jet { coeffs: c, order: top }
    }

    pub fn real_part(&self) -> Jet {
        self.map_coeffs(|c| DualScalar::real(c.re))
    }

    pub fn dual_part(&self) -> Jet {
        self.map_coeffs(|c| DualScalar::real(c.du))
    }

    /// Recombine two real-coefficient series as `re + eps du`.
    pub fn combine(re: &Jet, du: &Jet) -> Jet {
        let mut c = [DualScalar::ZERO; JET_LEN];
        for (k, slot) in c.iter_mut().enumerate() {
            *slot = DualScalar::new(re.coeffs[k].re, du.coeffs[k].re);
        }
        Jet::from_coeffs(c, re.order.min(du.order))
    }

    fn map_coeffs(&self, f: impl Fn(DualScalar) -> DualScalar) -> Jet {
        let mut c = self.coeffs;
        for x in c.iter_mut() {
            *x = f(*x);
        }
        Jet { coeffs: c, order: self.order }
    }

    pub fn scale(&self, k: DualScalar) -> Jet {
        self.map_coeffs(|c| c * k)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn recip(&self) -> Result<Jet> {
        let f0 = self.coeffs[0];
        let g0 = f0.recip()?;
        let mut g = [DualScalar::ZERO; JET_LEN];
        g[0] = g0;
        for k in 1..=self.order {
            let mut acc = DualScalar::ZERO;
            for j in 1..=k {
                acc += self.coeffs[j] * g[k - j];
            }
            g[k] = -(acc * g0);
        }
        Ok(Jet {
            coeffs: g,
            order: self.order,
        })
    }

    pub fn try_div(&self, rhs: &Jet) -> Result<Jet> {
        Ok(*self * rhs.recip()?)
    }

    pub fn powi(&self, n: i32) -> Result<Jet> {
        let mut base = if n < 0 { self.recip()? } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(DualScalar::ONE);
        acc.order = self.order;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        Ok(acc)
    }

    pub fn exp(&self) -> Result<Jet> {
        let mut e = [DualScalar::ZERO; JET_LEN];
        e[0] = self.coeffs[0].exp()?;
        for k in 1..=self.order {
            let mut acc = DualScalar::ZERO;
            for j in 1..=k {
                acc += self.coeffs[j].scale(j as f64) * e[k - j];
            }
            e[k] = acc.scale(1.0 / k as f64);
        }
        Ok(Jet {
            coeffs: e,
            order: self.order,
        })
    }

    pub fn ln(&self) -> Result<Jet> {
        let f0 = self.coeffs[0];
        let mut l = [DualScalar::ZERO; JET_LEN];
        l[0] = f0.ln()?;
        let inv = f0.recip()?;
        for k in 1..=self.order {
            let mut acc = DualScalar::ZERO;
            for j in 1..k {
                acc += l[j].scale(j as f64) * self.coeffs[k - j];
            }
            l[k] = (self.coeffs[k] - acc.scale(1.0 / k as f64)) * inv;
        }
        Ok(Jet {
            coeffs: l,
            order: self.order,
        })
    }

    pub fn sqrt(&self) -> Result<Jet> {
        let mut r = [DualScalar::ZERO; JET_LEN];
        r[0] = self.coeffs[0].sqrt()?;
        let inv2r = r[0].scale(2.0).recip()?;
        for k in 1..=self.order {
            let mut acc = DualScalar::ZERO;
            for j in 1..k {
                acc += r[j] * r[k - j];
            }
            r[k] = (self.coeffs[k] - acc) * inv2r;
        }
        Ok(Jet {
            coeffs: r,
            order: self.order,
        })
    }

    /// `(sin f, cos f)` by the coupled recurrence.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let mut s = [DualScalar::ZERO; JET_LEN];
        let mut c = [DualScalar::ZERO; JET_LEN];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..=self.order {
            let mut sa = DualScalar::ZERO;
            let mut ca = DualScalar::ZERO;
            for j in 1..=k {
                let jf = self.coeffs[j].scale(j as f64);
                sa += jf * c[k - j];
                ca += jf * s[k - j];
            }
            s[k] = sa.scale(1.0 / k as f64);
            c[k] = -ca.scale(1.0 / k as f64);
        }
        (
            Jet {
                coeffs: s,
                order: self.order,
            },
            Jet {
                coeffs: c,
                order: self.order,
            },
        )
    }

    pub fn tan(&self) -> Result<Jet> {
        // Domain check on the value first so the error names tan.
        self.coeffs[0].tan()?;
        let (s, c) = self.sin_cos();
        s.try_div(&c)
    }

    pub fn atan(&self) -> Result<Jet> {
        if self.order == 0 {
            return Ok(Jet::constant(self.coeffs[0].atan()));
        }
        // atan(f)' = f' / (1 + f^2)
        let one = Jet::constant(DualScalar::ONE);
        let q = self.differentiate()?.try_div(&(one + *self * *self))?;
        let mut out = q.integrate(self.coeffs[0].atan());
        out.order = self.order;
        Ok(out)
    }

    pub fn apply(&self, f: AnalyticFn) -> Result<Jet> {
        let out = match f {
            AnalyticFn::Sin => self.sin_cos().0,
            AnalyticFn::Cos => self.sin_cos().1,
            AnalyticFn::Tan => self.tan()?,
            AnalyticFn::Sqrt => self.sqrt()?,
            AnalyticFn::Exp => self.exp()?,
            AnalyticFn::Log => self.ln()?,
            AnalyticFn::Atan => self.atan()?,
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::NonFinite { context: f.name() })
        }
    }

    /// Series composition `self(inner(u))` where `self` is expanded about
    /// `inner(0)`'s real part, i.e. `inner` must have a zero real constant
    /// term. A nonzero dual constant term costs one order.
    pub fn compose(&self, inner: &Jet) -> Result<Jet> {
        if inner.coeffs[0].re != 0.0 {
            return Err(Error::InvalidArgument(
                "series composition needs an inner series with zero real constant term".into(),
            ));
        }
        let mut order = self.order.min(inner.order);
        if inner.coeffs[0].du != 0.0 {
            order = order.saturating_sub(1);
        }
        let mut acc = Jet::constant(self.coeffs[self.order]);
        for k in (0..self.order).rev() {
            acc = acc * *inner + Jet::constant(self.coeffs[k]);
        }
        Ok(Jet::from_coeffs(acc.coeffs, order))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut c = [DualScalar::ZERO; JET_LEN];
        for k in 0..=order {
            c[k] = self.coeffs[k] + rhs.coeffs[k];
        }
        Jet { coeffs: c, order }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map_coeffs(|c| -c)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut c = [DualScalar::ZERO; JET_LEN];
        for k in 0..=order {
            let mut acc = DualScalar::ZERO;
            for j in 0..=k {
                acc += self.coeffs[j] * rhs.coeffs[k - j];
            }
            c[k] = acc;
        }
        Jet { coeffs: c, order }
    }
}

/// Three coordinate jets: a dual space curve expanded about one parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JetVec3(pub [Jet; 3]);

impl JetVec3 {
    pub fn constant(v: DualVec3) -> JetVec3 {
        JetVec3([Jet::constant(v.x), Jet::constant(v.y), Jet::constant(v.z)])
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(Jet::order).min().unwrap_or(0)
    }

    /// `k`-th derivative as a dual vector.
    pub fn derivative(&self, k: usize) -> Result<DualVec3> {
        Ok(DualVec3::new(
            self.0[0].derivative(k)?,
            self.0[1].derivative(k)?,
            self.0[2].derivative(k)?,
        ))
    }

    pub fn value(&self) -> DualVec3 {
        DualVec3::new(self.0[0].value(), self.0[1].value(), self.0[2].value())
    }

    pub fn differentiate(&self) -> Result<JetVec3> {
        Ok(JetVec3([
            self.0[0].differentiate()?,
            self.0[1].differentiate()?,
            self.0[2].differentiate()?,
        ]))
    }

    pub fn dot(&self, other: &JetVec3) -> Jet {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, o: &JetVec3) -> JetVec3 {
        let [ax, ay, az] = self.0;
        let [bx, by, bz] = o.0;
        JetVec3([ay * bz - az * by, az * bx - ax * bz, ax * by - ay * bx])
    }

    pub fn scale(&self, k: &Jet) -> JetVec3 {
        JetVec3([self.0[0] * *k, self.0[1] * *k, self.0[2] * *k])
    }

    pub fn add(&self, o: &JetVec3) -> JetVec3 {
        JetVec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn sub(&self, o: &JetVec3) -> JetVec3 {
        JetVec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }

    /// Dual norm as a jet; fails when the real part of the value vanishes.
    pub fn norm(&self) -> Result<Jet> {
        self.value().norm()?;
        self.dot(self).sqrt()
    }

    pub fn normalize(&self) -> Result<JetVec3> {
        Ok(self.scale(&self.norm()?.recip()?))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(Jet::is_finite)
    }
}
