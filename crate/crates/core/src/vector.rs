//! Dual 3-vectors: the module `D^3` over the dual numbers.

use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::dual::DualScalar;
use crate::error::{Error, Result};
use crate::tol::{ANGLE_TOL, PURE_DUAL_TOL, UNIT_TOL};

/// Real 3-vector helpers used by the line geometry and the oracles.
pub mod real3 {
    pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    pub fn norm(a: [f64; 3]) -> f64 {
        dot(a, a).sqrt()
    }

    pub fn scale(a: [f64; 3], k: f64) -> [f64; 3] {
        [a[0] * k, a[1] * k, a[2] * k]
    }

    pub fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    pub fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    pub fn max_abs_diff(a: [f64; 3], b: [f64; 3]) -> f64 {
        (0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
    }
}

/// A dual vector `a + eps a*` with `a, a*` in R^3.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "VecParts", into = "VecParts")]
pub struct DualVec3 {
    pub x: DualScalar,
    pub y: DualScalar,
    pub z: DualScalar,
}

#[derive(Serialize, Deserialize)]
struct VecParts {
    re: [f64; 3],
    du: [f64; 3],
}

impl From<VecParts> for DualVec3 {
    fn from(p: VecParts) -> Self {
        DualVec3::from_parts(p.re, p.du)
    }
}

impl From<DualVec3> for VecParts {
    fn from(v: DualVec3) -> Self {
        VecParts {
            re: v.re(),
            du: v.du(),
        }
    }
}

/// Dual angle `phi + eps phi*`, with `phi` in `[0, pi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualAngle {
    pub phi: f64,
    pub phi_star: f64,
}

impl DualAngle {
    pub fn as_dual(self) -> DualScalar {
        DualScalar::new(self.phi, self.phi_star)
    }
}

impl DualVec3 {
    pub const ZERO: DualVec3 = DualVec3 {
        x: DualScalar::ZERO,
        y: DualScalar::ZERO,
        z: DualScalar::ZERO,
    };

    pub const fn new(x: DualScalar, y: DualScalar, z: DualScalar) -> Self {
        DualVec3 { x, y, z }
    }

    pub fn from_parts(re: [f64; 3], du: [f64; 3]) -> Self {
        DualVec3::new(
            DualScalar::new(re[0], du[0]),
            DualScalar::new(re[1], du[1]),
            DualScalar::new(re[2], du[2]),
        )
    }

    pub fn from_real(re: [f64; 3]) -> Self {
        DualVec3::from_parts(re, [0.0; 3])
    }

    pub fn re(&self) -> [f64; 3] {
        [self.x.re, self.y.re, self.z.re]
    }

    pub fn du(&self) -> [f64; 3] {
        [self.x.du, self.y.du, self.z.du]
    }

    pub fn components(&self) -> [DualScalar; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    /// `<a,b> + eps (<a,b*> + <a*,b>)`.
    pub fn dot(&self, other: &DualVec3) -> DualScalar {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &DualVec3) -> DualVec3 {
        DualVec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    /// `|a| + eps <a,a*>/|a|`.
    pub fn norm(&self) -> Result<DualScalar> {
        self.norm_with_tol(PURE_DUAL_TOL)
    }

    pub fn norm_with_tol(&self, tol: f64) -> Result<DualScalar> {
        let re = self.re();
        let n = real3::norm(re);
        if n <= tol || !n.is_finite() {
            return Err(Error::PureDualVector { norm: n });
        }
        Ok(DualScalar::new(n, real3::dot(re, self.du()) / n))
    }

    pub fn normalize(&self) -> Result<DualVec3> {
        let inv = self.norm()?.recip()?;
        Ok(self.scale(inv))
    }

    pub fn scale(&self, k: DualScalar) -> DualVec3 {
        DualVec3::new(self.x * k, self.y * k, self.z * k)
    }

    /// Largest absolute component difference over both parts.
    pub fn max_abs_diff(&self, other: &DualVec3) -> f64 {
        self.components()
            .iter()
            .zip(other.components())
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// Largest absolute component, both parts.
    pub fn max_abs(&self) -> f64 {
        self.max_abs_diff(&DualVec3::ZERO)
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        match self.norm() {
            Ok(n) => (n.re - 1.0).abs() <= tol && n.du.abs() <= tol,
            Err(_) => false,
        }
    }

    /// Dual angle whose dual cosine equals `<u, v>`.
    ///
    /// `phi = atan2(|a x b|, <a,b>)` and `phi* = -<u,v>.du / sin phi`.
    pub fn dual_angle(&self, other: &DualVec3) -> Result<DualAngle> {
        for v in [self, other] {
            let n = v.norm().map_err(|_| Error::NotUnit { re: 0.0, du: 0.0 })?;
            if (n.re - 1.0).abs() > UNIT_TOL || n.du.abs() > UNIT_TOL {
                return Err(Error::NotUnit { re: n.re, du: n.du });
            }
        }
        let c = self.dot(other);
        let (a, b) = (self.re(), other.re());
        let phi = real3::norm(real3::cross(a, b)).atan2(real3::dot(a, b));
        if phi < ANGLE_TOL || std::f64::consts::PI - phi < ANGLE_TOL {
            return Err(Error::DegenerateAngle);
        }
        Ok(DualAngle {
            phi,
            phi_star: -c.du / phi.sin(),
        })
    }
}

/// `det[u; v; w]` evaluated in dual arithmetic.
pub fn det3(u: &DualVec3, v: &DualVec3, w: &DualVec3) -> DualScalar {
    u.x * (v.y * w.z - v.z * w.y) - u.y * (v.x * w.z - v.z * w.x) + u.z * (v.x * w.y - v.y * w.x)
}

impl Add for DualVec3 {
    type Output = DualVec3;
    fn add(self, o: DualVec3) -> DualVec3 {
        DualVec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for DualVec3 {
    type Output = DualVec3;
    fn sub(self, o: DualVec3) -> DualVec3 {
        DualVec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for DualVec3 {
    type Output = DualVec3;
    fn neg(self) -> DualVec3 {
        DualVec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<DualScalar> for DualVec3 {
    type Output = DualVec3;
    fn mul(self, k: DualScalar) -> DualVec3 {
        self.scale(k)
    }
}

impl Index<usize> for DualVec3 {
    type Output = DualScalar;
    fn index(&self, i: usize) -> &DualScalar {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("DualVec3 index {i} out of range"),
        }
    }
}
