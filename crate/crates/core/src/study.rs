//! Oriented lines of E^3 and their dual unit vectors (direction + eps moment).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::{PURE_DUAL_TOL, UNIT_TOL};
use crate::vector::{real3, DualAngle, DualVec3};

/// A directed line in Plücker form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientedLine {
    pub direction: [f64; 3],
    /// `p x direction` for any point `p` on the line.
    pub moment: [f64; 3],
}

/// A line recovered from a dual unit vector, with its foot point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineRecord {
    #[serde(flatten)]
    pub line: OrientedLine,
    /// Point of the line closest to the origin, `direction x moment`.
    pub closest_point: [f64; 3],
}

impl OrientedLine {
    pub fn from_point_dir(p: [f64; 3], d: [f64; 3]) -> Result<OrientedLine> {
        let n = real3::norm(d);
        if !(n > PURE_DUAL_TOL) || !p.iter().all(|x| x.is_finite()) {
            return Err(Error::ZeroDirection);
        }
        let direction = real3::scale(d, 1.0 / n);
        Ok(OrientedLine {
            direction,
            moment: real3::cross(p, direction),
        })
    }

    pub fn to_dual_unit(&self) -> DualVec3 {
        DualVec3::from_parts(self.direction, self.moment)
    }

    pub fn closest_point(&self) -> [f64; 3] {
        real3::cross(self.direction, self.moment)
    }

    /// `<direction, moment>`; zero for a valid line.
    pub fn plucker_residual(&self) -> f64 {
        real3::dot(self.direction, self.moment)
    }

    pub fn from_dual_unit(v: &DualVec3) -> Result<LineRecord> {
        let (a, m) = (v.re(), v.du());
        let norm = real3::norm(a);
        let plucker = real3::dot(a, m);
        if (norm - 1.0).abs() > UNIT_TOL || plucker.abs() > UNIT_TOL {
            return Err(Error::NotDualUnit { norm, plucker });
        }
        let line = OrientedLine {
            direction: a,
            moment: m,
        };
        Ok(LineRecord {
            line,
            closest_point: line.closest_point(),
        })
    }

    /// Dual angle between two lines: the angle of their directions plus eps
    /// times their signed common-perpendicular distance.
    pub fn dual_angle(&self, other: &OrientedLine) -> Result<DualAngle> {
        self.to_dual_unit().dual_angle(&other.to_dual_unit())
    }
}

/// `|<d1 x d2, p2 - p1>| / |d1 x d2|` for non-parallel lines.
pub fn skew_distance(p1: [f64; 3], d1: [f64; 3], p2: [f64; 3], d2: [f64; 3]) -> f64 {
    let n = real3::cross(d1, d2);
    real3::dot(n, real3::sub(p2, p1)).abs() / real3::norm(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn line_from_point_dir_examples() {
        let l = OrientedLine::from_point_dir([0.0; 3], [1.0, 0.0, 0.0]).unwrap();
        assert_eq!(l.direction, [1.0, 0.0, 0.0]);
        assert_eq!(l.moment, [0.0; 3]);

        let l = OrientedLine::from_point_dir([0.0, 1.0, 0.0], [1.0, 0.0, 0.0]).unwrap();
        assert_eq!(l.moment, [0.0, 0.0, -1.0]);
        assert_eq!(l.plucker_residual(), 0.0);

        let p = [0.3, -1.2, 2.0];
        let d = [0.5, 0.25, -1.0];
        let a = OrientedLine::from_point_dir(p, d).unwrap();
        let b = OrientedLine::from_point_dir(real3::add(p, d), d).unwrap();
        assert!(real3::max_abs_diff(a.moment, b.moment) < 1e-15);

        assert_eq!(OrientedLine::from_point_dir(p, [0.0; 3]), Err(Error::ZeroDirection));
    }

    #[test]
    fn to_dual_unit_examples() {
        let x = OrientedLine::from_point_dir([0.0; 3], [1.0, 0.0, 0.0]).unwrap();
        assert_eq!(x.to_dual_unit(), DualVec3::from_real([1.0, 0.0, 0.0]));
        let l = OrientedLine::from_point_dir([0.0, 1.0, 0.0], [1.0, 0.0, 0.0]).unwrap();
        let v = l.to_dual_unit();
        assert_eq!(v, DualVec3::from_parts([1.0, 0.0, 0.0], [0.0, 0.0, -1.0]));
        assert_eq!(v.norm().unwrap(), crate::DualScalar::ONE);
    }

    #[test]
    fn from_dual_unit_examples() {
        let r = OrientedLine::from_dual_unit(&DualVec3::from_parts([1.0, 0.0, 0.0], [0.0, 0.0, -1.0])).unwrap();
        assert_eq!(r.closest_point, [0.0, 1.0, 0.0]);
        let back = OrientedLine::from_point_dir(r.closest_point, r.line.direction).unwrap();
        assert_eq!(back, r.line);

        let axis = OrientedLine::from_dual_unit(&DualVec3::from_real([1.0, 0.0, 0.0])).unwrap();
        assert_eq!(axis.closest_point, [0.0; 3]);

        assert!(matches!(
            OrientedLine::from_dual_unit(&DualVec3::from_parts([1.0, 0.0, 0.0], [1.0, 0.0, 0.0])),
            Err(Error::NotDualUnit { .. })
        ));
    }

    #[test]
    fn line_dual_angle_examples() {
        let x = OrientedLine::from_point_dir([0.0; 3], [1.0, 0.0, 0.0]).unwrap();
        let y = OrientedLine::from_point_dir([0.0; 3], [0.0, 1.0, 0.0]).unwrap();
        let a = x.dual_angle(&y).unwrap();
        assert!((a.phi - FRAC_PI_2).abs() < 1e-15 && a.phi_star == 0.0);

        let y1 = OrientedLine::from_point_dir([0.0, 0.0, 1.0], [0.0, 1.0, 0.0]).unwrap();
        let a = x.dual_angle(&y1).unwrap();
        assert!((a.phi - FRAC_PI_2).abs() < 1e-15);
        let dist = skew_distance([0.0; 3], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]);
        assert_eq!(dist, 1.0);
        assert!((a.phi_star.abs() - dist).abs() < 1e-15);

        let x2 = OrientedLine::from_point_dir([0.0, 3.0, 0.0], [2.0, 0.0, 0.0]).unwrap();
        assert_eq!(x.dual_angle(&x2), Err(Error::DegenerateAngle));
    }
}
