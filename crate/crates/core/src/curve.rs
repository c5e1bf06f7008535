//! Dual space curves with jet-exact derivatives, dual arc length and
//! arc-length reparametrization.

use std::fmt;
use std::sync::Arc;

use crate::dual::DualScalar;
use crate::error::{Error, Result};
use crate::jet::{Jet, JetVec3, JET_LEN};
use crate::par;
use crate::quadrature::{self, GL_ORDER};
use crate::tol::{NEWTON_MAX_ITER, NEWTON_TOL, PURE_DUAL_TOL, QUAD_MAX_DEPTH, QUAD_TOL};
use crate::vector::DualVec3;

type Evaluator = dyn Fn(&Jet) -> Result<JetVec3> + Send + Sync;

/// Closed parameter interval of a curve.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Domain {
    pub min: f64,
    pub max: f64,
}

impl Domain {
    pub fn new(min: f64, max: f64) -> Result<Domain> {
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(Error::InvalidArgument(format!(
                "curve domain needs finite min < max, got [{min}, {max}]"
            )));
        }
        Ok(Domain { min, max })
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * (1.0 + self.max.abs().max(self.min.abs()));
        t >= self.min - slack && t <= self.max + slack
    }

    pub fn len(&self) -> f64 {
        self.max - self.min
    }
}

/// A dual space curve `alpha(t) + eps alpha*(t)`.
///
/// The evaluator receives the parameter as a jet and returns the coordinate
/// jets. A real parameter `t` is the seed `t + dt`; a dual parameter, or a
/// parameter that is itself a series in another variable, composes for free.
#[derive(Clone)]
pub struct DualCurve {
    eval: Arc<Evaluator>,
    domain: Domain,
}

impl fmt::Debug for DualCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DualCurve").field("domain", &self.domain).finish_non_exhaustive()
    }
}

/// Position and first three derivatives at a parameter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub param: DualScalar,
    pub pos: DualVec3,
    pub d1: DualVec3,
    pub d2: DualVec3,
    pub d3: DualVec3,
}

impl DualCurve {
    pub fn new<F>(domain: Domain, eval: F) -> DualCurve
    where
        F: Fn(&Jet) -> Result<JetVec3> + Send + Sync + 'static,
    {
        DualCurve {
            eval: Arc::new(eval),
            domain,
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Same evaluator on a different interval.
    pub fn with_domain(&self, domain: Domain) -> DualCurve {
        DualCurve {
            eval: Arc::clone(&self.eval),
            domain,
        }
    }

    pub fn eval_jet(&self, seed: &Jet) -> Result<JetVec3> {
        let t = seed.value().re;
        if !self.domain.contains(t) {
            return Err(Error::OutOfDomain {
                t,
                min: self.domain.min,
                max: self.domain.max,
            });
        }
        let out = (self.eval)(seed)?;
        if !out.is_finite() {
            return Err(Error::NonFinite {
                context: "curve evaluation",
            });
        }
        Ok(out)
    }

    /// Position, `alpha'`, `alpha''` and `alpha'''` at real `t`.
    pub fn eval(&self, t: f64) -> Result<CurvePoint> {
        self.eval_dual(DualScalar::real(t))
    }

    /// Like [`DualCurve::eval`] at a dual parameter `t + eps t*`.
    pub fn eval_dual(&self, t: DualScalar) -> Result<CurvePoint> {
        let j = self.eval_jet(&Jet::variable(t))?;
        Ok(CurvePoint {
            param: t,
            pos: j.value(),
            d1: j.derivative(1)?,
            d2: j.derivative(2)?,
            d3: j.derivative(3)?,
        })
    }

    pub fn position(&self, t: f64) -> Result<DualVec3> {
        Ok(self.eval_jet(&Jet::variable(DualScalar::real(t)))?.value())
    }

    /// `|alpha'(t)|` as a dual number.
    pub fn speed(&self, t: f64) -> Result<DualScalar> {
        let p = self.eval(t)?;
        p.d1.norm().map_err(|_| Error::IrregularCurve { t })
    }
}

/// Dual arc length `int_{t0}^{t1} |alpha'|`.
pub fn arc_length(curve: &DualCurve, t0: f64, t1: f64) -> Result<DualScalar> {
    arc_length_with_tol(curve, t0, t1, QUAD_TOL)
}

pub fn arc_length_with_tol(curve: &DualCurve, t0: f64, t1: f64, tol: f64) -> Result<DualScalar> {
    if !(t0 < t1) {
        return Err(Error::InvalidArgument(format!(
            "arc length needs t0 < t1, got [{t0}, {t1}]"
        )));
    }
    for t in [t0, t1] {
        if !curve.domain.contains(t) {
            return Err(Error::OutOfDomain {
                t,
                min: curve.domain.min,
                max: curve.domain.max,
            });
        }
    }
    quadrature::integrate(&|t| curve.speed(t), t0, t1, tol, QUAD_MAX_DEPTH)
}

/// Cumulative dual arc length at a set of parameter knots.
#[derive(Clone, Debug)]
pub struct ArcLengthTable {
    pub knots: Vec<f64>,
    pub cumulative: Vec<DualScalar>,
    /// Real speed at each knot, used to seed the inverse map.
    pub speeds: Vec<f64>,
    pub quadrature_order: usize,
    pub tolerance: f64,
}

impl ArcLengthTable {
    /// Integrate over `panels` equal sub-intervals of the curve domain.
    pub fn build(curve: &DualCurve, panels: usize) -> Result<ArcLengthTable> {
        if panels == 0 {
            return Err(Error::InvalidArgument("arc-length table needs at least one panel".into()));
        }
        let dom = curve.domain();
        let knots = par::linspace(dom.min, dom.max, panels + 1);
        let pieces = par::try_map(panels, |i| arc_length(curve, knots[i], knots[i + 1]))?;
        let speeds = par::try_map(knots.len(), |i| {
            let s = curve.speed(knots[i])?;
            if s.re <= PURE_DUAL_TOL {
                return Err(Error::IrregularCurve { t: knots[i] });
            }
            Ok(s.re)
        })?;
        let mut cumulative = Vec::with_capacity(knots.len());
        let mut acc = DualScalar::ZERO;
        cumulative.push(acc);
        for (i, p) in pieces.into_iter().enumerate() {
            if p.re <= 0.0 {
                return Err(Error::IrregularCurve { t: knots[i] });
            }
            acc += p;
            cumulative.push(acc);
        }
        Ok(ArcLengthTable {
            knots,
            cumulative,
            speeds,
            quadrature_order: GL_ORDER,
            tolerance: QUAD_TOL,
        })
    }

    pub fn total(&self) -> DualScalar {
        *self.cumulative.last().expect("table has at least two knots")
    }

    fn panel_of_param(&self, t: f64) -> usize {
        let i = self.knots.partition_point(|&k| k <= t);
        i.saturating_sub(1).min(self.knots.len() - 2)
    }

    fn panel_of_length(&self, s: f64) -> usize {
        let i = self.cumulative.partition_point(|c| c.re <= s);
        i.saturating_sub(1).min(self.knots.len() - 2)
    }

    /// Dual arc length from the start of the domain to `t`.
    pub fn length_at(&self, curve: &DualCurve, t: f64) -> Result<DualScalar> {
        let i = self.panel_of_param(t);
        let k = self.knots[i];
        if t == k {
            return Ok(self.cumulative[i]);
        }
        let (a, b, sign) = if t > k { (k, t, 1.0) } else { (t, k, -1.0) };
        let part = quadrature::integrate(&|x| curve.speed(x), a, b, 1e-3 * NEWTON_TOL, QUAD_MAX_DEPTH)?;
        Ok(self.cumulative[i] + part.scale(sign))
    }

    /// Real parameter `t` with real arc length `s`, plus the dual arc length
    /// there. Hermite seed on the knot panel, then safeguarded Newton.
    pub fn invert(&self, curve: &DualCurve, s: f64) -> Result<(f64, DualScalar)> {
        let total = self.total().re;
        let slack = 1e-12 * (1.0 + total);
        if s < -slack || s > total + slack {
            return Err(Error::OutOfDomain { t: s, min: 0.0, max: total });
        }
        let s = s.clamp(0.0, total);
        let i = self.panel_of_length(s);
        let (s0, s1) = (self.cumulative[i].re, self.cumulative[i + 1].re);
        let (t0, t1) = (self.knots[i], self.knots[i + 1]);
        let h = s1 - s0;
        let u = ((s - s0) / h).clamp(0.0, 1.0);
        let (m0, m1) = (h / self.speeds[i], h / self.speeds[i + 1]);
        let h00 = 2.0 * u.powi(3) - 3.0 * u * u + 1.0;
        let h10 = u.powi(3) - 2.0 * u * u + u;
        let h01 = -2.0 * u.powi(3) + 3.0 * u * u;
        let h11 = u.powi(3) - u * u;
        let mut t = (h00 * t0 + h10 * m0 + h01 * t1 + h11 * m1).clamp(t0, t1);

        let (mut lo, mut hi) = (t0, t1);
        let tol = NEWTON_TOL * (1.0 + s.abs());
        for _ in 0..NEWTON_MAX_ITER {
            let len = self.length_at(curve, t)?;
            let f = len.re - s;
            if f.abs() <= tol {
                return Ok((t, len));
            }
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let speed = curve.speed(t)?.re;
            let mut next = t - f / speed;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() <= 4.0 * f64::EPSILON * (1.0 + t.abs()) {
                let len = self.length_at(curve, next)?;
                return Ok((next, len));
            }
            t = next;
        }
        Err(Error::QuadratureFailure { a: t0, b: t1, tol })
    }
}

/// Arc-length parametrization of a regular dual curve.
///
/// The real parameter follows the inverse of the real arc length. Unit dual
/// speed additionally needs a dual shift of the parameter,
/// `t*(s) = -L*(t(s)) / |alpha'(t(s))|`, where `L*` is the dual part of the
/// arc length; the reparametrized curve is `alpha(t(s) + eps t*(s))`.
#[derive(Clone, Debug)]
pub struct ArcLengthReparam {
    base: DualCurve,
    table: Arc<ArcLengthTable>,
}

impl ArcLengthReparam {
    pub fn new(base: &DualCurve, samples: usize) -> Result<ArcLengthReparam> {
        let table = ArcLengthTable::build(base, samples)?;
        Ok(ArcLengthReparam {
            base: base.clone(),
            table: Arc::new(table),
        })
    }

    pub fn table(&self) -> &ArcLengthTable {
        &self.table
    }

    pub fn total_length(&self) -> DualScalar {
        self.table.total()
    }

    /// The dual parameter `t(s) + eps t*(s)` of the base curve.
    pub fn parameter_at(&self, s: f64) -> Result<DualScalar> {
        Ok(self.parameter_series(s)?.value())
    }

    /// `t(s0 + w) + eps t*(s0 + w)` as a series in `w`.
    fn parameter_series(&self, s0: f64) -> Result<Jet> {
        let (t0, len) = self.table.invert(&self.base, s0)?;
        let alpha = self.base.eval_jet(&Jet::variable(DualScalar::real(t0)))?;
        let sigma = alpha
            .differentiate()?
            .norm()
            .map_err(|_| Error::IrregularCurve { t: t0 })?;
        let length = sigma.integrate(len);
        let l_re = length.real_part();
        let l_du = length.dual_part();
        let slope = l_re.coeff(1).re;
        if slope <= PURE_DUAL_TOL {
            return Err(Error::IrregularCurve { t: t0 });
        }

        // Revert s0 + w = l_re(delta): delta = (w - sum_{k>=2} l_k delta^k) / l_1.
        let w = Jet::variable(DualScalar::ZERO);
        let mut tail = l_re;
        let mut tail_coeffs = *tail.coeffs();
        tail_coeffs[0] = DualScalar::ZERO;
        tail_coeffs[1] = DualScalar::ZERO;
        tail = Jet::from_coeffs(tail_coeffs, tail.order());
        let inv_slope = DualScalar::real(1.0 / slope);
        let mut delta = w.scale(inv_slope);
        for _ in 0..JET_LEN {
            delta = (w - tail.compose(&delta)?).scale(inv_slope);
        }
        let delta = Jet::from_coeffs(*delta.coeffs(), l_re.order());

        let t_re = delta + Jet::constant(DualScalar::real(t0));
        let sigma_re = sigma.real_part().compose(&delta)?;
        let t_du = -(l_du.compose(&delta)?.try_div(&sigma_re)?);
        Ok(Jet::combine(&t_re, &t_du))
    }

    pub fn into_curve(self) -> Result<DualCurve> {
        let domain = Domain::new(0.0, self.table.total().re)?;
        Ok(DualCurve::new(domain, move |seed: &Jet| {
            let s0 = seed.value().re;
            let series = self.parameter_series(s0)?;
            let shift = *seed - Jet::constant(DualScalar::real(s0));
            let param = series.compose(&shift)?;
            self.base.eval_jet(&param)
        }))
    }
}

/// Unit dual speed reparametrization of `curve` over its whole domain, built
/// from an arc-length table with `samples` panels.
pub fn reparam_by_arclength(curve: &DualCurve, samples: usize) -> Result<DualCurve> {
    ArcLengthReparam::new(curve, samples)?.into_curve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn dual_helix(r: DualScalar, lo: f64, hi: f64) -> DualCurve {
        DualCurve::new(Domain::new(lo, hi).unwrap(), move |t: &Jet| {
            let (s, c) = t.sin_cos();
            let rj = Jet::constant(r);
            Ok(JetVec3([rj * c, rj * s, *t]))
        })
    }

    fn circle(radius: f64, lo: f64, hi: f64) -> DualCurve {
        DualCurve::new(Domain::new(lo, hi).unwrap(), move |t: &Jet| {
            let (s, c) = t.sin_cos();
            let r = Jet::constant(DualScalar::real(radius));
            Ok(JetVec3([r * c, r * s, Jet::constant(DualScalar::ZERO)]))
        })
    }

    fn line() -> DualCurve {
        DualCurve::new(Domain::new(-10.0, 10.0).unwrap(), |t: &Jet| {
            let z = Jet::constant(DualScalar::ZERO);
            Ok(JetVec3([*t, z, z]))
        })
    }

    #[test]
    fn eval_line() {
        let p = line().eval(2.0).unwrap();
        assert_eq!(p.pos, DualVec3::from_real([2.0, 0.0, 0.0]));
        assert_eq!(p.d1, DualVec3::from_real([1.0, 0.0, 0.0]));
        assert_eq!(p.d2, DualVec3::ZERO);
        assert_eq!(p.d3, DualVec3::ZERO);
    }

    #[test]
    fn eval_circle_at_zero() {
        let p = circle(1.0, -1.0, 1.0).eval(0.0).unwrap();
        assert_eq!(p.d1, DualVec3::from_real([0.0, 1.0, 0.0]));
        assert_eq!(p.d2, DualVec3::from_real([-1.0, 0.0, 0.0]));
        assert_eq!(p.d3, DualVec3::from_real([0.0, -1.0, 0.0]));
    }

    #[test]
    fn eval_dual_helix_at_quarter_turn() {
        let p = dual_helix(DualScalar::new(1.0, 1.0), 0.0, 3.0).eval(FRAC_PI_2).unwrap();
        let expect = DualVec3::from_parts([-1.0, 0.0, 1.0], [-1.0, 0.0, 0.0]);
        assert!(p.d1.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn out_of_domain() {
        assert!(matches!(line().eval(11.0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn arc_length_examples() {
        let l = arc_length(&circle(1.0, 0.0, 2.0 * PI), 0.0, 2.0 * PI).unwrap();
        assert_relative_eq!(l.re, 2.0 * PI, epsilon = 1e-12);
        assert!(l.du.abs() < 1e-12);

        let l = arc_length(&dual_helix(DualScalar::new(1.0, 1.0), 0.0, 1.0), 0.0, 1.0).unwrap();
        let r2 = 2f64.sqrt();
        assert_relative_eq!(l.re, r2, epsilon = 1e-12);
        assert_relative_eq!(l.du, r2 / 2.0, epsilon = 1e-12);

        let l = arc_length(&line(), 0.0, 5.0).unwrap();
        assert_relative_eq!(l.re, 5.0, epsilon = 1e-12);
        assert_eq!(l.du, 0.0);
    }

    #[test]
    fn arc_length_detects_irregularity() {
        let cusp = DualCurve::new(Domain::new(-1.0, 1.0).unwrap(), |t: &Jet| {
            let z = Jet::constant(DualScalar::ZERO);
            Ok(JetVec3([*t * *t, z, z]))
        });
        // The GL nodes straddle t = 0, so the table's knot check catches it.
        assert!(matches!(
            ArcLengthTable::build(&cusp, 2),
            Err(Error::IrregularCurve { t }) if t == 0.0
        ));
    }

    #[test]
    fn arc_length_additive() {
        let c = dual_helix(DualScalar::new(2.0, -0.5), 0.0, 4.0);
        let a = arc_length(&c, 0.3, 1.7).unwrap();
        let b = arc_length(&c, 1.7, 3.9).unwrap();
        let ab = arc_length(&c, 0.3, 3.9).unwrap();
        assert!((a + b).max_abs_diff(ab) < 1e-10);
    }

    #[test]
    fn reparam_circle_radius_two() {
        let c = reparam_by_arclength(&circle(2.0, 0.0, 3.0), 8).unwrap();
        assert_relative_eq!(c.domain().max, 6.0, epsilon = 1e-12);
        for s in [0.1, 1.0, 2.5, 4.0, 5.9] {
            let v = c.speed(s).unwrap();
            assert!(v.max_abs_diff(DualScalar::ONE) < 1e-8, "speed {v} at {s}");
            let p = c.eval(s).unwrap().pos;
            let expect = [2.0 * (s / 2.0).cos(), 2.0 * (s / 2.0).sin(), 0.0];
            assert!(p.max_abs_diff(&DualVec3::from_real(expect)) < 1e-9);
        }
    }

    #[test]
    fn reparam_identity_on_unit_speed() {
        let r = ArcLengthReparam::new(&circle(1.0, 0.5, 2.5), 4).unwrap();
        for s in [0.0, 0.3, 1.1, 2.0] {
            let t = r.parameter_at(s).unwrap();
            assert!((t.re - (0.5 + s)).abs() < 1e-8);
            assert!(t.du.abs() < 1e-8);
        }
    }

    #[test]
    fn reparam_dual_helix() {
        let c = reparam_by_arclength(&dual_helix(DualScalar::new(1.0, 1.0), 0.0, 6.0), 16).unwrap();
        for i in 0..50 {
            let s = c.domain().max * (i as f64 + 0.37) / 50.0;
            let v = c.speed(s).unwrap();
            assert!(v.max_abs_diff(DualScalar::ONE) < 1e-8, "speed {v} at {s}");
        }
    }
}
