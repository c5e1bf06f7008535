//! Dual Frenet apparatus.

use serde::Serialize;

use crate::curve::{CurvePoint, DualCurve};
use crate::dual::DualScalar;
use crate::error::{Error, Result};
use crate::jet::{Jet, JetVec3};
use crate::par;
use crate::tol::PURE_DUAL_TOL;
use crate::vector::{det3, DualVec3};

/// Dual Frenet trihedron with curvature and torsion at one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrenetData {
    pub t: f64,
    #[serde(rename = "T")]
    pub tangent: DualVec3,
    #[serde(rename = "N")]
    pub normal: DualVec3,
    #[serde(rename = "B")]
    pub binormal: DualVec3,
    pub kappa: DualScalar,
    pub tau: DualScalar,
    /// `|alpha'|`, the rate of dual arc length per parameter.
    #[serde(skip)]
    pub speed: DualScalar,
}

pub fn frenet_at(curve: &DualCurve, t: f64) -> Result<FrenetData> {
    frenet_from_point(&curve.eval(t)?)
}

/// Frenet data at a dual parameter value.
pub fn frenet_at_dual(curve: &DualCurve, t: DualScalar) -> Result<FrenetData> {
    frenet_from_point(&curve.eval_dual(t)?)
}

/// `kappa = |a' x a''| / |a'|^3`, `tau = det(a', a'', a''') / |a' x a''|^2`,
/// `T = a'/|a'|`, `N` the normalized part of `a''` orthogonal to `T`,
/// `B = T x N`.
pub fn frenet_from_point(p: &CurvePoint) -> Result<FrenetData> {
    let t = p.param.re;
    let c = p.d1.cross(&p.d2);
    // A stationary point also has a vanishing cross product; report it as
    // vanishing curvature.
    let cross_norm = c.norm().map_err(|_| Error::PureDualCurvature { t })?;
    let speed = p.d1.norm().map_err(|_| Error::IrregularCurve { t })?;
    let tangent = p.d1.scale(speed.recip().map_err(|_| Error::IrregularCurve { t })?);
    let kappa = cross_norm
        .div(speed * speed * speed)
        .map_err(|_| Error::IrregularCurve { t })?;
    if kappa.is_pure_dual(PURE_DUAL_TOL) {
        return Err(Error::PureDualCurvature { t });
    }
    let tau = det3(&p.d1, &p.d2, &p.d3)
        .div(c.dot(&c))
        .map_err(|_| Error::PureDualCurvature { t })?;
    let ortho = p.d2 - tangent.scale(p.d2.dot(&tangent));
    let normal = ortho.normalize().map_err(|_| Error::PureDualCurvature { t })?;
    let binormal = tangent.cross(&normal);
    Ok(FrenetData {
        t,
        tangent,
        normal,
        binormal,
        kappa,
        tau,
        speed,
    })
}

/// Frenet data at `n` evenly spaced parameters (ends included), in order.
pub fn sample_frenet(curve: &DualCurve, from: f64, to: f64, n: usize) -> Result<Vec<FrenetData>> {
    let ts = par::linspace(from, to, n);
    par::try_map(ts.len(), |i| frenet_at(curve, ts[i]))
}

/// Curvature and torsion as jets in the curve parameter, plus the speed jet.
/// Needs the evaluator to deliver order 3 plus however many derivatives of
/// `kappa`, `tau` the caller reads.
#[derive(Clone, Copy, Debug)]
pub struct CurvatureJets {
    pub kappa: Jet,
    pub tau: Jet,
    pub speed: Jet,
}

pub fn curvature_jets(curve: &DualCurve, seed: &Jet) -> Result<CurvatureJets> {
    let t = seed.value().re;
    let a = curve.eval_jet(seed)?;
    let v = a.differentiate()?;
    let w = v.differentiate()?;
    let x = w.differentiate()?;
    let c = v.cross(&w);
    let speed = v.norm().map_err(|_| Error::IrregularCurve { t })?;
    let cn = c.norm().map_err(|_| Error::PureDualCurvature { t })?;
    let kappa = cn
        .try_div(&speed.powi(3)?)
        .map_err(|_| Error::IrregularCurve { t })?;
    let det = triple(&v, &w, &x);
    let tau = det.try_div(&c.dot(&c)).map_err(|_| Error::PureDualCurvature { t })?;
    Ok(CurvatureJets { kappa, tau, speed })
}

fn triple(u: &JetVec3, v: &JetVec3, w: &JetVec3) -> Jet {
    u.dot(&v.cross(w))
}

/// Max-norm residuals (both parts) of the three Frenet equations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrenetResidual {
    pub tangent: f64,
    pub normal: f64,
    pub binormal: f64,
}

impl FrenetResidual {
    pub fn max(&self) -> f64 {
        self.tangent.max(self.normal).max(self.binormal)
    }
}

/// Residuals of `T' = kN`, `N' = -kT + tB`, `B' = -tN` where `'` is a central
/// difference of step `h` in the parameter, converted to dual arc length by
/// dividing by `|alpha'(t)|`.
pub fn frenet_ode_residual(curve: &DualCurve, t: f64, h: f64) -> Result<FrenetResidual> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("finite-difference step must be positive, got {h}")));
    }
    let f = frenet_at(curve, t)?;
    let fp = frenet_at(curve, t + h)?;
    let fm = frenet_at(curve, t - h)?;
    let inv = f.speed.recip()?.scale(1.0 / (2.0 * h));
    let d = |plus: DualVec3, minus: DualVec3| (plus - minus).scale(inv);
    let dt = d(fp.tangent, fm.tangent);
    let dn = d(fp.normal, fm.normal);
    let db = d(fp.binormal, fm.binormal);
    let rt = dt - f.normal.scale(f.kappa);
    let rn = dn + f.tangent.scale(f.kappa) - f.binormal.scale(f.tau);
    let rb = db + f.normal.scale(f.tau);
    Ok(FrenetResidual {
        tangent: rt.max_abs(),
        normal: rn.max_abs(),
        binormal: rb.max_abs(),
    })
}
