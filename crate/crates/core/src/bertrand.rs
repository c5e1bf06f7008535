//! Bertrand offsets, the Bertrand pair checks, involutes and involute torsion.
//!
//! Offsets and involutes are built at the jet level, so their Frenet data is
//! as accurate as that of the base curve.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::curve::{Domain, DualCurve};
use crate::dual::DualScalar;
use crate::error::{Error, Result};
use crate::frenet::{curvature_jets, frenet_at, frenet_at_dual, FrenetData};
use crate::jet::{Jet, JetVec3};
use crate::par;
use crate::tol::{MIN_SIN_ANGLE, NEWTON_MAX_ITER, PURE_DUAL_TOL};
use crate::vector::{real3, DualAngle, DualVec3};

/// Allowed deviation of `|alpha'|` from `1 + eps 0` for curves that must be
/// parametrized by arc length.
pub const UNIT_SPEED_TOL: f64 = 1e-8;

/// Principal normal of a curve as a jet: Gram-Schmidt of `alpha''` against
/// `alpha'`. Loses two orders.
fn normal_jet(a: &JetVec3, t: f64) -> Result<(JetVec3, JetVec3)> {
    let v = a.differentiate()?;
    let w = v.differentiate()?;
    let tangent = v.normalize().map_err(|_| Error::IrregularCurve { t })?;
    let ortho = w.sub(&tangent.scale(&w.dot(&tangent)));
    let normal = ortho.normalize().map_err(|_| Error::PureDualCurvature { t })?;
    Ok((tangent, normal))
}

/// `beta = alpha + lambda N`.
pub fn offset_curve(alpha: &DualCurve, lambda: DualScalar) -> DualCurve {
    if lambda == DualScalar::ZERO {
        return alpha.clone();
    }
    let base = alpha.clone();
    DualCurve::new(alpha.domain(), move |seed: &Jet| {
        let t = seed.value().re;
        let a = base.eval_jet(seed)?;
        let (_, normal) = normal_jet(&a, t)?;
        Ok(a.add(&normal.scale(&Jet::constant(lambda))))
    })
}

/// How a parameter of the first curve is matched to one of the second.
#[derive(Clone, Default)]
pub enum Correspondence {
    /// Same parameter value on both curves.
    Identity,
    /// Foot of the perpendicular from `alpha(t)` to `beta`, found by Newton's
    /// method seeded at `t`. The dual part of the matched parameter solves the
    /// dual perpendicularity condition to first order.
    #[default]
    NearestPoint,
    Custom(Arc<dyn Fn(f64) -> Result<DualScalar> + Send + Sync>),
}

impl fmt::Debug for Correspondence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Correspondence::Identity => f.write_str("Identity"),
            Correspondence::NearestPoint => f.write_str("NearestPoint"),
            Correspondence::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A matched parameter `u(t)` on the second curve with `du/dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Match {
    u: DualScalar,
    du_dt: DualScalar,
}

const FD_STEP: f64 = 1e-6;

fn nearest_point(alpha: &DualCurve, beta: &DualCurve, t: f64) -> Result<Match> {
    let a = alpha.eval(t)?;
    let ar = a.pos.re();
    let dom = beta.domain();
    let mut u = t.clamp(dom.min, dom.max);
    let mut converged = false;
    for _ in 0..NEWTON_MAX_ITER {
        let b = beta.eval(u)?;
        let diff = real3::sub(b.pos.re(), ar);
        let g = real3::dot(diff, b.d1.re());
        let gp = real3::dot(b.d1.re(), b.d1.re()) + real3::dot(diff, b.d2.re());
        if !(gp > 0.0) {
            return Err(Error::IrregularCurve { t: u });
        }
        let next = (u - g / gp).clamp(dom.min, dom.max);
        let step = (next - u).abs();
        u = next;
        if step <= 1e-14 * (1.0 + u.abs()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::InvalidArgument(format!(
            "nearest-point correspondence did not converge at t = {t}"
        )));
    }
    let b = beta.eval(u)?;
    let diff = b.pos - a.pos;
    let g = diff.dot(&b.d1);
    let gp = real3::dot(b.d1.re(), b.d1.re()) + real3::dot(diff.re(), b.d2.re());
    let u = DualScalar::new(u, -g.du / gp);
    // Implicit differentiation of <beta(u) - alpha(t), beta'(u)> = 0, in dual
    // arithmetic at the dual parameter.
    let b = beta.eval_dual(u)?;
    let diff = b.pos - a.pos;
    let du_dt = a.d1.dot(&b.d1).div(b.d1.dot(&b.d1) + diff.dot(&b.d2))?;
    Ok(Match { u, du_dt })
}

impl Correspondence {
    fn matched(&self, alpha: &DualCurve, beta: &DualCurve, t: f64) -> Result<Match> {
        match self {
            Correspondence::Identity => Ok(Match {
                u: DualScalar::real(t),
                du_dt: DualScalar::ONE,
            }),
            Correspondence::NearestPoint => nearest_point(alpha, beta, t),
            Correspondence::Custom(f) => {
                let u = f(t)?;
                let du_dt = (f(t + FD_STEP)? - f(t - FD_STEP)?).scale(0.5 / FD_STEP);
                Ok(Match { u, du_dt })
            }
        }
    }
}

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Criterion {
    pub pass: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// False when the hypothesis of the check does not hold for the pair; such
    /// a criterion counts as passed.
    pub applicable: bool,
}

impl Criterion {
    fn measured(max_deviation: f64, tolerance: f64) -> Criterion {
        Criterion {
            pass: max_deviation <= tolerance,
            max_deviation,
            tolerance,
            applicable: true,
        }
    }

    fn not_applicable(tolerance: f64) -> Criterion {
        Criterion {
            pass: true,
            max_deviation: 0.0,
            tolerance,
            applicable: false,
        }
    }
}

fn mean(xs: &[DualScalar]) -> DualScalar {
    let n = xs.len().max(1) as f64;
    xs.iter().copied().sum::<DualScalar>().scale(1.0 / n)
}

/// Largest deviation of the samples from their mean, over both parts.
fn spread(xs: &[DualScalar]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| x.max_abs_diff(m)).fold(0.0, f64::max)
}

fn check_args(n: usize, tol: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Dual distance `|beta - alpha|`; zero when the points coincide in both
/// parts.
fn dual_distance(diff: &DualVec3) -> Result<DualScalar> {
    let (re, du) = (real3::norm(diff.re()), real3::norm(diff.du()));
    if re <= PURE_DUAL_TOL {
        if du <= PURE_DUAL_TOL {
            return Ok(DualScalar::ZERO);
        }
        return Err(Error::PureDualVector { norm: re });
    }
    diff.norm()
}

fn sample_params(alpha: &DualCurve, n: usize) -> Vec<f64> {
    let d = alpha.domain();
    par::cell_centers(d.min, d.max, n)
}

/// Sampled distances with a pass/fail verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceCheck {
    pub samples: Vec<DualScalar>,
    pub criterion: Criterion,
}

/// `|beta(u(t)) - alpha(t)|` is constant.
pub fn check_distance_constant(
    alpha: &DualCurve,
    beta: &DualCurve,
    pairing: &Correspondence,
    n: usize,
    tol: f64,
) -> Result<DistanceCheck> {
    check_args(n, tol)?;
    let ts = sample_params(alpha, n);
    let samples = par::try_map(n, |i| {
        let m = pairing.matched(alpha, beta, ts[i])?;
        let a = alpha.eval(ts[i])?.pos;
        let b = beta.eval_dual(m.u)?.pos;
        dual_distance(&(b - a))
    })?;
    let criterion = Criterion::measured(spread(&samples), tol);
    Ok(DistanceCheck { samples, criterion })
}

/// Sampled tangent angles with a pass/fail verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleCheck {
    /// `<T, T°>`, the dual cosine of the angle.
    pub cos_samples: Vec<DualScalar>,
    /// `None` where the tangents are (anti)parallel.
    pub angle_samples: Vec<Option<DualAngle>>,
    /// Deviation of the dual angle itself, when every sample has
    /// `sin phi >= MIN_SIN_ANGLE`.
    pub angle_deviation: Option<f64>,
    pub criterion: Criterion,
}

fn angle_check(tangents: &[(DualVec3, DualVec3)], tol: f64) -> AngleCheck {
    let cos_samples: Vec<DualScalar> = tangents.iter().map(|(a, b)| a.dot(b)).collect();
    let angle_samples: Vec<Option<DualAngle>> =
        tangents.iter().map(|(a, b)| a.dual_angle(b).ok()).collect();
    let min_sin = angle_samples
        .iter()
        .map(|a| a.map_or(0.0, |a| a.phi.sin()))
        .fold(f64::INFINITY, f64::min);
    let cos_dev = spread(&cos_samples);
    let angle_deviation = (min_sin >= MIN_SIN_ANGLE).then(|| {
        let duals: Vec<DualScalar> = angle_samples.iter().flatten().map(|a| a.as_dual()).collect();
        spread(&duals)
    });
    // A constant cosine pins the angle only up to the conditioning 1/sin(phi).
    let pass = cos_dev <= tol && angle_deviation.map_or(true, |d| d <= tol / min_sin);
    AngleCheck {
        cos_samples,
        angle_samples,
        angle_deviation,
        criterion: Criterion {
            pass,
            max_deviation: cos_dev,
            tolerance: tol,
            applicable: true,
        },
    }
}

/// The dual angle between `T` and `T°` is constant.
pub fn check_angle_constant(
    alpha: &DualCurve,
    beta: &DualCurve,
    pairing: &Correspondence,
    n: usize,
    tol: f64,
) -> Result<AngleCheck> {
    check_args(n, tol)?;
    let ts = sample_params(alpha, n);
    let tangents = par::try_map(n, |i| {
        let m = pairing.matched(alpha, beta, ts[i])?;
        Ok((frenet_at(alpha, ts[i])?.tangent, frenet_at_dual(beta, m.u)?.tangent))
    })?;
    Ok(angle_check(&tangents, tol))
}

/// `lambda kappa + mu tau = 1` solved at one choice of the free parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RelationSolution {
    pub lambda: DualScalar,
    pub mu: DualScalar,
    pub residual: f64,
}

/// The one-parameter family left when the samples do not determine both
/// coefficients: `lambda kappa_bar + mu tau_bar = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearFamily {
    pub kappa: DualScalar,
    pub tau: DualScalar,
    #[serde(skip)]
    samples: Vec<(DualScalar, DualScalar)>,
}

fn relation_residual(samples: &[(DualScalar, DualScalar)], lambda: DualScalar, mu: DualScalar) -> f64 {
    samples
        .iter()
        .map(|&(k, t)| (lambda * k + mu * t).max_abs_diff(DualScalar::ONE))
        .fold(0.0, f64::max)
}

impl LinearFamily {
    pub fn solve_with_lambda(&self, lambda: DualScalar) -> Result<RelationSolution> {
        let mu = (DualScalar::ONE - lambda * self.kappa).div(self.tau)?;
        Ok(self.solution(lambda, mu))
    }

    pub fn solve_with_mu(&self, mu: DualScalar) -> Result<RelationSolution> {
        let lambda = (DualScalar::ONE - mu * self.tau).div(self.kappa)?;
        Ok(self.solution(lambda, mu))
    }

    /// Residual of an arbitrary `(lambda, mu)` over the samples.
    pub fn solution(&self, lambda: DualScalar, mu: DualScalar) -> RelationSolution {
        RelationSolution {
            lambda,
            mu,
            residual: relation_residual(&self.samples, lambda, mu),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "rank", rename_all = "snake_case")]
pub enum RelationFit {
    Determined(RelationSolution),
    Underdetermined(LinearFamily),
}

/// Relative size of the smaller singular value below which the sample matrix
/// counts as rank one.
const RANK_TOL: f64 = 1e-7;

/// Least-squares fit of `lambda kappa_i + mu tau_i = 1` over dual numbers.
///
/// Real parts come from the real normal equations; dual parts from their
/// first-order perturbation.
pub fn fit_linear_relation(kappa: &[DualScalar], tau: &[DualScalar]) -> Result<RelationFit> {
    if kappa.len() != tau.len() || kappa.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "relation fit needs two equally long sample lists of length >= 2, got {} and {}",
            kappa.len(),
            tau.len()
        )));
    }
    let samples: Vec<(DualScalar, DualScalar)> = kappa.iter().copied().zip(tau.iter().copied()).collect();
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(k, t) in &samples {
        a11 += k.re * k.re;
        a12 += k.re * t.re;
        a22 += t.re * t.re;
        b1 += k.re;
        b2 += t.re;
    }
    let tr = a11 + a22;
    let det = a11 * a22 - a12 * a12;
    let disc = ((a11 - a22).powi(2) + 4.0 * a12 * a12).sqrt();
    let (e1, e2) = (0.5 * (tr + disc), 0.5 * (tr - disc).max(0.0));
    if !(e1 > 0.0) || (e2 / e1).sqrt() < RANK_TOL {
        return Ok(RelationFit::Underdetermined(LinearFamily {
            kappa: mean(kappa),
            tau: mean(tau),
            samples,
        }));
    }
    let solve = |r1: f64, r2: f64| ((a22 * r1 - a12 * r2) / det, (a11 * r2 - a12 * r1) / det);
    let (lr, mr) = solve(b1, b2);
    // d/d eps of M^T M x = M^T 1:
    // M^T M x* = -M^T M* x + M*^T (1 - M x).
    let (mut c1, mut c2) = (0.0, 0.0);
    for &(k, t) in &samples {
        let pert = k.du * lr + t.du * mr;
        let res = 1.0 - (k.re * lr + t.re * mr);
        c1 += -k.re * pert + k.du * res;
        c2 += -t.re * pert + t.du * res;
    }
    let (ld, md) = solve(c1, c2);
    let (lambda, mu) = (DualScalar::new(lr, ld), DualScalar::new(mr, md));
    Ok(RelationFit::Determined(RelationSolution {
        lambda,
        mu,
        residual: relation_residual(&samples, lambda, mu),
    }))
}

/// Per-criterion verdicts of a Bertrand check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BertrandCriteria {
    /// `|N x N°|` vanishes.
    pub normal_alignment: Criterion,
    pub distance: Criterion,
    pub angle: Criterion,
    /// `lambda kappa + mu tau = 1`.
    pub relation: Criterion,
    /// `(ds°/ds) T° = (1 - lambda kappa) T + lambda tau B`.
    pub frenet_identity: Criterion,
}

impl BertrandCriteria {
    pub fn all_pass(&self) -> bool {
        [self.normal_alignment, self.distance, self.angle, self.relation, self.frenet_identity]
            .iter()
            .all(|c| c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BertrandReport {
    pub parameters: Vec<f64>,
    /// Matched parameter on the second curve.
    pub correspondence: Vec<DualScalar>,
    pub distance_samples: Vec<DualScalar>,
    pub cos_samples: Vec<DualScalar>,
    pub angle_samples: Vec<Option<DualAngle>>,
    pub angle_deviation: Option<f64>,
    /// Real and dual magnitudes of `N x N°`.
    pub normal_alignment: Vec<[f64; 2]>,
    /// Mean of `<beta - alpha, N>`: the signed offset along the normal.
    pub lambda_estimate: DualScalar,
    pub lambda_fit: Option<DualScalar>,
    pub mu_fit: Option<DualScalar>,
    pub relation_residual: f64,
    /// Rank of the sampled `(kappa, tau)` matrix.
    pub relation_rank: usize,
    /// `ds°/ds` at each sample and its spread (both parts).
    pub speed_ratio: Vec<DualScalar>,
    pub speed_ratio_variation: f64,
    pub frenet_identity_residual: Vec<f64>,
    pub criteria: BertrandCriteria,
    pub pass: bool,
    #[serde(skip)]
    pub alpha_frames: Vec<FrenetData>,
    #[serde(skip)]
    pub beta_frames: Vec<FrenetData>,
}

struct PairSample {
    t: f64,
    m: Match,
    fa: FrenetData,
    fb: FrenetData,
    distance: DualScalar,
    lambda: DualScalar,
}

/// Check a candidate Bertrand pair under the nearest-point correspondence.
pub fn check_bertrand_pair(alpha: &DualCurve, beta: &DualCurve, n: usize, tol: f64) -> Result<BertrandReport> {
    check_bertrand_pair_with(alpha, beta, &Correspondence::NearestPoint, n, tol)
}

pub fn check_bertrand_pair_with(
    alpha: &DualCurve,
    beta: &DualCurve,
    pairing: &Correspondence,
    n: usize,
    tol: f64,
) -> Result<BertrandReport> {
    check_args(n, tol)?;
    let ts = sample_params(alpha, n);
    let samples = par::try_map(n, |i| {
        let t = ts[i];
        let m = pairing.matched(alpha, beta, t)?;
        let pa = alpha.eval(t)?;
        let pb = beta.eval_dual(m.u)?;
        let fa = frenet_at(alpha, t)?;
        let fb = frenet_at_dual(beta, m.u)?;
        let diff = pb.pos - pa.pos;
        Ok(PairSample {
            t,
            m,
            fa,
            fb,
            distance: dual_distance(&diff)?,
            lambda: diff.dot(&fa.normal),
        })
    })?;

    let normal_alignment: Vec<[f64; 2]> = samples
        .iter()
        .map(|p| {
            let c = p.fa.normal.cross(&p.fb.normal);
            [real3::norm(c.re()), real3::norm(c.du())]
        })
        .collect();
    let align_dev = normal_alignment.iter().map(|a| a[0].max(a[1])).fold(0.0, f64::max);

    let distance_samples: Vec<DualScalar> = samples.iter().map(|p| p.distance).collect();
    let distance = Criterion::measured(spread(&distance_samples), tol);

    let tangents: Vec<(DualVec3, DualVec3)> = samples.iter().map(|p| (p.fa.tangent, p.fb.tangent)).collect();
    let angles = angle_check(&tangents, tol);

    let lambdas: Vec<DualScalar> = samples.iter().map(|p| p.lambda).collect();
    let lambda_estimate = mean(&lambdas);

    let speed_ratio = samples
        .iter()
        .map(|p| (p.fb.speed * p.m.du_dt).div(p.fa.speed))
        .collect::<Result<Vec<_>>>()?;
    let speed_ratio_variation = spread(&speed_ratio);
    let frenet_identity_residual: Vec<f64> = samples
        .iter()
        .zip(&speed_ratio)
        .map(|(p, &ratio)| {
            let lhs = p.fb.tangent.scale(ratio);
            let rhs = p.fa.tangent.scale(DualScalar::ONE - lambda_estimate * p.fa.kappa)
                + p.fa.binormal.scale(lambda_estimate * p.fa.tau);
            (lhs - rhs).max_abs()
        })
        .collect();
    let frenet_identity = Criterion::measured(frenet_identity_residual.iter().copied().fold(0.0, f64::max), tol);

    // The relation is only meaningful when the tangents make a proper angle.
    let min_sin = samples
        .iter()
        .map(|p| real3::norm(real3::cross(p.fa.tangent.re(), p.fb.tangent.re())))
        .fold(f64::INFINITY, f64::min);
    let kappas: Vec<DualScalar> = samples.iter().map(|p| p.fa.kappa).collect();
    let taus: Vec<DualScalar> = samples.iter().map(|p| p.fa.tau).collect();
    let (relation, lambda_fit, mu_fit, relation_residual, relation_rank) = if min_sin < MIN_SIN_ANGLE || n < 2 {
        (Criterion::not_applicable(tol), None, None, 0.0, 0)
    } else {
        match fit_linear_relation(&kappas, &taus)? {
            RelationFit::Determined(sol) => (
                Criterion::measured(sol.residual, tol),
                Some(sol.lambda),
                Some(sol.mu),
                sol.residual,
                2,
            ),
            RelationFit::Underdetermined(family) => {
                // mu = lambda cot(phi) with cot(phi) = <T, T°> / <T°, B>.
                let cots = samples
                    .iter()
                    .map(|p| p.fa.tangent.dot(&p.fb.tangent).div(p.fb.tangent.dot(&p.fa.binormal)))
                    .collect::<Result<Vec<_>>>()?;
                let sol = family.solution(lambda_estimate, lambda_estimate * mean(&cots));
                (
                    Criterion::measured(sol.residual, tol),
                    Some(sol.lambda),
                    Some(sol.mu),
                    sol.residual,
                    1,
                )
            }
        }
    };

    let criteria = BertrandCriteria {
        normal_alignment: Criterion::measured(align_dev, tol),
        distance,
        angle: angles.criterion,
        relation,
        frenet_identity,
    };
    Ok(BertrandReport {
        parameters: samples.iter().map(|p| p.t).collect(),
        correspondence: samples.iter().map(|p| p.m.u).collect(),
        distance_samples,
        cos_samples: angles.cos_samples,
        angle_samples: angles.angle_samples,
        angle_deviation: angles.angle_deviation,
        normal_alignment,
        lambda_estimate,
        lambda_fit,
        mu_fit,
        relation_residual,
        relation_rank,
        speed_ratio,
        speed_ratio_variation,
        frenet_identity_residual,
        pass: criteria.all_pass(),
        criteria,
        alpha_frames: samples.iter().map(|p| p.fa).collect(),
        beta_frames: samples.iter().map(|p| p.fb).collect(),
    })
}

/// Involute constant and the arc-length window it is evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvoluteSpec {
    pub c: DualScalar,
    pub window: Domain,
}

impl InvoluteSpec {
    /// Requires `c.re - s > 0` on the whole window.
    pub fn new(c: DualScalar, window: Domain) -> Result<InvoluteSpec> {
        if !c.is_finite() {
            return Err(Error::NonFinite { context: "involute constant" });
        }
        if c.re - window.max <= PURE_DUAL_TOL {
            return Err(Error::CuspPoint { s: c.re });
        }
        Ok(InvoluteSpec { c, window })
    }
}

fn check_unit_speed(alpha: &DualCurve) -> Result<()> {
    let d = alpha.domain();
    for s in par::linspace(d.min, d.max, 3) {
        let v = alpha.speed(s)?;
        if (v.re - 1.0).abs() > UNIT_SPEED_TOL || v.du.abs() > UNIT_SPEED_TOL {
            return Err(Error::NotUnitSpeed {
                s,
                speed_re: v.re,
                speed_du: v.du,
            });
        }
    }
    Ok(())
}

/// `beta(s) = alpha(s) + (c - s) T(s)` for an arc-length parametrized `alpha`.
/// Evaluation fails with `IrregularCurve` where `c.re - s` is not positive.
pub fn involute(alpha: &DualCurve, c: DualScalar) -> Result<DualCurve> {
    check_unit_speed(alpha)?;
    let base = alpha.clone();
    Ok(DualCurve::new(alpha.domain(), move |seed: &Jet| {
        let s = seed.value().re;
        if c.re - s <= PURE_DUAL_TOL {
            return Err(Error::IrregularCurve { t: s });
        }
        let a = base.eval_jet(seed)?;
        let tangent = a
            .differentiate()?
            .normalize()
            .map_err(|_| Error::IrregularCurve { t: s })?;
        let arm = Jet::constant(c) - *seed;
        Ok(a.add(&tangent.scale(&arm)))
    }))
}

/// Involute restricted to the window of `spec`.
pub fn involute_on(alpha: &DualCurve, spec: &InvoluteSpec) -> Result<DualCurve> {
    let window = spec.window;
    let d = alpha.domain();
    if !(d.contains(window.min) && d.contains(window.max)) {
        return Err(Error::OutOfDomain {
            t: if d.contains(window.min) { window.max } else { window.min },
            min: d.min,
            max: d.max,
        });
    }
    Ok(involute(&alpha.with_domain(window), spec.c)?.with_domain(window))
}

/// Torsion of the involute with constant `c` at arc length `s` of the base:
/// `(kappa tau' - kappa' tau) / (kappa (c - s)(kappa^2 + tau^2))`.
pub fn involute_torsion(alpha: &DualCurve, c: DualScalar, s: f64) -> Result<DualScalar> {
    let arm = c - DualScalar::real(s);
    if arm.is_pure_dual(PURE_DUAL_TOL) {
        return Err(Error::CuspPoint { s });
    }
    let j = curvature_jets(alpha, &Jet::variable(DualScalar::real(s))).map_err(|e| match e {
        Error::IrregularCurve { .. } => Error::PureDualCurvature { t: s },
        other => other,
    })?;
    let (k, t) = (j.kappa.value(), j.tau.value());
    if k.is_pure_dual(PURE_DUAL_TOL) {
        return Err(Error::PureDualCurvature { t: s });
    }
    let speed = j.speed.value();
    let dk = j.kappa.derivative(1)?.div(speed)?;
    let dt = j.tau.derivative(1)?.div(speed)?;
    let denom = k * k + t * t;
    if denom.is_pure_dual(PURE_DUAL_TOL) {
        return Err(Error::DegenerateDenominator { s });
    }
    (k * dt - dk * t).div(k * arm * denom)
}

/// Result of checking that two involutes of a plane curve form a Bertrand
/// pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvolutePairReport {
    /// Max `|tau°|` (both parts) of each involute from the torsion formula.
    pub formula_torsion: [f64; 2],
    /// The same from the Frenet apparatus of each involute.
    pub frenet_torsion: [f64; 2],
    pub planarity: Criterion,
    pub pair: BertrandReport,
    pub pass: bool,
}

/// Build the involutes with constants `c1`, `c2` of the plane, arc-length
/// parametrized `alpha` and check them as a Bertrand pair.
pub fn check_theorem4(
    alpha: &DualCurve,
    c1: DualScalar,
    c2: DualScalar,
    n: usize,
    tol: f64,
) -> Result<InvolutePairReport> {
    check_args(n, tol)?;
    let ts = sample_params(alpha, n);
    let base_tau = par::try_map(n, |i| Ok(frenet_at(alpha, ts[i])?.tau.max_abs_diff(DualScalar::ZERO)))?;
    let max_torsion = base_tau.iter().copied().fold(0.0, f64::max);
    if max_torsion > tol {
        return Err(Error::NotPlanar { max_torsion, tol });
    }
    let window = alpha.domain();
    let mut formula_torsion = [0.0; 2];
    let mut frenet_torsion = [0.0; 2];
    let mut involutes = Vec::with_capacity(2);
    for (k, c) in [c1, c2].into_iter().enumerate() {
        let spec = InvoluteSpec::new(c, window)?;
        let inv = involute_on(alpha, &spec)?;
        let by_formula = par::try_map(n, |i| Ok(involute_torsion(alpha, c, ts[i])?.max_abs_diff(DualScalar::ZERO)))?;
        let direct = par::try_map(n, |i| Ok(frenet_at(&inv, ts[i])?.tau.max_abs_diff(DualScalar::ZERO)))?;
        formula_torsion[k] = by_formula.into_iter().fold(0.0, f64::max);
        frenet_torsion[k] = direct.into_iter().fold(0.0, f64::max);
        involutes.push(inv);
    }
    let planarity = Criterion::measured(
        formula_torsion.iter().chain(&frenet_torsion).copied().fold(0.0, f64::max),
        tol,
    );
    let pair = check_bertrand_pair_with(&involutes[0], &involutes[1], &Correspondence::Identity, n, tol)?;
    Ok(InvolutePairReport {
        formula_torsion,
        frenet_torsion,
        pass: planarity.pass && pair.pass,
        planarity,
        pair,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::reparam_by_arclength;
    use std::f64::consts::PI;

    fn helix(r: DualScalar, h: f64, lo: f64, hi: f64) -> DualCurve {
        DualCurve::new(Domain::new(lo, hi).unwrap(), move |t: &Jet| {
            let (s, c) = t.sin_cos();
            let rj = Jet::constant(r);
            Ok(JetVec3([rj * c, rj * s, t.scale(DualScalar::real(h))]))
        })
    }

    fn circle(r: DualScalar, lo: f64, hi: f64) -> DualCurve {
        DualCurve::new(Domain::new(lo, hi).unwrap(), move |t: &Jet| {
            let (s, c) = t.sin_cos();
            let rj = Jet::constant(r);
            Ok(JetVec3([rj * c, rj * s, Jet::constant(DualScalar::ZERO)]))
        })
    }

    #[test]
    fn zero_offset_is_identity() {
        let a = helix(DualScalar::ONE, 1.0, 0.0, 3.0);
        let b = offset_curve(&a, DualScalar::ZERO);
        assert_eq!(a.eval(1.1).unwrap(), b.eval(1.1).unwrap());
    }

    #[test]
    fn helix_offset_is_coaxial_helix() {
        // r = 3, h = 1: N points at the axis, so the mate is the helix of
        // radius 3 - lambda with the same pitch.
        let lambda = DualScalar::new(1.0, 0.5);
        let a = helix(DualScalar::real(3.0), 1.0, 0.0, 4.0);
        let b = offset_curve(&a, lambda);
        let oracle = helix(DualScalar::real(3.0) - lambda, 1.0, 0.0, 4.0);
        for t in [0.1, 1.7, 3.9] {
            let (p, q) = (b.eval(t).unwrap(), oracle.eval(t).unwrap());
            assert!(p.pos.max_abs_diff(&q.pos) < 1e-14);
            assert!(p.d3.max_abs_diff(&q.d3) < 1e-13);
            let (fa, fb) = (frenet_at(&a, t).unwrap(), frenet_at(&b, t).unwrap());
            assert!(fa.normal.cross(&fb.normal).max_abs() < 1e-13);
        }
    }

    #[test]
    fn offset_through_center_degenerates() {
        let a = circle(DualScalar::real(2.0), 0.0, 6.0);
        let b = offset_curve(&a, DualScalar::real(2.0));
        assert!(b.position(1.0).unwrap().max_abs() < 1e-15);
        assert!(matches!(frenet_at(&b, 1.0), Err(Error::PureDualCurvature { .. })));
    }

    #[test]
    fn distance_examples() {
        let a = helix(DualScalar::real(3.0), 1.0, 0.0, 4.0);
        let lambda = DualScalar::new(1.0, 1.0);
        let b = offset_curve(&a, lambda);
        let d = check_distance_constant(&a, &b, &Correspondence::Identity, 50, 1e-9).unwrap();
        assert!(d.criterion.pass);
        assert!(d.samples.iter().all(|s| s.max_abs_diff(lambda) < 1e-12));

        let shifted = Correspondence::Custom(Arc::new(|t: f64| Ok(DualScalar::real(0.5 * t + 0.1))));
        let d = check_distance_constant(&a, &a, &shifted, 50, 1e-9).unwrap();
        assert!(!d.criterion.pass);

        let d = check_distance_constant(&a, &a, &Correspondence::Identity, 50, 1e-9).unwrap();
        assert!(d.criterion.pass && d.samples.iter().all(|s| *s == DualScalar::ZERO));
    }

    #[test]
    fn angle_examples() {
        let a = helix(DualScalar::real(3.0), 1.0, 0.0, 4.0);
        let b = offset_curve(&a, DualScalar::new(1.0, 1.0));
        let r = check_angle_constant(&a, &b, &Correspondence::Identity, 50, 1e-9).unwrap();
        assert!(r.criterion.pass);
        assert!(r.angle_deviation.unwrap() < 1e-9);

        let r = check_angle_constant(&a, &a, &Correspondence::Identity, 50, 1e-9).unwrap();
        assert!(r.criterion.pass && r.angle_samples.iter().all(Option::is_none));
        assert!(r.cos_samples.iter().all(|c| c.max_abs_diff(DualScalar::ONE) < 1e-15));

        let other = helix(DualScalar::new(1.0, 0.2), 3.0, 0.0, 8.0);
        let skew = Correspondence::Custom(Arc::new(|t: f64| Ok(DualScalar::real(t * t / 2.0))));
        let r = check_angle_constant(&a, &other, &skew, 50, 1e-9).unwrap();
        assert!(!r.criterion.pass);
    }

    #[test]
    fn helix_relation_is_underdetermined() {
        let k = vec![DualScalar::real(0.5); 10];
        let RelationFit::Underdetermined(f) = fit_linear_relation(&k, &k).unwrap() else {
            panic!("constant samples cannot determine both coefficients");
        };
        let sol = f.solve_with_lambda(DualScalar::ONE).unwrap();
        assert!(sol.mu.max_abs_diff(DualScalar::ONE) < 1e-15);
        assert!(sol.residual < 1e-12);
    }

    #[test]
    fn determined_relation_recovers_coefficients() {
        let (lambda, mu) = (DualScalar::new(2.0, 0.5), DualScalar::new(-1.0, 0.25));
        let mut kappa = Vec::new();
        let mut tau = Vec::new();
        for i in 0..20 {
            let x = 0.1 * i as f64;
            let k = DualScalar::new(1.0 + x, 0.3 * x.sin());
            // tau from the relation: (1 - lambda k) / mu
            kappa.push(k);
            tau.push((DualScalar::ONE - lambda * k).div(mu).unwrap());
        }
        let RelationFit::Determined(sol) = fit_linear_relation(&kappa, &tau).unwrap() else {
            panic!("expected a determined fit");
        };
        assert!(sol.lambda.max_abs_diff(lambda) < 1e-12);
        assert!(sol.mu.max_abs_diff(mu) < 1e-12);
        assert!(sol.residual < 1e-12);
    }

    #[test]
    fn noisy_relation_has_large_residual() {
        use std::iter::successors;
        let xs: Vec<f64> = successors(Some(0.37_f64), |x| Some((x * 9301.0 + 0.4927).fract())).take(40).collect();
        let kappa: Vec<DualScalar> = xs.chunks(2).map(|c| DualScalar::new(c[0], c[1])).collect();
        let tau: Vec<DualScalar> = xs.chunks(2).map(|c| DualScalar::new(c[1] - 0.5, c[0])).collect();
        let RelationFit::Determined(sol) = fit_linear_relation(&kappa, &tau).unwrap() else {
            panic!();
        };
        assert!(sol.residual > 1e-2);
    }

    #[test]
    fn bertrand_pair_examples() {
        let a = helix(DualScalar::real(3.0), 1.0, 0.0, 4.0);
        let lambda = DualScalar::new(0.5, 2.0);
        let b = offset_curve(&a, lambda);
        let r = check_bertrand_pair(&a, &b, 40, 1e-8).unwrap();
        assert!(r.pass, "{:?}", r.criteria);
        assert_eq!(r.relation_rank, 1);
        assert!(r.lambda_estimate.max_abs_diff(lambda) < 1e-12);
        assert!(r.criteria.relation.applicable);
        assert!(r.correspondence.iter().zip(&r.parameters).all(|(u, t)| u.max_abs_diff(DualScalar::real(*t)) < 1e-12));

        let other = helix(DualScalar::real(3.0), 2.5, 0.0, 4.0);
        let r = check_bertrand_pair(&a, &other, 40, 1e-8).unwrap();
        assert!(!r.criteria.normal_alignment.pass);
        assert!(!r.pass);

        let r = check_bertrand_pair(&a, &a, 40, 1e-8).unwrap();
        assert!(r.pass);
        assert_eq!(r.lambda_estimate, DualScalar::ZERO);
        assert!(!r.criteria.relation.applicable);
    }

    fn unit_circle(r: DualScalar, turns: f64) -> DualCurve {
        reparam_by_arclength(&circle(r, 0.0, turns), 16).unwrap()
    }

    #[test]
    fn circle_involute_is_perpendicular() {
        let base = unit_circle(DualScalar::ONE, 5.0);
        let inv = involute(&base, DualScalar::real(2.0 * PI)).unwrap();
        for s in [0.3, 1.9, 4.4] {
            let t0 = frenet_at(&base, s).unwrap().tangent;
            let t1 = frenet_at(&inv, s).unwrap().tangent;
            assert!(t0.dot(&t1).max_abs_diff(DualScalar::ZERO) < 1e-8);
        }
    }

    #[test]
    fn involute_cusp() {
        let base = unit_circle(DualScalar::ONE, 5.0);
        let inv = involute(&base, DualScalar::real(3.0)).unwrap();
        assert_eq!(inv.position(3.0), Err(Error::IrregularCurve { t: 3.0 }));
        assert_eq!(involute_torsion(&base, DualScalar::real(3.0), 3.0), Err(Error::CuspPoint { s: 3.0 }));
        assert!(matches!(
            InvoluteSpec::new(DualScalar::real(3.0), Domain::new(0.0, 4.0).unwrap()),
            Err(Error::CuspPoint { .. })
        ));
    }

    #[test]
    fn involute_needs_unit_speed() {
        let c = circle(DualScalar::real(2.0), 0.0, 1.0);
        assert!(matches!(involute(&c, DualScalar::real(5.0)), Err(Error::NotUnitSpeed { .. })));
    }

    #[test]
    fn dual_circle_involute_is_planar() {
        let base = unit_circle(DualScalar::new(1.0, 1.0), 2.0);
        let c = DualScalar::real(3.0);
        let inv = involute(&base, c).unwrap();
        for s in [0.2, 1.0, 1.8] {
            let p = inv.position(s).unwrap();
            assert!(p.z.max_abs_diff(DualScalar::ZERO) < 1e-12);
            assert!(involute_torsion(&base, c, s).unwrap().max_abs_diff(DualScalar::ZERO) < 1e-9);
            assert!(frenet_at(&inv, s).unwrap().tau.max_abs_diff(DualScalar::ZERO) < 1e-9);
        }
    }

    #[test]
    fn helix_involute_torsion_vanishes() {
        let base = reparam_by_arclength(&helix(DualScalar::new(1.0, 0.5), 1.0, 0.0, 2.0), 16).unwrap();
        let t = involute_torsion(&base, DualScalar::real(10.0), 1.0).unwrap();
        assert!(t.max_abs_diff(DualScalar::ZERO) < 1e-9);
    }

    #[test]
    fn involute_pair_examples() {
        let base = unit_circle(DualScalar::new(1.0, 1.0), 2.0);
        let r = check_theorem4(&base, DualScalar::real(3.0), DualScalar::real(5.0), 30, 1e-8).unwrap();
        assert!(r.pass, "{:?} {:?}", r.planarity, r.pair.criteria);
        for d in &r.pair.distance_samples {
            assert!(d.max_abs_diff(DualScalar::real(2.0)) < 1e-9);
        }

        let r = check_theorem4(&base, DualScalar::real(3.0), DualScalar::real(3.0), 30, 1e-8).unwrap();
        assert!(r.pass);
        assert_eq!(r.pair.lambda_estimate, DualScalar::ZERO);

        let h = reparam_by_arclength(&helix(DualScalar::ONE, 1.0, 0.0, 2.0), 16).unwrap();
        assert!(matches!(
            check_theorem4(&h, DualScalar::real(5.0), DualScalar::real(6.0), 10, 1e-8),
            Err(Error::NotPlanar { .. })
        ));
    }
}
