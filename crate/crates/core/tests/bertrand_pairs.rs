//! Bertrand pairs and involutes on curves with varying curvature and torsion.

use dualcurve::bertrand::{
    check_bertrand_pair, check_bertrand_pair_with, check_theorem4, fit_linear_relation, involute,
    involute_torsion, offset_curve, Correspondence, RelationFit,
};
use dualcurve::dsl::parse_curve;
use dualcurve::{frenet_at, reparam_by_arclength, Domain, DualCurve, DualScalar};

/// A curve built from the spherical curve
/// `g(t) = (3/4 cos(t/2) + 1/4 cos(3t/2), 3/4 sin(t/2) + 1/4 sin(3t/2), sqrt(3)/2 sin(t/2))`
/// as `a (int g |g'| + c int g x g')`. Its principal normal is `g'/|g'|`, and
/// offsetting by `lambda = a` along it gives a Bertrand mate with
/// `mu = a c`. Curvature and torsion both vary.
fn bertrand_curve(a: &str, c: &str) -> DualCurve {
    let src = format!(
        "[({a})*(sqrt(3)*(6*t + 8*sin(t) + sin(2*t))/32 + ({c})*sqrt(3)*(cos(2*t) - 4*cos(t))/32), \
          ({a})*(sqrt(3)*(6 - 8*cos(t) - cos(2*t))/32 + ({c})*sqrt(3)*(sin(2*t) - 6*t - 4*sin(t))/32), \
          ({a})*(3*sin(t/2)^2/4 + ({c})*(3*t/8 + 3*sin(t)/8))]"
    );
    parse_curve(&src, Domain::new(0.2, 1.6).unwrap()).unwrap()
}

#[test]
fn varying_pair_fits_construction_offset() {
    for (a, c, lambda, mu) in [
        ("1", "0.5", DualScalar::real(1.0), DualScalar::real(0.5)),
        ("2 + eps", "0.5 + eps/4", DualScalar::new(2.0, 1.0), DualScalar::new(1.0, 1.0)),
    ] {
        let alpha = bertrand_curve(a, c);
        let beta = offset_curve(&alpha, lambda);
        let report = check_bertrand_pair(&alpha, &beta, 100, 1e-8).unwrap();
        assert!(report.pass, "{a} {c}: {:?}", report.criteria);
        assert_eq!(report.relation_rank, 2);
        assert!(report.lambda_fit.unwrap().max_abs_diff(lambda) < 1e-7);
        assert!(report.mu_fit.unwrap().max_abs_diff(mu) < 1e-7);
        assert!(report.relation_residual < 1e-7);
        let kappa: Vec<f64> = report.alpha_frames.iter().map(|f| f.kappa.re).collect();
        let spread = kappa.iter().cloned().fold(f64::MIN, f64::max) - kappa.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread > 0.1, "curvature should vary, spread {spread}");
    }
}

#[test]
fn offset_of_varying_curve_is_not_mate_with_wrong_relation() {
    let alpha = bertrand_curve("1", "0.5");
    // A generic offset is still a Bertrand mate only when lambda matches; the
    // relation fit then disagrees with the measured offset.
    let beta = offset_curve(&alpha, DualScalar::real(0.3));
    let r = check_bertrand_pair_with(&alpha, &beta, &Correspondence::Identity, 60, 1e-8).unwrap();
    assert!(r.criteria.normal_alignment.max_deviation > 1e-6 || !r.criteria.angle.pass);
    assert!(!r.pass);
}

#[test]
fn relation_fit_on_sampled_frames() {
    let alpha = bertrand_curve("1", "0.5");
    let (k, t): (Vec<_>, Vec<_>) = (0..30)
        .map(|i| {
            let f = frenet_at(&alpha, 0.25 + 0.045 * i as f64).unwrap();
            (f.kappa, f.tau)
        })
        .unzip();
    let RelationFit::Determined(sol) = fit_linear_relation(&k, &t).unwrap() else {
        panic!("expected rank two");
    };
    assert!(sol.lambda.max_abs_diff(DualScalar::ONE) < 1e-9);
    assert!(sol.mu.max_abs_diff(DualScalar::real(0.5)) < 1e-9);
}

#[test]
fn involute_torsion_formula_matches_frenet() {
    let base = parse_curve("[t, t^2, t^3 + eps*t^2/4]", Domain::new(0.0, 1.2).unwrap()).unwrap();
    let unit = reparam_by_arclength(&base, 24).unwrap();
    let c = DualScalar::new(4.0, 0.5);
    let inv = involute(&unit, c).unwrap();
    let len = unit.domain().max;
    for i in 1..10 {
        let s = len * i as f64 / 10.0;
        let by_formula = involute_torsion(&unit, c, s).unwrap();
        let direct = frenet_at(&inv, s).unwrap().tau;
        assert!(by_formula.re.abs() > 1e-3);
        assert!(by_formula.max_abs_diff(direct) < 1e-6, "s = {s}: {by_formula} vs {direct}");
    }
}

#[test]
fn involutes_of_plane_curve_share_normals() {
    let base = parse_curve("[t, (1 + eps)*t^2/2, 0]", Domain::new(-0.5, 0.8).unwrap()).unwrap();
    let unit = reparam_by_arclength(&base, 16).unwrap();
    let r = check_theorem4(&unit, DualScalar::new(3.0, 0.5), DualScalar::new(4.5, -0.25), 50, 1e-8).unwrap();
    assert!(r.pass, "{:?} {:?}", r.planarity, r.pair.criteria);
    let gap = DualScalar::new(1.5, -0.75);
    assert!(r.pair.distance_samples.iter().all(|d| d.max_abs_diff(gap) < 1e-8));
}
