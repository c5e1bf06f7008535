//! Default numerical thresholds.

/// Absolute bound on the real part below which a dual quantity counts as
/// pure-dual (not invertible).
pub const PURE_DUAL_TOL: f64 = 1e-9;

/// Tolerance on both parts when checking `|v| = 1 + eps 0`.
pub const UNIT_TOL: f64 = 1e-9;

/// Minimum separation of a real angle from 0 or pi for a dual angle to be
/// recoverable from its cosine.
pub const ANGLE_TOL: f64 = 1e-9;

/// Default pass/fail tolerance for the Bertrand and involute checks.
pub const CHECK_TOL: f64 = 1e-8;

/// Default number of samples for the Bertrand and involute checks.
pub const CHECK_SAMPLES: usize = 100;

/// `|sin phi|` below which the tangent angle is treated as degenerate and the
/// curvature/torsion relation is not applicable.
pub const MIN_SIN_ANGLE: f64 = 1e-3;

/// Absolute tolerance for the real part of adaptive quadrature.
pub const QUAD_TOL: f64 = 1e-10;

/// Maximum bisection depth of the adaptive quadrature.
pub const QUAD_MAX_DEPTH: usize = 40;

/// Arc-length inversion: Newton tolerance and iteration cap.
pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;
