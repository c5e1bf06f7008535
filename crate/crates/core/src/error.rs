use thiserror::Error;

use crate::dsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants carry the curve parameter where one is meaningful so that callers
/// (the CLI in particular) can point at the offending sample.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a pure-dual number (real part {re:e})")]
    PureDualDivisor { re: f64 },

    #[error("{func}: argument {re:e} outside the real domain")]
    Domain { func: &'static str, re: f64 },

    #[error("non-finite value produced by {context}")]
    NonFinite { context: &'static str },

    #[error("dual vector has a (numerically) zero real part, norm {norm:e}")]
    PureDualVector { norm: f64 },

    #[error("vector is not a dual unit vector (norm {re:e} + eps {du:e})")]
    NotUnit { re: f64, du: f64 },

    #[error("dual angle is degenerate: vectors are (anti)parallel")]
    DegenerateAngle,

    #[error("parameter {t} outside curve domain [{min}, {max}]")]
    OutOfDomain { t: f64, min: f64, max: f64 },

    #[error("curve is not regular at t = {t}")]
    IrregularCurve { t: f64 },

    #[error("quadrature on [{a}, {b}] did not converge to {tol:e}")]
    QuadratureFailure { a: f64, b: f64, tol: f64 },

    #[error("curvature is pure-dual at t = {t}; Frenet frame undefined")]
    PureDualCurvature { t: f64 },

    #[error("involute cusp at s = {s}: c - s is not positive there")]
    CuspPoint { s: f64 },

    #[error("kappa^2 + tau^2 is pure-dual at s = {s}")]
    DegenerateDenominator { s: f64 },

    #[error("curve is not planar: max |tau| = {max_torsion:e} exceeds {tol:e}")]
    NotPlanar { max_torsion: f64, tol: f64 },

    #[error("curve is not unit speed: |alpha'| = {speed_re} + eps {speed_du} at s = {s}")]
    NotUnitSpeed { s: f64, speed_re: f64, speed_du: f64 },

    #[error("line direction is the zero vector")]
    ZeroDirection,

    #[error("not a dual unit vector: |a| = {norm:e}, <a, a*> = {plucker:e}")]
    NotDualUnit { norm: f64, plucker: f64 },

    #[error("jet order exhausted: need derivatives to order {needed}, have {available}")]
    InsufficientJetOrder { needed: usize, available: usize },

    #[error("evaluation error at bytes {start}..{end}: {message}")]
    EvalDomain {
        start: usize,
        end: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// Parameter value associated with the failure, if any.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            Error::OutOfDomain { t, .. }
            | Error::IrregularCurve { t }
            | Error::PureDualCurvature { t } => Some(t),
            Error::CuspPoint { s }
            | Error::DegenerateDenominator { s }
            | Error::NotUnitSpeed { s, .. } => Some(s),
            _ => None,
        }
    }
}
