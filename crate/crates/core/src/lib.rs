//! Differential geometry of dual space curves.
//!
//! A dual curve `alpha(t) + eps alpha*(t)` with `eps^2 = 0` describes a ruled
//! surface, one oriented line per parameter value. This crate evaluates such
//! curves with exact derivatives (Taylor jets over dual numbers), computes the
//! dual Frenet apparatus, checks Bertrand pairs and builds involutes, and maps
//! oriented lines to dual unit vectors and back.

pub mod bertrand;
pub mod curve;
pub mod dsl;
pub mod dual;
pub mod error;
pub mod frenet;
pub mod jet;
pub mod par;
pub mod quadrature;
pub mod study;
pub mod tol;
pub mod vector;

pub use curve::{arc_length, reparam_by_arclength, ArcLengthReparam, ArcLengthTable, CurvePoint, Domain, DualCurve};
pub use dual::{AnalyticFn, DualScalar};
pub use error::{Error, Result};
pub use frenet::{frenet_at, frenet_ode_residual, sample_frenet, FrenetData};
pub use jet::{Jet, JetVec3};
pub use study::{LineRecord, OrientedLine};
pub use vector::{DualAngle, DualVec3};
