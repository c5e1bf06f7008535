//! A small expression language for dual curves.
//!
//! A curve is written as `[x(t), y(t), z(t)]`. Each component may use
//! numbers, the parameter `t`, the dual unit `eps`, `+ - * /`, integer powers
//! `^n` and the functions `sin cos tan sqrt exp log atan`.

pub mod ast;
mod compile;
mod format;
mod parser;

pub use ast::{BinOp, CurveExpr, Expr, ExprKind, Span};
pub use compile::{compile, eval_constant, eval_expr};
pub use format::{format, format_expr};
pub use parser::{parse, parse_scalar, ParseError};

use crate::curve::{DualCurve, Domain};
use crate::dual::DualScalar;
use crate::error::Result;

/// Parse and evaluate a dual constant such as `1 + 0.5*eps`.
pub fn parse_dual_scalar(src: &str) -> Result<DualScalar> {
    eval_constant(&parse_scalar(src)?)
}

/// Parse a curve definition and compile it on `domain`.
pub fn parse_curve(src: &str, domain: Domain) -> Result<DualCurve> {
    Ok(compile(&parse(src)?, domain))
}
