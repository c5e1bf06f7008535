//! Turning parsed expressions into curve evaluators.

use std::sync::Arc;

use super::ast::{BinOp, CurveExpr, Expr, ExprKind};
use crate::curve::{DualCurve, Domain};
use crate::dual::DualScalar;
use crate::error::{Error, Result};
use crate::jet::{Jet, JetVec3};

fn located(e: &Expr, err: Error) -> Error {
    match err {
        Error::EvalDomain { .. } => err,
        other => Error::EvalDomain {
            start: e.span.start,
            end: e.span.end,
            message: other.to_string(),
        },
    }
}

/// Evaluate an expression on a parameter jet.
pub fn eval_expr(e: &Expr, t: &Jet) -> Result<Jet> {
    Ok(match &e.kind {
        ExprKind::Num(v) => Jet::constant(DualScalar::real(*v)),
        ExprKind::Param => *t,
        ExprKind::Eps => Jet::constant(DualScalar::EPS),
        ExprKind::Neg(a) => -eval_expr(a, t)?,
        ExprKind::Binary(op, l, r) => {
            let a = eval_expr(l, t)?;
            let b = eval_expr(r, t)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a.try_div(&b).map_err(|err| located(e, err))?,
            }
        }
        ExprKind::Pow(a, n) => eval_expr(a, t)?.powi(*n).map_err(|err| located(e, err))?,
        ExprKind::Call(f, a) => eval_expr(a, t)?.apply(*f).map_err(|err| located(e, err))?,
    })
}

/// A dual constant such as `2 + 0.5*eps`; the parameter is not allowed.
pub fn eval_constant(e: &Expr) -> Result<DualScalar> {
    if e.mentions_param() {
        return Err(Error::InvalidArgument("constant expression must not mention t".into()));
    }
    let v = eval_expr(e, &Jet::constant(DualScalar::ZERO))?.value();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(located(e, Error::NonFinite { context: "constant expression" }))
    }
}

/// Build a dual curve on `domain` from a parsed definition.
pub fn compile(expr: &CurveExpr, domain: Domain) -> DualCurve {
    let expr = Arc::new(expr.clone());
    DualCurve::new(domain, move |t: &Jet| {
        let [x, y, z] = &expr.components;
        Ok(JetVec3([eval_expr(x, t)?, eval_expr(y, t)?, eval_expr(z, t)?]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse, parse_scalar};

    fn dom() -> Domain {
        Domain::new(-10.0, 10.0).unwrap()
    }

    #[test]
    fn circle_evaluates() {
        let c = compile(&parse("[cos(t), sin(t), 0]").unwrap(), dom());
        let p = c.eval(0.4).unwrap();
        assert!((p.pos.x.re - 0.4f64.cos()).abs() < 1e-15);
        assert!((p.d1.y.re - 0.4f64.cos()).abs() < 1e-15);
        assert!((p.d2.x.re + 0.4f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn dual_coefficients() {
        let c = compile(&parse("[(1+eps)*cos(t), (1+eps)*sin(t), t]").unwrap(), dom());
        let p = c.eval(0.0).unwrap();
        assert_eq!(p.pos.x, DualScalar::new(1.0, 1.0));
        assert_eq!(p.d1.y, DualScalar::new(1.0, 1.0));
        assert_eq!(p.d1.z, DualScalar::ONE);
    }

    #[test]
    fn domain_error_has_span() {
        let src = "[t, sqrt(t - 1), 0]";
        let c = compile(&parse(src).unwrap(), dom());
        let Err(Error::EvalDomain { start, end, .. }) = c.eval(0.5) else {
            panic!("expected an evaluation error");
        };
        assert_eq!(&src[start..end], "sqrt(t - 1)");
        assert!(c.eval(2.0).is_ok());
    }

    #[test]
    fn constants() {
        assert_eq!(eval_constant(&parse_scalar("1+eps*2").unwrap()).unwrap(), DualScalar::new(1.0, 2.0));
        assert_eq!(eval_constant(&parse_scalar("(2+eps)^2").unwrap()).unwrap(), DualScalar::new(4.0, 4.0));
        assert!(eval_constant(&parse_scalar("t").unwrap()).is_err());
        assert!(matches!(eval_constant(&parse_scalar("1/eps").unwrap()), Err(Error::EvalDomain { .. })));
    }
}
