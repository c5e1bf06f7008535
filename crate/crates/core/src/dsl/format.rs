//! Canonical text for expressions; `parse(format(e)) == e`.

use std::fmt::Write;

use super::ast::{BinOp, CurveExpr, Expr, ExprKind};

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn prec(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Binary(BinOp::Add | BinOp::Sub, _, _) => PREC_ADD,
        ExprKind::Binary(BinOp::Mul | BinOp::Div, _, _) => PREC_MUL,
        ExprKind::Neg(_) => PREC_UNARY,
        ExprKind::Pow(_, _) => PREC_POW,
        // A negative literal can only come from a hand-built tree; it prints
        // with a leading minus and so behaves like a negation.
        ExprKind::Num(v) if v.is_sign_negative() => PREC_UNARY,
        _ => PREC_ATOM,
    }
}

fn write_child(out: &mut String, e: &Expr, min: u8) {
    if prec(e) < min {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match &e.kind {
        ExprKind::Num(v) => {
            let _ = write!(out, "{v}");
        }
        ExprKind::Param => out.push('t'),
        ExprKind::Eps => out.push_str("eps"),
        ExprKind::Neg(inner) => {
            out.push('-');
            write_child(out, inner, PREC_UNARY);
        }
        ExprKind::Binary(op, l, r) => {
            let p = prec(e);
            write_child(out, l, p);
            match op {
                BinOp::Add | BinOp::Sub => {
                    let _ = write!(out, " {} ", op.symbol());
                }
                BinOp::Mul | BinOp::Div => out.push_str(op.symbol()),
            }
            // Right operands of equal precedence need parentheses to keep the
            // tree shape under left associativity.
            write_child(out, r, p + 1);
        }
        ExprKind::Pow(base, n) => {
            write_child(out, base, PREC_ATOM);
            let _ = write!(out, "^{n}");
        }
        ExprKind::Call(f, arg) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(out, arg);
            out.push(')');
        }
    }
}

pub fn format_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}

pub fn format(c: &CurveExpr) -> String {
    let [x, y, z] = &c.components;
    format!("[{}, {}, {}]", format_expr(x), format_expr(y), format_expr(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse, parse_scalar};

    #[test]
    fn canonical_forms() {
        let cases = [
            ("[cos(t), sin(t), 0]", "[cos(t), sin(t), 0]"),
            ("[(1+eps)*cos(t), (1+eps)*sin(t), t]", "[(1 + eps)*cos(t), (1 + eps)*sin(t), t]"),
            ("[1-(2-t), t/(2*t), -t^2]", "[1 - (2 - t), t/(2*t), -t^2]"),
            ("[(-t)^2, (t^2)^3, 1.5e-3]", "[(-t)^2, (t^2)^3, 0.0015]"),
        ];
        for (src, want) in cases {
            let e = parse(src).unwrap();
            let text = format(&e);
            assert_eq!(text, want);
            assert_eq!(parse(&text).unwrap(), e);
        }
    }

    #[test]
    fn negative_exponent() {
        let e = parse_scalar("t^-2").unwrap();
        assert_eq!(format_expr(&e), "t^-2");
    }

    #[test]
    fn double_negation() {
        let e = parse_scalar("--t").unwrap();
        assert_eq!(format_expr(&e), "--t");
        assert_eq!(parse_scalar("--t").unwrap(), e);
    }
}
