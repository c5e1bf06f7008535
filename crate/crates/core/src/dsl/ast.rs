use crate::dual::AnalyticFn;

/// Byte range into the source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    Num(f64),
    /// The curve parameter `t`.
    Param,
    /// The dual unit `eps`.
    Eps,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(AnalyticFn, Box<Expr>),
}

/// Scalar expression node. Equality is structural and ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Num(a), Num(b)) => a.to_bits() == b.to_bits(),
            (Param, Param) | (Eps, Eps) => true,
            (Neg(a), Neg(b)) => a == b,
            (Binary(o1, l1, r1), Binary(o2, l2, r2)) => o1 == o2 && l1 == l2 && r1 == r2,
            (Pow(a, n), Pow(b, m)) => n == m && a == b,
            (Call(f, a), Call(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    /// Whether the parameter `t` occurs anywhere below this node.
    pub fn mentions_param(&self) -> bool {
        match &self.kind {
            ExprKind::Param => true,
            ExprKind::Num(_) | ExprKind::Eps => false,
            ExprKind::Neg(e) | ExprKind::Pow(e, _) | ExprKind::Call(_, e) => e.mentions_param(),
            ExprKind::Binary(_, l, r) => l.mentions_param() || r.mentions_param(),
        }
    }
}

/// A curve definition `[x, y, z]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveExpr {
    pub components: [Expr; 3],
}
