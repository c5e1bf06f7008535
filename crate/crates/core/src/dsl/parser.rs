//! Lexer and recursive-descent parser for the curve language.
//!
//! ```text
//! curve  := "[" expr "," expr "," expr "]"
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := "-" factor | power
//! power  := atom ("^" "-"? integer)?
//! atom   := number | "t" | "eps" | ident "(" expr ")" | "(" expr ")"
//! ```
//!
//! `^` binds tighter than unary minus, so `-t^2` is `-(t^2)`.

use std::fmt;

use super::ast::{BinOp, CurveExpr, Expr, ExprKind, Span};
use crate::dual::AnalyticFn;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    fn new(src: &str, offset: usize, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let offset = offset.min(src.len());
        let before = &src[..offset];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = src[line_start..offset].chars().count() + 1;
        ParseError {
            offset,
            line,
            column,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Message with position, the offending source line and a caret under
    /// the error column.
    pub fn render(&self, src: &str) -> String {
        let text = src.lines().nth(self.line - 1).unwrap_or("");
        format!(
            "{} at line {}, column {}\n  {}\n  {}^",
            self,
            self.line,
            self.column,
            text,
            " ".repeat(self.column - 1)
        )
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)?;
        if !self.expected.is_empty() {
            let items: Vec<String> = self
                .expected
                .iter()
                .map(|e| {
                    if e.chars().all(|c| c.is_ascii_alphanumeric() || c == ' ') {
                        e.clone()
                    } else {
                        format!("'{e}'")
                    }
                })
                .collect();
            write!(f, "; expected {}", items.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num,
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: Span,
}

const ATOM_START: &[&str] = &["number", "t", "eps", "function call", "(", "-"];
const FUNCTIONS: &[&str] = &["sin", "cos", "tan", "sqrt", "exp", "log", "atan"];

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            i += 1;
            out.push(Token {
                tok,
                span: Span::new(start, i),
            });
            continue;
        }
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                } else {
                    return Err(ParseError::new(src, j, "malformed exponent in number", &["digit"]));
                }
            }
            out.push(Token {
                tok: Tok::Num,
                span: Span::new(start, i),
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident,
                span: Span::new(start, i),
            });
            continue;
        }
        let ch = src[start..].chars().next().unwrap_or('?');
        return Err(ParseError::new(src, start, format!("unexpected character '{ch}'"), ATOM_START));
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(src.len(), src.len()),
    });
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Parser<'a>, ParseError> {
        Ok(Parser {
            src,
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn text(&self, span: Span) -> &'a str {
        &self.src[span.start..span.end]
    }

    fn error_here(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let t = self.peek();
        let msg = if t.tok == Tok::Eof {
            format!("{}: unexpected end of input", message.into())
        } else {
            format!("{}: found '{}'", message.into(), self.text(t.span))
        };
        ParseError::new(self.src, t.span.start, msg, expected)
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        let msg = if t.tok == Tok::Eof {
            "unexpected end of input".to_string()
        } else {
            format!("unexpected '{}'", self.text(t.span))
        };
        ParseError::new(self.src, t.span.start, msg, expected)
    }

    fn expect(&mut self, tok: Tok, expected: &[&str]) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn curve(&mut self) -> Result<CurveExpr, ParseError> {
        self.expect(Tok::LBracket, &["["])?;
        let x = self.expr()?;
        self.expect(Tok::Comma, &[",", "+", "-", "*", "/", "^"])?;
        let y = self.expr()?;
        self.expect(Tok::Comma, &[",", "+", "-", "*", "/", "^"])?;
        let z = self.expr()?;
        self.expect(Tok::RBracket, &["]", "+", "-", "*", "/", "^"])?;
        self.expect(Tok::Eof, &["end of input"])?;
        Ok(CurveExpr { components: [x, y, z] })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek().tok == Tok::Minus {
            let minus = self.bump();
            let inner = self.factor()?;
            let span = minus.span.to(inner.span);
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let tok = self.peek().clone();
        let digits = self.text(tok.span);
        if tok.tok != Tok::Num || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.error_here("exponent must be an integer literal", &["integer"]));
        }
        let n: i32 = digits.parse().map_err(|_| {
            ParseError::new(self.src, tok.span.start, "exponent out of range", &["integer"])
        })?;
        self.bump();
        let span = base.span.to(tok.span);
        Ok(Expr::new(ExprKind::Pow(Box::new(base), if negative { -n } else { n }), span))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let tok = self.peek().clone();
        match tok.tok {
            Tok::Num => {
                self.bump();
                let text = self.text(tok.span);
                let v: f64 = text
                    .parse()
                    .map_err(|_| ParseError::new(self.src, tok.span.start, "invalid number", &["number"]))?;
                if !v.is_finite() {
                    return Err(ParseError::new(self.src, tok.span.start, "number out of range", &["number"]));
                }
                Ok(Expr::new(ExprKind::Num(v), tok.span))
            }
            Tok::Ident => {
                let name = self.text(tok.span);
                match name {
                    "t" => {
                        self.bump();
                        Ok(Expr::new(ExprKind::Param, tok.span))
                    }
                    "eps" => {
                        self.bump();
                        Ok(Expr::new(ExprKind::Eps, tok.span))
                    }
                    _ => {
                        let Some(func) = AnalyticFn::from_name(name) else {
                            let mut expected = vec!["t", "eps"];
                            expected.extend_from_slice(FUNCTIONS);
                            return Err(ParseError::new(
                                self.src,
                                tok.span.start,
                                format!("unknown identifier '{name}'"),
                                &expected,
                            ));
                        };
                        self.bump();
                        self.expect(Tok::LParen, &["("])?;
                        let arg = self.expr()?;
                        let close = self.expect(Tok::RParen, &[")", "+", "-", "*", "/", "^"])?;
                        Ok(Expr::new(ExprKind::Call(func, Box::new(arg)), tok.span.to(close.span)))
                    }
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                let close = self.expect(Tok::RParen, &[")", "+", "-", "*", "/", "^"])?;
                Ok(Expr::new(inner.kind, tok.span.to(close.span)))
            }
            _ => Err(self.unexpected(ATOM_START)),
        }
    }
}

/// Parse a curve definition `[x, y, z]`.
pub fn parse(src: &str) -> Result<CurveExpr, ParseError> {
    Parser::new(src)?.curve()
}

/// Parse a single scalar expression (used for dual constants such as
/// `1+eps*2`).
pub fn parse_scalar(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect(Tok::Eof, &["end of input", "+", "-", "*", "/", "^"])?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_ast() {
        let c = parse("[cos(t), sin(t), 0]").unwrap();
        assert!(matches!(c.components[0].kind, ExprKind::Call(AnalyticFn::Cos, _)));
        assert!(matches!(c.components[2].kind, ExprKind::Num(v) if v == 0.0));
    }

    #[test]
    fn dual_helix_ast() {
        let c = parse("[(1+eps)*cos(t), (1+eps)*sin(t), t]").unwrap();
        let ExprKind::Binary(BinOp::Mul, lhs, _) = &c.components[0].kind else {
            panic!("expected product");
        };
        assert!(matches!(lhs.kind, ExprKind::Binary(BinOp::Add, _, _)));
        assert!(matches!(c.components[2].kind, ExprKind::Param));
    }

    #[test]
    fn truncated_curve_reports_end() {
        let src = "[cos(t), sin(t)";
        let e = parse(src).unwrap_err();
        assert_eq!(e.offset, src.len());
        assert!(e.expected.iter().any(|s| s == ","));
        assert_eq!((e.line, e.column), (1, src.len() + 1));
    }

    #[test]
    fn minus_binds_looser_than_power() {
        let e = parse_scalar("-t^2").unwrap();
        let ExprKind::Neg(inner) = e.kind else { panic!() };
        assert!(matches!(inner.kind, ExprKind::Pow(_, 2)));
    }

    #[test]
    fn left_associative() {
        let e = parse_scalar("1-2-3").unwrap();
        let ExprKind::Binary(BinOp::Sub, lhs, rhs) = e.kind else { panic!() };
        assert!(matches!(lhs.kind, ExprKind::Binary(BinOp::Sub, _, _)));
        assert!(matches!(rhs.kind, ExprKind::Num(v) if v == 3.0));
    }

    #[test]
    fn errors_are_located() {
        let e = parse("[t, foo(t), 0]").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.message.contains("foo"));
        let e = parse_scalar("t^2.5").unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse("[t, t,\n  t $ 1]").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        assert!(e.render("[t, t,\n  t $ 1]").ends_with("    ^"));
    }

    #[test]
    fn span_tracks_source() {
        let e = parse_scalar("  sin(t) ").unwrap();
        assert_eq!(e.span, Span::new(2, 8));
    }
}
