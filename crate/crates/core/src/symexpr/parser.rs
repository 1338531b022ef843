//! Recursive-descent parser for the expression grammar.
//!
//! Grammar (standard precedence, `^` binds tightest and takes an integer
//! literal exponent):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | postfix
//! postfix  := primary ('^' ['-'] integer)*
//! primary  := integer | ident | ident '(' expr ')' | '(' expr ')'
//! ident    := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Rationals are written `a/b` and fold to exact constants during
//! canonicalization. Identifiers must be coordinates of the supplied chart
//! or declared constants; `sin`, `cos`, `exp`, `ln` are reserved function
//! names.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};

use super::{KernelKind, ScalarExpr};
use crate::chart::Chart;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::End, start));
        }
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                return Ok((Tok::Num(text.parse::<BigInt>().unwrap()), start));
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                return Ok((Tok::Ident(text.to_string()), start));
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    expected: format!("a token (found `{}`)", other as char),
                })
            }
        };
        self.pos += 1;
        Ok((tok, start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: (Tok, usize),
    chart: &'a Chart,
    constants: Option<&'a BTreeMap<String, BigRational>>,
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<()> {
        self.current = self.lexer.next()?;
        Ok(())
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.current.0 == tok {
            self.advance()
        } else {
            Err(Error::Syntax {
                pos: self.current.1,
                expected: what.to_string(),
            })
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr> {
        let mut acc = self.term()?;
        loop {
            match self.current.0 {
                Tok::Plus => {
                    self.advance()?;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.advance()?;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr> {
        let mut acc = self.unary()?;
        loop {
            match self.current.0 {
                Tok::Star => {
                    self.advance()?;
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    self.advance()?;
                    acc = acc.div(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ScalarExpr> {
        if self.current.0 == Tok::Minus {
            self.advance()?;
            Ok(self.unary()?.neg())
        } else {
            self.postfix()
        }
    }

    fn postfix(&mut self) -> Result<ScalarExpr> {
        let mut acc = self.primary()?;
        while self.current.0 == Tok::Caret {
            self.advance()?;
            let negative = if self.current.0 == Tok::Minus {
                self.advance()?;
                true
            } else {
                false
            };
            let Tok::Num(ref n) = self.current.0 else {
                return Err(Error::Syntax {
                    pos: self.current.1,
                    expected: "an integer literal exponent".to_string(),
                });
            };
            let mut exp: i32 = n.try_into().map_err(|_| Error::Syntax {
                pos: self.current.1,
                expected: "an exponent that fits in 32 bits".to_string(),
            })?;
            if negative {
                exp = -exp;
            }
            self.advance()?;
            acc = acc.powi(exp);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<ScalarExpr> {
        match self.current.0.clone() {
            Tok::Num(n) => {
                self.advance()?;
                Ok(ScalarExpr::constant(BigRational::from_integer(n)))
            }
            Tok::LParen => {
                self.advance()?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let pos = self.current.1;
                self.advance()?;
                if let Some(kind) = function_kind(&name) {
                    self.expect(Tok::LParen, "`(` after function name")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(ScalarExpr::new(super::ExprNode::Func(kind, arg)));
                }
                if self.chart.has_coord(&name) {
                    return Ok(ScalarExpr::sym(&name));
                }
                if let Some(consts) = self.constants {
                    if let Some(c) = consts.get(&name) {
                        return Ok(ScalarExpr::constant(c.clone()));
                    }
                }
                let _ = pos;
                Err(Error::UnknownSymbol(name))
            }
            _ => Err(Error::Syntax {
                pos: self.current.1,
                expected: "a number, identifier, or `(`".to_string(),
            }),
        }
    }
}

fn function_kind(name: &str) -> Option<KernelKind> {
    match name {
        "sin" => Some(KernelKind::Sin),
        "cos" => Some(KernelKind::Cos),
        "exp" => Some(KernelKind::Exp),
        "ln" => Some(KernelKind::Ln),
        _ => None,
    }
}

/// Parse an expression whose identifiers are coordinates of `chart`.
pub fn parse(text: &str, chart: &Chart) -> Result<ScalarExpr> {
    parse_with_constants(text, chart, None)
}

/// Parse with an extra table of named rational constants.
pub fn parse_with_constants(
    text: &str,
    chart: &Chart,
    constants: Option<&BTreeMap<String, BigRational>>,
) -> Result<ScalarExpr> {
    let mut lexer = Lexer::new(text);
    let current = lexer.next()?;
    let mut p = Parser {
        lexer,
        current,
        chart,
        constants,
    };
    let e = p.expr()?;
    if p.current.0 != Tok::End {
        return Err(Error::Syntax {
            pos: p.current.1,
            expected: "end of input".to_string(),
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart_qp() -> Chart {
        Chart::new("M", &["q", "p"]).unwrap()
    }

    #[test]
    fn parses_polynomials() {
        let m = chart_qp();
        let e = parse("q^2 + p^2", &m).unwrap();
        // Canonical order is by atom name, so `p` terms print first.
        assert_eq!(e.normalize().unwrap().to_string(), "p^2 + q^2");
    }

    #[test]
    fn parses_jet_style_density() {
        let m = Chart::new("J", &["ux", "uy"]).unwrap();
        let e = parse("1/2*(ux^2+uy^2)", &m).unwrap();
        let n = e.normalize().unwrap();
        assert_eq!(n.to_string(), "1/2*ux^2 + 1/2*uy^2");
    }

    #[test]
    fn unknown_symbol() {
        let m = chart_qp();
        assert_eq!(
            parse("q + z", &m),
            Err(Error::UnknownSymbol("z".to_string()))
        );
    }

    #[test]
    fn syntax_error_position() {
        let m = chart_qp();
        match parse("q + ", &m) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn exponent_must_be_integer_literal() {
        let m = chart_qp();
        assert!(matches!(parse("q^p", &m), Err(Error::Syntax { .. })));
        assert!(parse("q^-2", &m).is_ok());
    }

    #[test]
    fn print_parse_round_trip_is_canonical() {
        let m = chart_qp();
        for text in [
            "q^2 + p^2",
            "(q + p)^3/(q - p)",
            "-q*p + 1/2",
            "sin(q)*cos(p) - exp(q - p)",
            "ln(q^2)/(1 + p^2)",
            "q^-2 + p",
        ] {
            let e = parse(text, &m).unwrap();
            let n = e.normalize().unwrap();
            let reparsed = parse(&n.to_string(), &m).unwrap();
            assert_eq!(reparsed.normalize().unwrap(), n, "round trip of `{text}`");
        }
    }
}
