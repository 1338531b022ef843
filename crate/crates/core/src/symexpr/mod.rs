//! Exact symbolic scalar expressions: parsing, arithmetic, differentiation,
//! substitution, canonicalization, and a sound three-valued zero test.
//!
//! Expressions are immutable trees over exact rational constants, coordinate
//! symbols, the four arithmetic operations, integer powers, and the
//! elementary kernels `sin`, `cos`, `exp`, `ln`. Canonicalization rewrites a
//! tree into a quotient of sparse polynomials (see [`poly`] and [`ratfn`]);
//! on that normal form the zero test is exact for the rational fragment,
//! while expressions containing transcendental kernels fall back to seeded
//! numerical sampling and may come back `Undecided`.

pub mod eval;
pub mod parser;
pub mod poly;
pub mod ratfn;
pub mod zero;

pub use eval::{evaluate, evaluate_rational};
pub use parser::{parse, parse_with_constants};
pub use poly::KernelKind;
pub use ratfn::RatFn;
pub use zero::{is_zero, is_zero_with_witness, NonZeroWitness, ZeroCtx, ZeroVerdict};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExprNode {
    Const(BigRational),
    Coord(Arc<str>),
    Add(ScalarExpr, ScalarExpr),
    Sub(ScalarExpr, ScalarExpr),
    Mul(ScalarExpr, ScalarExpr),
    Div(ScalarExpr, ScalarExpr),
    Neg(ScalarExpr),
    Pow(ScalarExpr, i32),
    Func(KernelKind, ScalarExpr),
}

/// A symbolic scalar function on a chart. Immutable and cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScalarExpr(Arc<ExprNode>);

impl ScalarExpr {
    pub fn new(node: ExprNode) -> ScalarExpr {
        ScalarExpr(Arc::new(node))
    }

    pub fn node(&self) -> &ExprNode {
        &self.0
    }

    pub fn zero() -> ScalarExpr {
        ScalarExpr::new(ExprNode::Const(BigRational::zero()))
    }

    pub fn one() -> ScalarExpr {
        ScalarExpr::new(ExprNode::Const(BigRational::one()))
    }

    pub fn int(n: i64) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Const(BigRational::from_integer(BigInt::from(n))))
    }

    pub fn rational(n: i64, d: i64) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Const(BigRational::new(
            BigInt::from(n),
            BigInt::from(d),
        )))
    }

    pub fn constant(c: BigRational) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Const(c))
    }

    pub fn sym(name: &str) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Coord(Arc::from(name)))
    }

    pub fn sym_arc(name: Arc<str>) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Coord(name))
    }

    pub fn add(&self, o: &ScalarExpr) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Add(self.clone(), o.clone()))
    }

    pub fn sub(&self, o: &ScalarExpr) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Sub(self.clone(), o.clone()))
    }

    pub fn mul(&self, o: &ScalarExpr) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Mul(self.clone(), o.clone()))
    }

    pub fn div(&self, o: &ScalarExpr) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Div(self.clone(), o.clone()))
    }

    pub fn neg(&self) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Neg(self.clone()))
    }

    pub fn powi(&self, n: i32) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Pow(self.clone(), n))
    }

    pub fn sin(&self) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Func(KernelKind::Sin, self.clone()))
    }

    pub fn cos(&self) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Func(KernelKind::Cos, self.clone()))
    }

    pub fn exp(&self) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Func(KernelKind::Exp, self.clone()))
    }

    pub fn ln(&self) -> ScalarExpr {
        ScalarExpr::new(ExprNode::Func(KernelKind::Ln, self.clone()))
    }

    /// Literal zero constant (the canonical form of zero).
    pub fn is_zero_literal(&self) -> bool {
        matches!(self.node(), ExprNode::Const(c) if c.is_zero())
    }

    pub fn as_constant(&self) -> Option<&BigRational> {
        match self.node() {
            ExprNode::Const(c) => Some(c),
            _ => None,
        }
    }

    /// All coordinate symbols appearing in the tree, including inside
    /// kernel arguments.
    pub fn symbols(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Arc<str>>) {
        match self.node() {
            ExprNode::Const(_) => {}
            ExprNode::Coord(s) => {
                out.insert(s.clone());
            }
            ExprNode::Add(a, b)
            | ExprNode::Sub(a, b)
            | ExprNode::Mul(a, b)
            | ExprNode::Div(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            ExprNode::Neg(a) | ExprNode::Pow(a, _) | ExprNode::Func(_, a) => {
                a.collect_symbols(out)
            }
        }
    }

    /// Canonical form: quotient of ordered sparse polynomials, rebuilt as a
    /// tree. Idempotent; `normalize(e - e)` is the zero literal.
    pub fn normalize(&self) -> Result<ScalarExpr> {
        Ok(ratfn::ratfn_to_expr(&ratfn::to_ratfn(self)?))
    }

    /// Exact equality of canonical forms (sound and complete on the
    /// rational fragment; structural on kernels).
    pub fn canonically_eq(&self, other: &ScalarExpr) -> Result<bool> {
        let d = ratfn::to_ratfn(self)?.sub(&ratfn::to_ratfn(other)?);
        Ok(d.is_zero())
    }

    /// Partial derivative, canonicalized.
    pub fn differentiate(&self, coord: &str) -> Result<ScalarExpr> {
        self.derivative_raw(coord).normalize()
    }

    fn derivative_raw(&self, x: &str) -> ScalarExpr {
        match self.node() {
            ExprNode::Const(_) => ScalarExpr::zero(),
            ExprNode::Coord(s) => {
                if s.as_ref() == x {
                    ScalarExpr::one()
                } else {
                    ScalarExpr::zero()
                }
            }
            ExprNode::Add(a, b) => a.derivative_raw(x).add(&b.derivative_raw(x)),
            ExprNode::Sub(a, b) => a.derivative_raw(x).sub(&b.derivative_raw(x)),
            ExprNode::Mul(a, b) => a
                .derivative_raw(x)
                .mul(b)
                .add(&a.mul(&b.derivative_raw(x))),
            ExprNode::Div(a, b) => a
                .derivative_raw(x)
                .mul(b)
                .sub(&a.mul(&b.derivative_raw(x)))
                .div(&b.mul(b)),
            ExprNode::Neg(a) => a.derivative_raw(x).neg(),
            ExprNode::Pow(a, n) => {
                if *n == 0 {
                    ScalarExpr::zero()
                } else {
                    ScalarExpr::int(*n as i64)
                        .mul(&a.powi(n - 1))
                        .mul(&a.derivative_raw(x))
                }
            }
            ExprNode::Func(kind, u) => {
                let du = u.derivative_raw(x);
                let outer = match kind {
                    KernelKind::Sin => u.cos(),
                    KernelKind::Cos => u.sin().neg(),
                    KernelKind::Exp => u.exp(),
                    KernelKind::Ln => ScalarExpr::one().div(u),
                };
                outer.mul(&du)
            }
        }
    }

    /// Structural substitution of coordinate symbols by expressions.
    /// The result is not normalized.
    pub fn substitute(&self, map: &BTreeMap<Arc<str>, ScalarExpr>) -> ScalarExpr {
        match self.node() {
            ExprNode::Const(_) => self.clone(),
            ExprNode::Coord(s) => map.get(s).cloned().unwrap_or_else(|| self.clone()),
            ExprNode::Add(a, b) => a.substitute(map).add(&b.substitute(map)),
            ExprNode::Sub(a, b) => a.substitute(map).sub(&b.substitute(map)),
            ExprNode::Mul(a, b) => a.substitute(map).mul(&b.substitute(map)),
            ExprNode::Div(a, b) => a.substitute(map).div(&b.substitute(map)),
            ExprNode::Neg(a) => a.substitute(map).neg(),
            ExprNode::Pow(a, n) => a.substitute(map).powi(*n),
            ExprNode::Func(k, a) => ScalarExpr::new(ExprNode::Func(*k, a.substitute(map))),
        }
    }
}

// Precedence levels for printing: addition 1, multiplication 2, unary minus
// 3, power base 4.
fn prec(e: &ScalarExpr) -> u8 {
    match e.node() {
        ExprNode::Add(..) | ExprNode::Sub(..) => 1,
        ExprNode::Mul(..) | ExprNode::Div(..) => 2,
        ExprNode::Neg(..) => 3,
        ExprNode::Pow(..) => 4,
        ExprNode::Const(c) => {
            if c.is_negative() {
                3
            } else if !c.denom().is_one() {
                2
            } else {
                5
            }
        }
        ExprNode::Coord(_) | ExprNode::Func(..) => 5,
    }
}

fn fmt_at(e: &ScalarExpr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = prec(e);
    if p < min {
        write!(f, "(")?;
        fmt_expr(e, f)?;
        write!(f, ")")
    } else {
        fmt_expr(e, f)
    }
}

fn fmt_expr(e: &ScalarExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e.node() {
        ExprNode::Const(c) => {
            if c.denom().is_one() {
                write!(f, "{}", c.numer())
            } else {
                write!(f, "{}/{}", c.numer(), c.denom())
            }
        }
        ExprNode::Coord(s) => write!(f, "{s}"),
        ExprNode::Add(a, b) => {
            fmt_at(a, 1, f)?;
            write!(f, " + ")?;
            fmt_at(b, 2, f)
        }
        ExprNode::Sub(a, b) => {
            fmt_at(a, 1, f)?;
            write!(f, " - ")?;
            fmt_at(b, 2, f)
        }
        ExprNode::Mul(a, b) => {
            fmt_at(a, 2, f)?;
            write!(f, "*")?;
            fmt_at(b, 3, f)
        }
        ExprNode::Div(a, b) => {
            fmt_at(a, 2, f)?;
            write!(f, "/")?;
            fmt_at(b, 3, f)
        }
        ExprNode::Neg(a) => {
            write!(f, "-")?;
            fmt_at(a, 3, f)
        }
        ExprNode::Pow(a, n) => {
            fmt_at(a, 5, f)?;
            write!(f, "^{n}")
        }
        ExprNode::Func(k, a) => {
            write!(f, "{k}(")?;
            fmt_expr(a, f)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(self, f)
    }
}
