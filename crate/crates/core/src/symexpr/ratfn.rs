//! Rational-function normal form.
//!
//! Every expression canonicalizes to `num/den` with `num`, `den` sparse
//! polynomials over the expression's atoms, `gcd(num, den) = 1`, and the
//! leading coefficient of `den` equal to one. Two expressions whose
//! difference normalizes to the zero numerator are exactly equal on the
//! rational fragment; kernel identities beyond the built-in rewrite table
//! (Pythagorean sine reduction, `exp` merging, `ln` of a product or power,
//! `ln(exp u) = u`) are not decided here.

use num::{BigRational, One, Signed, Zero};

use super::poly::{self, Atom, KernelKind, Poly};
use super::{ExprNode, ScalarExpr};
use crate::error::{Error, Result};

/// Reduced quotient of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn zero() -> RatFn {
        RatFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFn {
        RatFn {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn constant(c: BigRational) -> RatFn {
        RatFn {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> RatFn {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    fn reduced(num: Poly, den: Poly) -> RatFn {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFn::zero();
        }
        let (mut num, mut den) = (num, den);
        if !den.is_one() {
            let g = poly::gcd(&num, &den);
            if !g.is_one() {
                num = num.exact_div(&g).expect("gcd divides");
                den = den.exact_div(&g).expect("gcd divides");
            }
        }
        let lc = den.leading_coeff().expect("nonzero denominator").clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFn { num, den }
    }

    pub fn new(num: Poly, den: Poly) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFn::reduced(num, den))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<&BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn has_kernel(&self) -> bool {
        self.num.has_kernel() || self.den.has_kernel()
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        RatFn::reduced(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn::reduced(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &RatFn) -> Result<RatFn> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFn::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn recip(&self) -> Result<RatFn> {
        RatFn::one().div(self)
    }

    pub fn powi(&self, n: i32) -> Result<RatFn> {
        if n == 0 {
            return Ok(RatFn::one());
        }
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut out = RatFn::one();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }
}

/// Canonicalize an expression tree into its rational-function normal form.
pub fn to_ratfn(e: &ScalarExpr) -> Result<RatFn> {
    match e.node() {
        ExprNode::Const(c) => Ok(RatFn::constant(c.clone())),
        ExprNode::Coord(s) => Ok(RatFn::from_poly(Poly::from_atom(Atom::Coord(s.clone())))),
        ExprNode::Add(a, b) => Ok(to_ratfn(a)?.add(&to_ratfn(b)?)),
        ExprNode::Sub(a, b) => Ok(to_ratfn(a)?.sub(&to_ratfn(b)?)),
        ExprNode::Mul(a, b) => Ok(to_ratfn(a)?.mul(&to_ratfn(b)?)),
        ExprNode::Div(a, b) => to_ratfn(a)?.div(&to_ratfn(b)?),
        ExprNode::Neg(a) => Ok(to_ratfn(a)?.neg()),
        ExprNode::Pow(a, n) => to_ratfn(a)?.powi(*n),
        ExprNode::Func(kind, arg) => Ok(kernel_ratfn(*kind, &to_ratfn(arg)?)),
    }
}

fn atom_ratfn(kind: KernelKind, arg: ScalarExpr) -> RatFn {
    RatFn::from_poly(Poly::from_atom(Atom::Kernel(kind, arg)))
}

fn leading_negative(rf: &RatFn) -> bool {
    rf.num()
        .leading_coeff()
        .map(|c| c.is_negative())
        .unwrap_or(false)
}

fn kernel_ratfn(kind: KernelKind, arg: &RatFn) -> RatFn {
    match kind {
        KernelKind::Sin => {
            if arg.is_zero() {
                RatFn::zero()
            } else if leading_negative(arg) {
                atom_ratfn(KernelKind::Sin, ratfn_to_expr(&arg.neg()))
                    .scale(&-BigRational::one())
            } else {
                atom_ratfn(KernelKind::Sin, ratfn_to_expr(arg))
            }
        }
        KernelKind::Cos => {
            if arg.is_zero() {
                RatFn::one()
            } else if leading_negative(arg) {
                atom_ratfn(KernelKind::Cos, ratfn_to_expr(&arg.neg()))
            } else {
                atom_ratfn(KernelKind::Cos, ratfn_to_expr(arg))
            }
        }
        KernelKind::Exp => {
            if arg.is_zero() {
                RatFn::one()
            } else {
                atom_ratfn(KernelKind::Exp, ratfn_to_expr(arg))
            }
        }
        KernelKind::Ln => ln_ratfn(arg),
    }
}

/// `ln` rewrites: `ln 1 = 0`, `ln(a*b) = ln a + ln b`, `ln(a^n) = n ln a`,
/// `ln(p/q) = ln p - ln q`, `ln(exp u) = u`. The product and quotient splits
/// are formal: they are identities on the domain where every factor is
/// positive.
fn ln_ratfn(arg: &RatFn) -> RatFn {
    if arg.is_one() {
        return RatFn::zero();
    }
    match (ln_poly(arg.num()), ln_poly(arg.den())) {
        (Some(a), Some(b)) => a.sub(&b),
        _ => atom_ratfn(KernelKind::Ln, ratfn_to_expr(arg)),
    }
}

fn ln_poly(p: &Poly) -> Option<RatFn> {
    if p.is_one() {
        return Some(RatFn::zero());
    }
    if p.num_terms() != 1 {
        return None;
    }
    let (m, c) = p.terms().next().unwrap();
    if !c.is_positive() {
        return None;
    }
    let mut acc = ln_rational(c);
    for (atom, e) in &m.0 {
        let piece = match atom {
            Atom::Kernel(KernelKind::Exp, u) => {
                to_ratfn(u).expect("canonical kernel argument")
            }
            Atom::Coord(s) => atom_ratfn(KernelKind::Ln, ScalarExpr::sym_arc(s.clone())),
            Atom::Kernel(k, u) => atom_ratfn(
                KernelKind::Ln,
                ScalarExpr::new(ExprNode::Func(*k, u.clone())),
            ),
        };
        acc = acc.add(&piece.scale(&BigRational::from_integer((*e).into())));
    }
    Some(acc)
}

fn ln_rational(c: &BigRational) -> RatFn {
    let ln_int = |n: &num::BigInt| -> RatFn {
        if n.is_one() {
            RatFn::zero()
        } else {
            atom_ratfn(
                KernelKind::Ln,
                ScalarExpr::constant(BigRational::from_integer(n.clone())),
            )
        }
    };
    ln_int(c.numer()).sub(&ln_int(c.denom()))
}

/// Rebuild a canonical expression tree from a normal form.
pub fn ratfn_to_expr(rf: &RatFn) -> ScalarExpr {
    if rf.den().is_one() {
        poly_to_expr(rf.num())
    } else {
        poly_to_expr(rf.num()).div(&poly_to_expr(rf.den()))
    }
}

pub fn poly_to_expr(p: &Poly) -> ScalarExpr {
    let mut acc: Option<ScalarExpr> = None;
    for (m, c) in p.terms().collect::<Vec<_>>().into_iter().rev() {
        acc = Some(match acc {
            None => term_expr_signed(c, m),
            Some(a) => {
                if c.is_negative() {
                    a.sub(&term_expr(&-c, m))
                } else {
                    a.add(&term_expr(c, m))
                }
            }
        });
    }
    acc.unwrap_or_else(ScalarExpr::zero)
}

/// Leading term, sign folded into the constant (or a bare negation when the
/// coefficient is -1).
fn term_expr_signed(c: &BigRational, m: &super::poly::Monomial) -> ScalarExpr {
    if m.is_one() {
        return ScalarExpr::constant(c.clone());
    }
    if c.is_negative() {
        let abs = -c;
        if abs.is_one() {
            return term_expr(&abs, m).neg();
        }
        return ScalarExpr::constant(c.clone()).mul(&positive_monomial_expr(m));
    }
    term_expr(c, m)
}

fn positive_monomial_expr(m: &super::poly::Monomial) -> ScalarExpr {
    term_expr(&BigRational::one(), m)
}

fn atom_expr(a: &Atom) -> ScalarExpr {
    match a {
        Atom::Coord(s) => ScalarExpr::sym_arc(s.clone()),
        Atom::Kernel(k, arg) => ScalarExpr::new(ExprNode::Func(*k, arg.clone())),
    }
}

fn term_expr(c: &BigRational, m: &super::poly::Monomial) -> ScalarExpr {
    let mut factors: Vec<ScalarExpr> = Vec::new();
    for (a, e) in &m.0 {
        let base = atom_expr(a);
        factors.push(if *e == 1 {
            base
        } else {
            base.powi(*e as i32)
        });
    }
    let mut acc = if c.is_one() && !factors.is_empty() {
        factors.remove(0)
    } else {
        ScalarExpr::constant(c.clone())
    };
    for fct in factors {
        acc = acc.mul(&fct);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::ScalarExpr;

    fn x() -> ScalarExpr {
        ScalarExpr::sym("x")
    }
    fn y() -> ScalarExpr {
        ScalarExpr::sym("y")
    }

    #[test]
    fn difference_of_squares_reduces() {
        // (x^2 - y^2)/(x - y) -> x + y
        let e = x().powi(2).sub(&y().powi(2)).div(&x().sub(&y()));
        let n = e.normalize().unwrap();
        let expected = x().add(&y()).normalize().unwrap();
        assert_eq!(n, expected);
    }

    #[test]
    fn normalize_is_idempotent() {
        let e = x()
            .add(&y())
            .powi(3)
            .div(&x().mul(&y()).add(&ScalarExpr::one()))
            .sub(&x().sin().mul(&x().sin()));
        let n1 = e.normalize().unwrap();
        let n2 = n1.normalize().unwrap();
        assert_eq!(n1, n2);
    }

    #[test]
    fn e_minus_e_is_zero_literal() {
        let e = x().sin().div(&y().exp()).add(&x().powi(3));
        assert!(e.sub(&e).normalize().unwrap().is_zero_literal());
    }

    #[test]
    fn pythagorean_identity() {
        let e = x().sin().powi(2).add(&x().cos().powi(2)).sub(&ScalarExpr::one());
        assert!(e.normalize().unwrap().is_zero_literal());
    }

    #[test]
    fn exp_product_combines() {
        let e = x().exp().mul(&x().neg().exp()).sub(&ScalarExpr::one());
        assert!(e.normalize().unwrap().is_zero_literal());
        let e2 = x().exp().powi(2).sub(&x().add(&x()).exp());
        assert!(e2.normalize().unwrap().is_zero_literal());
    }

    #[test]
    fn ln_of_product_splits() {
        let e = x().mul(&y()).ln().sub(&x().ln()).sub(&y().ln());
        assert!(e.normalize().unwrap().is_zero_literal());
        let e2 = x().powi(3).ln().sub(&ScalarExpr::int(3).mul(&x().ln()));
        assert!(e2.normalize().unwrap().is_zero_literal());
        let e3 = x().exp().ln().sub(&x());
        assert!(e3.normalize().unwrap().is_zero_literal());
    }

    #[test]
    fn sin_parity() {
        let e = x().neg().sin().add(&x().sin());
        assert!(e.normalize().unwrap().is_zero_literal());
        let c = x().neg().cos().sub(&x().cos());
        assert!(c.normalize().unwrap().is_zero_literal());
    }

    #[test]
    fn structural_division_by_zero() {
        let e = ScalarExpr::one().div(&x().sub(&x()));
        assert!(matches!(e.normalize(), Err(Error::DivisionByZero)));
    }
}
