//! Numerical and exact-rational evaluation of expression trees.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigRational, One, Signed, ToPrimitive, Zero};

use super::{ExprNode, KernelKind, ScalarExpr};
use crate::error::{Error, Result};

/// IEEE evaluation at a rational point. Deterministic for fixed input.
/// Domain faults (division by zero, `ln` of a non-positive value, overflow)
/// surface as `Error::Evaluation`.
pub fn evaluate(e: &ScalarExpr, point: &BTreeMap<Arc<str>, BigRational>) -> Result<f64> {
    let v = eval_f64(e, point)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation("non-finite result".to_string()))
    }
}

fn rat_to_f64(c: &BigRational) -> Result<f64> {
    c.to_f64()
        .ok_or_else(|| Error::Evaluation("constant out of f64 range".to_string()))
}

fn eval_f64(e: &ScalarExpr, point: &BTreeMap<Arc<str>, BigRational>) -> Result<f64> {
    Ok(match e.node() {
        ExprNode::Const(c) => rat_to_f64(c)?,
        ExprNode::Coord(s) => match point.get(s) {
            Some(c) => rat_to_f64(c)?,
            None => return Err(Error::UnknownSymbol(s.to_string())),
        },
        ExprNode::Add(a, b) => eval_f64(a, point)? + eval_f64(b, point)?,
        ExprNode::Sub(a, b) => eval_f64(a, point)? - eval_f64(b, point)?,
        ExprNode::Mul(a, b) => eval_f64(a, point)? * eval_f64(b, point)?,
        ExprNode::Div(a, b) => {
            let d = eval_f64(b, point)?;
            if d == 0.0 {
                return Err(Error::Evaluation("division by zero".to_string()));
            }
            eval_f64(a, point)? / d
        }
        ExprNode::Neg(a) => -eval_f64(a, point)?,
        ExprNode::Pow(a, n) => {
            let base = eval_f64(a, point)?;
            if base == 0.0 && *n < 0 {
                return Err(Error::Evaluation("zero raised to a negative power".to_string()));
            }
            base.powi(*n)
        }
        ExprNode::Func(kind, a) => {
            let v = eval_f64(a, point)?;
            match kind {
                KernelKind::Sin => v.sin(),
                KernelKind::Cos => v.cos(),
                KernelKind::Exp => v.exp(),
                KernelKind::Ln => {
                    if v <= 0.0 {
                        return Err(Error::Evaluation(format!("ln of non-positive value {v}")));
                    }
                    v.ln()
                }
            }
        }
    })
}

/// Exact rational evaluation; fails on transcendental kernels.
pub fn evaluate_rational(
    e: &ScalarExpr,
    point: &BTreeMap<Arc<str>, BigRational>,
) -> Result<BigRational> {
    Ok(match e.node() {
        ExprNode::Const(c) => c.clone(),
        ExprNode::Coord(s) => match point.get(s) {
            Some(c) => c.clone(),
            None => return Err(Error::UnknownSymbol(s.to_string())),
        },
        ExprNode::Add(a, b) => evaluate_rational(a, point)? + evaluate_rational(b, point)?,
        ExprNode::Sub(a, b) => evaluate_rational(a, point)? - evaluate_rational(b, point)?,
        ExprNode::Mul(a, b) => evaluate_rational(a, point)? * evaluate_rational(b, point)?,
        ExprNode::Div(a, b) => {
            let d = evaluate_rational(b, point)?;
            if d.is_zero() {
                return Err(Error::Evaluation("division by zero".to_string()));
            }
            evaluate_rational(a, point)? / d
        }
        ExprNode::Neg(a) => -evaluate_rational(a, point)?,
        ExprNode::Pow(a, n) => {
            let base = evaluate_rational(a, point)?;
            if base.is_zero() {
                if *n < 0 {
                    return Err(Error::Evaluation(
                        "zero raised to a negative power".to_string(),
                    ));
                }
                if *n == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            } else {
                let mut out = BigRational::one();
                let b = if *n < 0 { base.recip() } else { base };
                for _ in 0..n.unsigned_abs() {
                    out *= &b;
                }
                out
            }
        }
        ExprNode::Func(_, _) => {
            return Err(Error::Evaluation(
                "transcendental kernel has no exact rational value".to_string(),
            ))
        }
    })
}

/// Signum of an exact rational evaluation: -1, 0, or 1.
pub fn sign_at(e: &ScalarExpr, point: &BTreeMap<Arc<str>, BigRational>) -> Result<i8> {
    let v = evaluate_rational(e, point)?;
    Ok(if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::symexpr::parse;
    use num::FromPrimitive;

    fn pt(binds: &[(&str, i64)]) -> BTreeMap<Arc<str>, BigRational> {
        binds
            .iter()
            .map(|(s, v)| (Arc::from(*s), BigRational::from_i64(*v).unwrap()))
            .collect()
    }

    #[test]
    fn arithmetic_example() {
        let m = Chart::new("M", &["q", "p"]).unwrap();
        let e = parse("(q^2+p^2)/2", &m).unwrap();
        assert_eq!(evaluate(&e, &pt(&[("q", 3), ("p", 4)])).unwrap(), 12.5);
    }

    #[test]
    fn exp_identity_case() {
        let m = Chart::new("M", &["q"]).unwrap();
        let e = parse("exp(q - q)", &m).unwrap();
        assert_eq!(evaluate(&e, &pt(&[("q", 7)])).unwrap(), 1.0);
    }

    #[test]
    fn pole_is_a_domain_fault() {
        let m = Chart::new("M", &["q"]).unwrap();
        let e = parse("1/q", &m).unwrap();
        assert!(matches!(
            evaluate(&e, &pt(&[("q", 0)])),
            Err(Error::Evaluation(_))
        ));
    }

    #[test]
    fn rational_evaluation_is_exact() {
        let m = Chart::new("M", &["q"]).unwrap();
        let e = parse("q^3/3 - 1/3", &m).unwrap();
        let v = evaluate_rational(&e, &pt(&[("q", 2)])).unwrap();
        assert_eq!(v, BigRational::new(7.into(), 3.into()));
    }
}
