//! Differential forms and multivector fields on charts: wedge, exterior
//! derivative, interior product by r-vectors, Lie derivative, and pullback.

pub mod form;
pub mod multi_index;
pub mod multivector;
pub mod smooth_map;

pub use form::DifferentialForm;
pub use multi_index::{binomial, k_subsets, MultiIndex};
pub use multivector::{bracket, MultivectorField};
pub use smooth_map::SmoothMap;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::symexpr::ratfn::{to_ratfn, RatFn};

use form::merge_term;

/// Interior product `i(X)α` of an `r`-vector field into a `p`-form
/// (`r <= p`), multilinear over scalars. For a homogeneous
/// `X = X_1 ∧ … ∧ X_r` it equals the iterated single contractions
/// `i(X_1)(i(X_2)(… i(X_r) α))`: the last wedge factor contracts first.
pub fn interior_product(
    x: &MultivectorField,
    alpha: &DifferentialForm,
) -> Result<DifferentialForm> {
    x.chart().expect_same(alpha.chart())?;
    let r = x.degree();
    let p = alpha.degree();
    if r > p {
        return Err(Error::Degree(format!(
            "cannot contract a degree-{r} multivector into a degree-{p} form"
        )));
    }
    let mut acc: BTreeMap<MultiIndex, RatFn> = BTreeMap::new();
    for (xi, xc) in x.terms() {
        let xr = to_ratfn(xc)?;
        for (ai, ac) in alpha.terms() {
            // Contract the basis r-vector ∂_{j1}∧…∧∂_{jr} into dx^I by
            // single contractions, last factor first.
            let mut idx = ai.clone();
            let mut sign = 1i8;
            let mut vanished = false;
            for j in xi.indices().iter().rev() {
                match idx.position(*j) {
                    Some(pos) => {
                        if pos % 2 == 1 {
                            sign = -sign;
                        }
                        idx = idx.remove_at(pos);
                    }
                    None => {
                        vanished = true;
                        break;
                    }
                }
            }
            if vanished {
                continue;
            }
            let mut rf = xr.mul(&to_ratfn(ac)?);
            if sign < 0 {
                rf = rf.neg();
            }
            merge_term(&mut acc, idx, rf);
        }
    }
    Ok(DifferentialForm::from_ratfn(alpha.chart(), p - r, acc))
}

/// Lie derivative along a degree-1 field by the Cartan formula
/// `L(X)α = i(X)dα + d(i(X)α)`; degree-preserving.
pub fn lie_derivative(x: &MultivectorField, alpha: &DifferentialForm) -> Result<DifferentialForm> {
    if x.degree() != 1 {
        return Err(Error::Degree(
            "the Lie derivative is implemented for degree-1 fields".to_string(),
        ));
    }
    x.chart().expect_same(alpha.chart())?;
    let first = interior_product(x, &alpha.d()?)?;
    if alpha.degree() == 0 {
        return Ok(first);
    }
    first.add(&interior_product(x, alpha)?.d()?)
}
