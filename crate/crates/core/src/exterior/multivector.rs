//! Multivector fields: contravariant counterparts of forms, with the same
//! sparse index discipline, in the basis `∂_{i1} ∧ … ∧ ∂_{ir}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::symexpr::ratfn::{ratfn_to_expr, to_ratfn, RatFn};
use crate::symexpr::{is_zero, ScalarExpr, ZeroCtx, ZeroVerdict};

use super::form::merge_term;
use super::multi_index::MultiIndex;

#[derive(Debug, Clone, PartialEq)]
pub struct MultivectorField {
    chart: Chart,
    degree: usize,
    terms: BTreeMap<MultiIndex, ScalarExpr>,
}

impl MultivectorField {
    pub fn zero(chart: &Chart, degree: usize) -> MultivectorField {
        MultivectorField {
            chart: chart.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn new(
        chart: &Chart,
        degree: usize,
        terms: Vec<(Vec<u32>, ScalarExpr)>,
    ) -> Result<MultivectorField> {
        if degree == 0 {
            return Err(Error::Degree(
                "multivector fields have degree >= 1".to_string(),
            ));
        }
        let mut acc: BTreeMap<MultiIndex, RatFn> = BTreeMap::new();
        for (indices, coeff) in terms {
            let idx = MultiIndex::new(indices)?;
            if idx.len() != degree {
                return Err(Error::Degree(format!(
                    "index tuple {:?} does not match multivector degree {}",
                    idx.indices(),
                    degree
                )));
            }
            if idx.max_index().is_some_and(|i| i as usize > chart.dim()) {
                return Err(Error::invalid(
                    "multivector",
                    format!("index exceeds chart dimension {}", chart.dim()),
                ));
            }
            chart.check_expr(&coeff)?;
            merge_term(&mut acc, idx, to_ratfn(&coeff)?);
        }
        Ok(MultivectorField::from_ratfn(chart, degree, acc))
    }

    pub(crate) fn from_ratfn(
        chart: &Chart,
        degree: usize,
        acc: BTreeMap<MultiIndex, RatFn>,
    ) -> MultivectorField {
        let terms = acc
            .into_iter()
            .filter(|(_, rf)| !rf.is_zero())
            .map(|(i, rf)| (i, ratfn_to_expr(&rf)))
            .collect();
        MultivectorField {
            chart: chart.clone(),
            degree,
            terms,
        }
    }

    /// A degree-1 field from one component per coordinate.
    pub fn from_components(chart: &Chart, components: &[ScalarExpr]) -> Result<MultivectorField> {
        if components.len() != chart.dim() {
            return Err(Error::invalid(
                "multivector",
                format!(
                    "expected {} components for chart `{}`",
                    chart.dim(),
                    chart.name()
                ),
            ));
        }
        let terms = components
            .iter()
            .enumerate()
            .map(|(j, c)| (vec![j as u32 + 1], c.clone()))
            .collect();
        MultivectorField::new(chart, 1, terms)
    }

    /// The basis vector `∂_i` (1-based).
    pub fn basis_vector(chart: &Chart, i: u32) -> Result<MultivectorField> {
        MultivectorField::new(chart, 1, vec![(vec![i], ScalarExpr::one())])
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &ScalarExpr)> {
        self.terms.iter()
    }

    pub fn is_zero_field(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> ScalarExpr {
        self.terms.get(idx).cloned().unwrap_or_else(ScalarExpr::zero)
    }

    /// Components of a degree-1 field, one per coordinate.
    pub fn components(&self) -> Result<Vec<ScalarExpr>> {
        if self.degree != 1 {
            return Err(Error::Degree(
                "components are defined for degree-1 fields".to_string(),
            ));
        }
        Ok((1..=self.chart.dim() as u32)
            .map(|j| self.coeff(&MultiIndex::single(j)))
            .collect())
    }

    pub fn add(&self, other: &MultivectorField) -> Result<MultivectorField> {
        self.chart.expect_same(&other.chart)?;
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot add multivectors of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut acc: BTreeMap<MultiIndex, RatFn> = BTreeMap::new();
        for (i, c) in self.terms.iter().chain(other.terms.iter()) {
            merge_term(&mut acc, i.clone(), to_ratfn(c)?);
        }
        Ok(MultivectorField::from_ratfn(&self.chart, self.degree, acc))
    }

    pub fn neg(&self) -> MultivectorField {
        MultivectorField {
            chart: self.chart.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), c.neg().normalize().expect("canonical")))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MultivectorField) -> Result<MultivectorField> {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: &ScalarExpr) -> Result<MultivectorField> {
        self.chart.check_expr(factor)?;
        let f = to_ratfn(factor)?;
        let mut acc = BTreeMap::new();
        for (i, c) in &self.terms {
            merge_term(&mut acc, i.clone(), to_ratfn(c)?.mul(&f));
        }
        Ok(MultivectorField::from_ratfn(&self.chart, self.degree, acc))
    }

    /// Exterior product of multivectors (used to form `X ∧ Y` in bracket
    /// identities).
    pub fn wedge(&self, other: &MultivectorField) -> Result<MultivectorField> {
        self.chart.expect_same(&other.chart)?;
        let degree = self.degree + other.degree;
        let mut acc: BTreeMap<MultiIndex, RatFn> = BTreeMap::new();
        for (ia, ca) in &self.terms {
            let ra = to_ratfn(ca)?;
            for (ib, cb) in &other.terms {
                if let Some((idx, sign)) = ia.wedge_merge(ib) {
                    let mut prod = ra.mul(&to_ratfn(cb)?);
                    if sign < 0 {
                        prod = prod.neg();
                    }
                    merge_term(&mut acc, idx, prod);
                }
            }
        }
        Ok(MultivectorField::from_ratfn(&self.chart, degree, acc))
    }

    /// Directional derivative `X(f)` of a scalar by a degree-1 field.
    pub fn apply_to_scalar(&self, f: &ScalarExpr) -> Result<ScalarExpr> {
        if self.degree != 1 {
            return Err(Error::Degree(
                "directional derivative needs a degree-1 field".to_string(),
            ));
        }
        let mut acc = RatFn::zero();
        for (idx, c) in &self.terms {
            let j = idx.indices()[0] as usize - 1;
            let df = f.differentiate(self.chart.coord(j))?;
            acc = acc.add(&to_ratfn(c)?.mul(&to_ratfn(&df)?));
        }
        Ok(ratfn_to_expr(&acc))
    }

    pub fn zero_verdict(&self, ctx: &ZeroCtx) -> Result<ZeroVerdict> {
        let mut verdict = ZeroVerdict::Zero;
        for c in self.terms.values() {
            match is_zero(c, ctx)? {
                ZeroVerdict::Zero => {}
                ZeroVerdict::NonZero => return Ok(ZeroVerdict::NonZero),
                ZeroVerdict::Undecided => verdict = ZeroVerdict::Undecided,
            }
        }
        Ok(verdict)
    }
}

/// Coordinate bracket `[X, Y]` of degree-1 fields:
/// `[X,Y]^j = X^i ∂_i Y^j − Y^i ∂_i X^j`.
pub fn bracket(x: &MultivectorField, y: &MultivectorField) -> Result<MultivectorField> {
    x.chart().expect_same(y.chart())?;
    if x.degree() != 1 || y.degree() != 1 {
        return Err(Error::Degree(
            "the vector-field bracket is defined for degree-1 fields".to_string(),
        ));
    }
    let chart = x.chart().clone();
    let xc = x.components()?;
    let yc = y.components()?;
    let mut comps = Vec::with_capacity(chart.dim());
    for j in 0..chart.dim() {
        let mut acc = RatFn::zero();
        for i in 0..chart.dim() {
            let dyj = yc[j].differentiate(chart.coord(i))?;
            let dxj = xc[j].differentiate(chart.coord(i))?;
            acc = acc.add(&to_ratfn(&xc[i])?.mul(&to_ratfn(&dyj)?));
            acc = acc.sub(&to_ratfn(&yc[i])?.mul(&to_ratfn(&dxj)?));
        }
        comps.push(ratfn_to_expr(&acc));
    }
    MultivectorField::from_components(&chart, &comps)
}

impl fmt::Display for MultivectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, coeff)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let one = coeff.as_constant().map(|c| {
                use num::One;
                c.is_one()
            });
            if one != Some(true) {
                write!(f, "({coeff}) ")?;
            }
            for (k, i) in idx.indices().iter().enumerate() {
                if k > 0 {
                    write!(f, "∧")?;
                }
                write!(f, "∂{}", self.chart.coord(*i as usize - 1))?;
            }
        }
        Ok(())
    }
}
