//! Differential forms as sparse multi-indexed coefficient maps.

use std::collections::BTreeMap;
use std::fmt;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::symexpr::ratfn::{ratfn_to_expr, to_ratfn, RatFn};
use crate::symexpr::{is_zero, ScalarExpr, ZeroCtx, ZeroVerdict};

use super::multi_index::MultiIndex;

/// A degree-`p` form on a chart: strictly increasing index tuples mapped to
/// canonical scalar coefficients. Zero-pruned: no stored coefficient
/// normalizes to the zero literal.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialForm {
    chart: Chart,
    degree: usize,
    terms: BTreeMap<MultiIndex, ScalarExpr>,
}

impl DifferentialForm {
    pub fn zero(chart: &Chart, degree: usize) -> DifferentialForm {
        DifferentialForm {
            chart: chart.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Build from `(indices, coefficient)` records, validating the index
    /// discipline and pruning coefficients that normalize to zero.
    pub fn new(
        chart: &Chart,
        degree: usize,
        terms: Vec<(Vec<u32>, ScalarExpr)>,
    ) -> Result<DifferentialForm> {
        let mut acc: BTreeMap<MultiIndex, RatFn> = BTreeMap::new();
        for (indices, coeff) in terms {
            let idx = MultiIndex::new(indices)?;
            if idx.len() != degree {
                return Err(Error::Degree(format!(
                    "index tuple {:?} does not match form degree {}",
                    idx.indices(),
                    degree
                )));
            }
            if idx.max_index().is_some_and(|i| i as usize > chart.dim()) {
                return Err(Error::invalid(
                    "form",
                    format!("index exceeds chart dimension {}", chart.dim()),
                ));
            }
            chart.check_expr(&coeff)?;
            let rf = to_ratfn(&coeff)?;
            merge_term(&mut acc, idx, rf);
        }
        Ok(DifferentialForm::from_ratfn(chart, degree, acc))
    }

    pub(crate) fn from_ratfn(
        chart: &Chart,
        degree: usize,
        acc: BTreeMap<MultiIndex, RatFn>,
    ) -> DifferentialForm {
        let terms = acc
            .into_iter()
            .filter(|(_, rf)| !rf.is_zero())
            .map(|(i, rf)| (i, ratfn_to_expr(&rf)))
            .collect();
        DifferentialForm {
            chart: chart.clone(),
            degree,
            terms,
        }
    }

    /// The basis form `dx^{i1} ∧ … ∧ dx^{ip}`.
    pub fn basis(chart: &Chart, indices: &[u32]) -> Result<DifferentialForm> {
        DifferentialForm::new(chart, indices.len(), vec![(indices.to_vec(), ScalarExpr::one())])
    }

    /// A scalar as a degree-0 form.
    pub fn from_scalar(chart: &Chart, e: &ScalarExpr) -> Result<DifferentialForm> {
        DifferentialForm::new(chart, 0, vec![(vec![], e.clone())])
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

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Structurally zero (all coefficients pruned).
    pub fn is_zero_form(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> ScalarExpr {
        self.terms.get(idx).cloned().unwrap_or_else(ScalarExpr::zero)
    }

    /// The unique coefficient of a degree-0 form.
    pub fn scalar_part(&self) -> ScalarExpr {
        self.coeff(&MultiIndex::empty())
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.chart.expect_same(&other.chart)?;
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut acc = self.ratfn_terms()?;
        for (i, c) in &other.terms {
            merge_term(&mut acc, i.clone(), to_ratfn(c)?);
        }
        Ok(DifferentialForm::from_ratfn(&self.chart, self.degree, acc))
    }

    pub fn neg(&self) -> DifferentialForm {
        DifferentialForm {
            chart: self.chart.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), c.neg().normalize().expect("canonical")))
                .collect(),
        }
    }

    pub fn sub(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: &ScalarExpr) -> Result<DifferentialForm> {
        self.chart.check_expr(factor)?;
        let f = to_ratfn(factor)?;
        let mut acc = BTreeMap::new();
        for (i, c) in &self.terms {
            merge_term(&mut acc, i.clone(), to_ratfn(c)?.mul(&f));
        }
        Ok(DifferentialForm::from_ratfn(&self.chart, self.degree, acc))
    }

    /// Wedge product; graded-commutative.
    pub fn wedge(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
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
        Ok(DifferentialForm::from_ratfn(&self.chart, degree, acc))
    }

    /// Exterior derivative; an antiderivation of degree 1 with `d∘d = 0`.
    pub fn d(&self) -> Result<DifferentialForm> {
        let m = self.chart.dim() as u32;
        let mut acc: BTreeMap<MultiIndex, RatFn> = BTreeMap::new();
        for (idx, coeff) in &self.terms {
            for j in 1..=m {
                if idx.contains(j) {
                    continue;
                }
                let dc = coeff.differentiate(self.chart.coord(j as usize - 1))?;
                if dc.is_zero_literal() {
                    continue;
                }
                let (new_idx, sign) = idx.insert(j).expect("j not in idx");
                let mut rf = to_ratfn(&dc)?;
                if sign < 0 {
                    rf = rf.neg();
                }
                merge_term(&mut acc, new_idx, rf);
            }
        }
        Ok(DifferentialForm::from_ratfn(&self.chart, self.degree + 1, acc))
    }

    /// Three-valued zero test over all coefficients.
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

    pub(crate) fn ratfn_terms(&self) -> Result<BTreeMap<MultiIndex, RatFn>> {
        self.terms
            .iter()
            .map(|(i, c)| Ok((i.clone(), to_ratfn(c)?)))
            .collect()
    }
}

pub(crate) fn merge_term(acc: &mut BTreeMap<MultiIndex, RatFn>, idx: MultiIndex, rf: RatFn) {
    match acc.entry(idx) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(rf);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get().add(&rf);
            *e.get_mut() = sum;
        }
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, coeff)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if idx.is_empty() {
                write!(f, "{coeff}")?;
                continue;
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
                write!(f, "d{}", self.chart.coord(*i as usize - 1))?;
            }
        }
        Ok(())
    }
}
