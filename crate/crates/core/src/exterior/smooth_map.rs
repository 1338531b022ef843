//! Smooth maps between charts, written componentwise, with pullback of
//! forms (coefficient substitution plus Jacobian contraction).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::BigRational;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::symexpr::ratfn::{to_ratfn, RatFn};
use crate::symexpr::{evaluate_rational, ScalarExpr};

use super::form::{merge_term, DifferentialForm};
use super::multi_index::MultiIndex;

/// A map `source -> target`, one component expression (in source
/// coordinates) per target coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothMap {
    source: Chart,
    target: Chart,
    components: Vec<ScalarExpr>,
}

impl SmoothMap {
    pub fn new(source: &Chart, target: &Chart, components: Vec<ScalarExpr>) -> Result<SmoothMap> {
        if components.len() != target.dim() {
            return Err(Error::invalid(
                "smooth map",
                format!(
                    "expected {} components into chart `{}`, got {}",
                    target.dim(),
                    target.name(),
                    components.len()
                ),
            ));
        }
        let mut canon = Vec::with_capacity(components.len());
        for c in components {
            source.check_expr(&c)?;
            canon.push(c.normalize()?);
        }
        Ok(SmoothMap {
            source: source.clone(),
            target: target.clone(),
            components: canon,
        })
    }

    pub fn identity(chart: &Chart) -> SmoothMap {
        SmoothMap {
            source: chart.clone(),
            target: chart.clone(),
            components: chart
                .coords()
                .iter()
                .map(|c| ScalarExpr::sym_arc(c.clone()))
                .collect(),
        }
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.components
    }

    fn substitution(&self) -> BTreeMap<Arc<str>, ScalarExpr> {
        self.target
            .coords()
            .iter()
            .cloned()
            .zip(self.components.iter().cloned())
            .collect()
    }

    /// Compose `self ∘ inner`.
    pub fn compose(&self, inner: &SmoothMap) -> Result<SmoothMap> {
        inner.target.expect_same(&self.source)?;
        let sub = inner.substitution();
        let comps = self
            .components
            .iter()
            .map(|c| c.substitute(&sub).normalize())
            .collect::<Result<Vec<_>>>()?;
        SmoothMap::new(&inner.source, &self.target, comps)
    }

    /// Substitute this map into a scalar on the target chart.
    pub fn apply_scalar(&self, e: &ScalarExpr) -> Result<ScalarExpr> {
        self.target.check_expr(e)?;
        e.substitute(&self.substitution()).normalize()
    }

    /// Evaluate the map at an exact rational point of the source chart.
    pub fn apply_point(
        &self,
        point: &BTreeMap<Arc<str>, BigRational>,
    ) -> Result<BTreeMap<Arc<str>, BigRational>> {
        let mut out = BTreeMap::new();
        for (name, comp) in self.target.coords().iter().zip(&self.components) {
            out.insert(name.clone(), evaluate_rational(comp, point)?);
        }
        Ok(out)
    }

    /// Jacobian entries `∂(component_i)/∂(source_j)`, row-major by target
    /// component.
    pub fn jacobian(&self) -> Result<Vec<Vec<ScalarExpr>>> {
        let mut rows = Vec::with_capacity(self.target.dim());
        for comp in &self.components {
            let mut row = Vec::with_capacity(self.source.dim());
            for j in 0..self.source.dim() {
                row.push(comp.differentiate(self.source.coord(j))?);
            }
            rows.push(row);
        }
        Ok(rows)
    }

    /// Pullback of a form along this map: substitute coefficients and wedge
    /// the pulled-back coordinate differentials. Natural with respect to
    /// the exterior derivative, and `(g ∘ f)* = f* ∘ g*`.
    pub fn pullback(&self, alpha: &DifferentialForm) -> Result<DifferentialForm> {
        alpha.chart().expect_same(&self.target)?;
        let p = alpha.degree();
        if p == 0 {
            let pulled = self.apply_scalar(&alpha.scalar_part())?;
            return DifferentialForm::from_scalar(&self.source, &pulled);
        }
        // d(f_i) as 1-forms on the source chart, indexed by target coord.
        let jac = self.jacobian()?;
        let differentials: Vec<DifferentialForm> = jac
            .iter()
            .map(|row| {
                let terms = row
                    .iter()
                    .enumerate()
                    .map(|(j, e)| (vec![j as u32 + 1], e.clone()))
                    .collect();
                DifferentialForm::new(&self.source, 1, terms)
            })
            .collect::<Result<Vec<_>>>()?;

        let sub = self.substitution();
        let mut acc: BTreeMap<MultiIndex, RatFn> = BTreeMap::new();
        for (idx, coeff) in alpha.terms() {
            let pulled_coeff = coeff.substitute(&sub).normalize()?;
            let mut wedge: Option<DifferentialForm> = None;
            for i in idx.indices() {
                let df = &differentials[*i as usize - 1];
                wedge = Some(match wedge {
                    None => df.clone(),
                    Some(w) => w.wedge(df)?,
                });
            }
            let piece = wedge.expect("positive degree");
            let rf = to_ratfn(&pulled_coeff)?;
            for (i, c) in piece.terms() {
                merge_term(&mut acc, i.clone(), to_ratfn(c)?.mul(&rf));
            }
        }
        Ok(DifferentialForm::from_ratfn(&self.source, p, acc))
    }
}

impl fmt::Display for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: (", self.source.name(), self.target.name())?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
