//! Coordinate charts.
//!
//! A chart is an ordered list of distinct coordinate names. Every expression,
//! form, and field lives on exactly one chart; operations check chart
//! compatibility at their boundaries.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug)]
struct ChartData {
    name: String,
    coords: Vec<Arc<str>>,
}

/// An explicit coordinate chart of dimension `m >= 1`.
///
/// Cheap to clone; equality is by name and coordinate list.
#[derive(Clone, Debug)]
pub struct Chart {
    inner: Arc<ChartData>,
}

impl Chart {
    pub fn new<S: AsRef<str>>(name: &str, coords: &[S]) -> Result<Chart> {
        if coords.is_empty() {
            return Err(Error::invalid("chart", "a chart needs at least one coordinate"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for c in coords {
            if !seen.insert(c.as_ref().to_string()) {
                return Err(Error::invalid(
                    "chart",
                    format!("duplicate coordinate `{}` in chart `{}`", c.as_ref(), name),
                ));
            }
        }
        Ok(Chart {
            inner: Arc::new(ChartData {
                name: name.to_string(),
                coords: coords.iter().map(|c| Arc::from(c.as_ref())).collect(),
            }),
        })
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn dim(&self) -> usize {
        self.inner.coords.len()
    }

    pub fn coords(&self) -> &[Arc<str>] {
        &self.inner.coords
    }

    /// Coordinate name at 0-based position `i`.
    pub fn coord(&self, i: usize) -> &Arc<str> {
        &self.inner.coords[i]
    }

    /// 0-based position of a coordinate name.
    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.inner.coords.iter().position(|c| c.as_ref() == name)
    }

    pub fn has_coord(&self, name: &str) -> bool {
        self.coord_index(name).is_some()
    }

    /// Checks that every symbol of `e` is a coordinate of this chart.
    pub fn check_expr(&self, e: &crate::symexpr::ScalarExpr) -> Result<()> {
        for s in e.symbols() {
            if !self.has_coord(&s) {
                return Err(Error::UnknownSymbol(s.to_string()));
            }
        }
        Ok(())
    }

    pub fn same_as(&self, other: &Chart) -> bool {
        self == other
    }

    /// Error helper for operations that require matching charts.
    pub fn expect_same(&self, other: &Chart) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ChartMismatch(
                self.name().to_string(),
                other.name().to_string(),
            ))
        }
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.name == other.inner.name && self.inner.coords == other.inner.coords)
    }
}

impl Eq for Chart {}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.inner.name)?;
        for (i, c) in self.inner.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Chart::new("M", &["q", "p"]).is_ok());
        assert!(Chart::new("M", &["q", "q"]).is_err());
        assert!(Chart::new("M", &[] as &[&str]).is_err());
    }

    #[test]
    fn coordinate_lookup() {
        let m = Chart::new("M", &["q", "p"]).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.coord_index("p"), Some(1));
        assert_eq!(m.coord_index("z"), None);
    }
}
