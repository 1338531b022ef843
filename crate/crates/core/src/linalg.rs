//! Linear algebra over the field of rational functions.
//!
//! Matrices with kernel-free entries (coordinate atoms only) live in an
//! honest rational-function field: rank and solving are decided exactly by
//! fraction-free (Bareiss) elimination after clearing denominators, with
//! every intermediate product kept in the free polynomial ring so the
//! fraction-free divisions stay exact.
//!
//! When entries contain transcendental kernels, structural rank in the free
//! ring is only an upper bound on the functional rank, and rank at sampled
//! points is a lower bound (a full-rank sample certifies generic full rank).
//! The reports carry which route decided the answer and the points used.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigRational, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::symexpr::poly::{self, Poly};
use crate::symexpr::ratfn::{poly_to_expr, ratfn_to_expr, RatFn};
use crate::symexpr::{evaluate, is_zero, ScalarExpr, ZeroCtx, ZeroVerdict};

/// Row-major matrix of rational functions.
#[derive(Debug, Clone)]
pub struct RfMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<RatFn>,
}

impl RfMatrix {
    pub fn zero(rows: usize, cols: usize) -> RfMatrix {
        RfMatrix {
            rows,
            cols,
            data: vec![RatFn::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<RatFn>>) -> RfMatrix {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        debug_assert!(rows.iter().all(|row| row.len() == c));
        RfMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &RatFn {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFn) {
        self.data[i * self.cols + j] = v;
    }

    pub fn has_kernel(&self) -> bool {
        self.data.iter().any(|rf| rf.has_kernel())
    }

    pub fn symbols(&self) -> Vec<Arc<str>> {
        let mut set = std::collections::BTreeSet::new();
        for rf in &self.data {
            set.extend(ratfn_to_expr(rf).symbols());
        }
        set.into_iter().collect()
    }

    /// Clear denominators row by row; returns polynomial rows (the row
    /// scaling does not change rank, consistency, or solution sets).
    fn cleared_rows(&self, extra: Option<&[RatFn]>) -> Vec<Vec<Poly>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut entries: Vec<&RatFn> = (0..self.cols).map(|j| self.at(i, j)).collect();
            if let Some(b) = extra {
                entries.push(&b[i]);
            }
            let mut denom = Poly::one();
            for e in &entries {
                // lcm(denom, den) = denom * den / gcd
                let g = poly::gcd(&denom, e.den());
                denom = denom.mul_raw(&e.den().exact_div(&g).expect("gcd divides"));
            }
            let row = entries
                .iter()
                .map(|e| {
                    let factor = denom.exact_div(e.den()).expect("lcm divisible");
                    e.num().mul_raw(&factor)
                })
                .collect();
            out.push(row);
        }
        out
    }
}

/// How a result was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    Exact,
    Sampled,
}

impl std::fmt::Display for Certainty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Certainty::Exact => write!(f, "exact"),
            Certainty::Sampled => write!(f, "sampled"),
        }
    }
}

#[derive(Debug, Clone)]
struct Echelon {
    rows: Vec<Vec<Poly>>,
    /// (row, column) of each pivot, in order.
    pivots: Vec<(usize, usize)>,
    /// Some pivot decision hit an Undecided zero test.
    undecided: bool,
}

/// Fraction-free row echelon on polynomial rows. `ncols` bounds the pivot
/// search (trailing columns ride along as right-hand sides). The pivot test
/// decides whether a candidate is usable; structurally nonzero entries whose
/// functional verdict is `Zero` are skipped, `Undecided` is recorded.
fn bareiss(mut rows: Vec<Vec<Poly>>, ncols: usize, ctx: &ZeroCtx, functional: bool) -> Echelon {
    let nrows = rows.len();
    let total_cols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut prev = Poly::one();
    let mut pivots = Vec::new();
    let mut undecided = false;
    let mut r = 0;
    for c in 0..ncols {
        if r >= nrows {
            break;
        }
        let mut chosen = None;
        let mut saw_undecided = false;
        for i in r..nrows {
            if rows[i][c].is_zero() {
                continue;
            }
            if !functional || !rows[i][c].has_kernel() {
                chosen = Some(i);
                break;
            }
            match is_zero(&poly_to_expr(&rows[i][c]), ctx) {
                Ok(ZeroVerdict::NonZero) => {
                    chosen = Some(i);
                    break;
                }
                Ok(ZeroVerdict::Zero) => {}
                _ => saw_undecided = true,
            }
        }
        let Some(ir) = chosen else {
            if saw_undecided {
                undecided = true;
            }
            continue;
        };
        rows.swap(r, ir);
        for i in r + 1..nrows {
            if rows[i][c].is_zero() && rows[r][c].is_zero() {
                continue;
            }
            for j in 0..total_cols {
                if j == c {
                    continue;
                }
                let num = rows[r][c]
                    .mul_raw(&rows[i][j])
                    .sub(&rows[i][c].mul_raw(&rows[r][j]));
                rows[i][j] = num
                    .exact_div(&prev)
                    .expect("fraction-free division is exact");
            }
            rows[i][c] = Poly::zero();
        }
        prev = rows[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    Echelon {
        rows,
        pivots,
        undecided,
    }
}

/// Structural rank in the free polynomial ring: an upper bound on the
/// functional rank, and exact when no kernels are present.
pub fn structural_rank(a: &RfMatrix, ctx: &ZeroCtx) -> usize {
    let rows = a.cleared_rows(None);
    bareiss(rows, a.cols, ctx, false).pivots.len()
}

#[derive(Debug, Clone)]
pub struct RankReport {
    pub free_rank: usize,
    pub sampled_rank: Option<usize>,
    pub certainty: Certainty,
    pub points: Vec<BTreeMap<Arc<str>, BigRational>>,
}

/// Number of sample points for rank decisions.
pub const RANK_SAMPLE_POINTS: usize = 8;

/// Rank analysis: exact for kernel-free matrices; otherwise the structural
/// upper bound plus the maximum rank over seeded sample points.
pub fn rank(a: &RfMatrix, ctx: &ZeroCtx) -> Result<RankReport> {
    let free_rank = structural_rank(a, ctx);
    if !a.has_kernel() {
        return Ok(RankReport {
            free_rank,
            sampled_rank: None,
            certainty: Certainty::Exact,
            points: Vec::new(),
        });
    }
    let exprs: Vec<ScalarExpr> = a.data.iter().map(ratfn_to_expr).collect();
    let symbols = a.symbols();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x72616e6b);
    let mut best = 0usize;
    let mut points = Vec::new();
    let mut attempts = 0;
    while points.len() < RANK_SAMPLE_POINTS && attempts < RANK_SAMPLE_POINTS * 40 {
        attempts += 1;
        let point = ctx.draw_point(&mut rng, &symbols);
        let mut vals = Vec::with_capacity(exprs.len());
        let mut ok = true;
        for e in &exprs {
            match evaluate(e, &point) {
                Ok(v) => vals.push(v),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let rows: Vec<Vec<f64>> = (0..a.rows)
            .map(|i| vals[i * a.cols..(i + 1) * a.cols].to_vec())
            .collect();
        best = best.max(f64_rank(rows, ctx.tolerance));
        points.push(point);
    }
    if points.is_empty() {
        return Err(Error::Evaluation(
            "could not evaluate matrix at any sample point".to_string(),
        ));
    }
    Ok(RankReport {
        free_rank,
        sampled_rank: Some(best),
        certainty: Certainty::Sampled,
        points,
    })
}

/// Outcome of solving `A x = b` over the rational-function field.
#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Solution {
        particular: Vec<RatFn>,
        nullspace: Vec<Vec<RatFn>>,
        certainty: Certainty,
    },
    Inconsistent {
        /// The contradictory reduced equation `0 = residual`.
        residual: ScalarExpr,
    },
    Undecided {
        reason: String,
    },
}

pub fn solve(a: &RfMatrix, b: &[RatFn], ctx: &ZeroCtx) -> Result<SolveOutcome> {
    assert_eq!(b.len(), a.rows);
    let rows = a.cleared_rows(Some(b));
    let functional = a.has_kernel() || b.iter().any(|rf| rf.has_kernel());
    let ech = bareiss(rows, a.cols, ctx, functional);
    if ech.undecided {
        return Ok(SolveOutcome::Undecided {
            reason: "a pivot zero-test was undecided".to_string(),
        });
    }
    // Consistency: any row with zero coefficient part and nonzero rhs kills it.
    let rank = ech.pivots.len();
    for i in rank..ech.rows.len() {
        let coeff_zero = (0..a.cols).all(|j| ech.rows[i][j].is_zero());
        if !coeff_zero {
            continue;
        }
        let rhs = &ech.rows[i][a.cols];
        if rhs.is_zero() {
            continue;
        }
        if !rhs.has_kernel() {
            return Ok(SolveOutcome::Inconsistent {
                residual: poly_to_expr(rhs),
            });
        }
        match is_zero(&poly_to_expr(rhs), ctx)? {
            ZeroVerdict::NonZero => {
                return Ok(SolveOutcome::Inconsistent {
                    residual: poly_to_expr(rhs),
                })
            }
            ZeroVerdict::Zero => {}
            ZeroVerdict::Undecided => {
                return Ok(SolveOutcome::Undecided {
                    reason: "a residual zero-test was undecided".to_string(),
                })
            }
        }
    }
    let pivot_col: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..a.cols).filter(|c| !pivot_col.contains(c)).collect();

    // Back substitution over the fraction field.
    let substitute = |rhs_col: &dyn Fn(usize) -> RatFn,
                      fixed: &BTreeMap<usize, RatFn>|
     -> Result<Vec<RatFn>> {
        let mut x = vec![RatFn::zero(); a.cols];
        for (c, v) in fixed {
            x[*c] = v.clone();
        }
        for &(r, c) in ech.pivots.iter().rev() {
            let mut acc = rhs_col(r);
            for j in c + 1..a.cols {
                if ech.rows[r][j].is_zero() || x[j].is_zero() {
                    continue;
                }
                acc = acc.sub(&RatFn::from_poly(ech.rows[r][j].clone()).mul(&x[j]));
            }
            x[c] = acc.div(&RatFn::from_poly(ech.rows[r][c].clone()))?;
        }
        Ok(x)
    };

    let particular = substitute(
        &|r| RatFn::from_poly(ech.rows[r][a.cols].clone()),
        &BTreeMap::new(),
    )?;
    let mut nullspace = Vec::new();
    for f in &free_cols {
        let mut fixed = BTreeMap::new();
        fixed.insert(*f, RatFn::one());
        let v = substitute(&|_| RatFn::zero(), &fixed)?;
        nullspace.push(v);
    }
    Ok(SolveOutcome::Solution {
        particular,
        nullspace,
        certainty: if functional {
            Certainty::Sampled
        } else {
            Certainty::Exact
        },
    })
}

/// Nullspace basis of `A x = 0`.
pub fn nullspace(a: &RfMatrix, ctx: &ZeroCtx) -> Result<Vec<Vec<RatFn>>> {
    match solve(a, &vec![RatFn::zero(); a.rows], ctx)? {
        SolveOutcome::Solution { nullspace, .. } => Ok(nullspace),
        SolveOutcome::Inconsistent { .. } => unreachable!("homogeneous system"),
        SolveOutcome::Undecided { reason } => Err(Error::Uncertifiable(reason)),
    }
}

/// Exact rank of a rational matrix.
pub fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].clone().recip();
        for j in c..ncols {
            rows[rank][j] = &rows[rank][j] * &inv;
        }
        for i in 0..nrows {
            if i != rank && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let delta = &rows[rank][j] * &f;
                    rows[i][j] = &rows[i][j] - &delta;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Numeric rank with partial pivoting and a relative threshold.
pub fn f64_rank(mut rows: Vec<Vec<f64>>, tolerance: f64) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let threshold = tolerance * scale;
    let mut rank = 0;
    for c in 0..ncols {
        let mut best = rank;
        let mut best_val = 0.0;
        for i in rank..nrows {
            if rows[i][c].abs() > best_val {
                best_val = rows[i][c].abs();
                best = i;
            }
        }
        if best_val <= threshold {
            continue;
        }
        rows.swap(rank, best);
        for i in rank + 1..nrows {
            let f = rows[i][c] / rows[rank][c];
            for j in c..ncols {
                rows[i][j] -= f * rows[rank][j];
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Exact nullspace basis of a rational matrix (used for pointwise kernels).
pub fn rational_nullspace(rows: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut m = rows;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone().recip();
        for j in 0..ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let delta = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &delta;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == nrows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[f] = BigRational::from_integer(1.into());
        for &(pr, pc) in &pivots {
            v[pc] = -&m[pr][f];
        }
        basis.push(v);
    }
    basis
}
