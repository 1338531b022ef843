//! Sound three-valued zero test.
//!
//! `Zero` is certified: the canonical form reduces to the zero numerator,
//! which decides the rational fragment exactly (a nonzero polynomial over
//! the coordinate atoms is a nonzero function). Expressions whose normal
//! form still contains transcendental kernels are sampled at seeded rational
//! points inside the configured box: a sample with `|value| > tolerance`
//! certifies `NonZero`; otherwise the test answers `Undecided`. Callers must
//! surface `Undecided` — it is never treated as zero.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evaluate, ratfn, ScalarExpr};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroVerdict {
    Zero,
    NonZero,
    Undecided,
}

impl std::fmt::Display for ZeroVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ZeroVerdict::Zero => write!(f, "ZERO"),
            ZeroVerdict::NonZero => write!(f, "NONZERO"),
            ZeroVerdict::Undecided => write!(f, "UNDECIDED"),
        }
    }
}

/// Sampling configuration: seed, sample count, per-coordinate box, and the
/// numerical tolerance. The defaults are the reproducibility baseline
/// recorded in reports.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCtx {
    pub seed: u64,
    pub samples: u32,
    pub box_lo: f64,
    pub box_hi: f64,
    pub tolerance: f64,
}

impl Default for ZeroCtx {
    fn default() -> Self {
        ZeroCtx {
            seed: 42,
            samples: 16,
            box_lo: -2.0,
            box_hi: 2.0,
            tolerance: 1e-9,
        }
    }
}

impl ZeroCtx {
    pub fn with_seed(seed: u64) -> ZeroCtx {
        ZeroCtx {
            seed,
            ..ZeroCtx::default()
        }
    }

    /// Denominator used for rational sample coordinates.
    const DENOM: i64 = 997;

    fn sample_bounds(&self) -> (i64, i64) {
        let lo = (self.box_lo * Self::DENOM as f64).ceil() as i64;
        let hi = (self.box_hi * Self::DENOM as f64).floor() as i64;
        (lo, hi.max(lo))
    }

    /// Deterministic RNG derived from the seed and a stable hash of the
    /// canonical expression, so distinct expressions get distinct points
    /// while runs stay reproducible.
    fn rng_for(&self, canonical: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(canonical.as_bytes()))
    }

    pub fn draw_point(
        &self,
        rng: &mut ChaCha8Rng,
        symbols: &[Arc<str>],
    ) -> BTreeMap<Arc<str>, BigRational> {
        let (lo, hi) = self.sample_bounds();
        symbols
            .iter()
            .map(|s| {
                let n = rng.gen_range(lo..=hi);
                (
                    s.clone(),
                    BigRational::new(BigInt::from(n), BigInt::from(Self::DENOM)),
                )
            })
            .collect()
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// A sample point witnessing that an expression is not identically zero.
#[derive(Debug, Clone)]
pub struct NonZeroWitness {
    pub point: Vec<(Arc<str>, BigRational)>,
    pub value: f64,
}

pub fn is_zero(e: &ScalarExpr, ctx: &ZeroCtx) -> Result<ZeroVerdict> {
    Ok(is_zero_with_witness(e, ctx)?.0)
}

pub fn is_zero_with_witness(
    e: &ScalarExpr,
    ctx: &ZeroCtx,
) -> Result<(ZeroVerdict, Option<NonZeroWitness>)> {
    let rf = ratfn::to_ratfn(e)?;
    if rf.is_zero() {
        return Ok((ZeroVerdict::Zero, None));
    }
    let canonical = ratfn::ratfn_to_expr(&rf);
    if !rf.has_kernel() {
        // Exactly decided: a nonzero rational function of independent
        // coordinates is not the zero function.
        let witness = search_witness(&canonical, ctx, 0.0);
        return Ok((ZeroVerdict::NonZero, witness));
    }
    match search_witness(&canonical, ctx, ctx.tolerance) {
        Some(w) => Ok((ZeroVerdict::NonZero, Some(w))),
        None => Ok((ZeroVerdict::Undecided, None)),
    }
}

/// Try `ctx.samples` seeded points (resampling on domain faults) and return
/// the first point where `|e|` exceeds the threshold.
fn search_witness(canonical: &ScalarExpr, ctx: &ZeroCtx, threshold: f64) -> Option<NonZeroWitness> {
    let symbols: Vec<Arc<str>> = canonical.symbols().into_iter().collect();
    let mut rng = ctx.rng_for(&canonical.to_string());
    for _ in 0..ctx.samples {
        let mut attempt = 0;
        loop {
            let point = ctx.draw_point(&mut rng, &symbols);
            match evaluate(canonical, &point) {
                Ok(v) => {
                    if v.abs() > threshold {
                        return Some(NonZeroWitness {
                            point: point.into_iter().collect(),
                            value: v,
                        });
                    }
                    break;
                }
                Err(_) => {
                    attempt += 1;
                    if attempt >= 40 {
                        break;
                    }
                }
            }
        }
    }
    None
}
