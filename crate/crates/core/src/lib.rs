//! A symbolic exterior-calculus engine on explicit coordinate charts.
//!
//! The crate provides exact symbolic scalar expressions, differential forms
//! and multivector fields with wedge/derivative/contraction/pullback,
//! verification of multisymplectic structures and Hamiltonian vector-field
//! solving, Lie-algebra actions with (co)momentum maps, momentum-type
//! submanifolds with the reduction theorem, and first-order Lagrangian field
//! theory with Noether currents.
//!
//! Every check is three-valued (`yes` / `no` / `undecided`): the rational
//! fragment of the coefficient algebra is decided exactly, while
//! transcendental identities beyond a small rewrite table fall back to
//! seeded numerical sampling and report honestly when they cannot certify.

// Index-heavy linear algebra reads better with explicit loops.
#![allow(clippy::needless_range_loop)]

pub mod action;
pub mod chart;
pub mod error;
pub mod exterior;
pub mod lagfield;
pub mod linalg;
pub mod msgeom;
pub mod report;
pub mod submfd;
pub mod symexpr;

pub use chart::Chart;
pub use error::{Error, Result};
pub use exterior::{DifferentialForm, MultivectorField, SmoothMap};
pub use report::Tri;
pub use symexpr::{ScalarExpr, ZeroCtx, ZeroVerdict};
