//! Finite-scale metric geometry of bounded-turning trees.
//!
//! Everything here works on [`FiniteMetricSpace`], a point set with a full
//! distance matrix. On top of it the crate provides:
//!
//! * [`metric`]: validation, doubling constants, δ-components, relative
//!   α-chains and uniform disconnectedness, Whitney nets, McShane extension;
//! * [`tree`]: combinatorial trees carrying a metric, with arcs, medians,
//!   hulls, retractions, the 1-bounded-turning remetrization and generators;
//! * [`quotient`]: metric quotients, pointed sums, the tree decompositions
//!   into sums of subtrees and wreaths, chain lifting and the checks built
//!   on them;
//! * [`light`]: exact Lipschitz and lightness constants of real-valued maps
//!   and builders for Lipschitz light maps on arcs, trees, wreaths, sums,
//!   unions and quotients;
//! * [`freespace`]: Lipschitz free-space norms via min-cost flow and a dual
//!   linear program, with an exact rational mode.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod dsu;
pub mod error;
pub mod freespace;
pub mod light;
pub mod metric;
pub mod quotient;
pub mod tree;

pub use error::{Error, Result};
pub use freespace::FreeVector;
pub use light::{LightnessReport, ScalarMap};
pub use metric::{Chain, FiniteMetricSpace, WhitneyNet};
pub use quotient::{QuotientSpace, SumSpace};
pub use tree::MetricTree;

/// Absolute tolerance used by every metric comparison in the crate.
pub const TOL: f64 = 1e-9;
