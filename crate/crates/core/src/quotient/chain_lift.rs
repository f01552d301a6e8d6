use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::quotient;
use crate::metric::{is_relative_chain, max_step, Chain, ChainKind, FiniteMetricSpace};
use crate::{Error, Result, TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ChainLiftCase {
    /// Every class stays closer to `[x]` than half of `ρ([x],[E])`; the
    /// chain is returned whole.
    Whole,
    /// The chain is cut before the first class at least that far from `[x]`.
    Truncated { i_star: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLiftReport {
    /// The input chain after orientation and loop erasure, as parent points.
    pub normalized: Vec<usize>,
    pub case: ChainLiftCase,
    pub lifted: Chain,
    pub alpha: f64,
    /// `ρ([x],[y])` for the oriented endpoints.
    pub rho_xy: f64,
    /// `d(w_0, w_max)`.
    pub span: f64,
    /// `d(w_0, E)`.
    pub start_to_e: f64,
    /// `max step / span` of the lifted chain.
    pub lifted_ratio: f64,
    pub in_b: bool,
    pub relative_ok: bool,
    pub far_from_e: bool,
    /// `span >= ρ([x],[y]) / 8`.
    pub span_bound_ok: bool,
}

impl ChainLiftReport {
    pub fn passed(&self) -> bool {
        self.in_b
            && self.relative_ok
            && self.far_from_e
            && self.span_bound_ok
            && self.lifted.is_nondegenerate()
    }
}

/// Lifts a nondegenerate relative α-chain of `[B ∪ E] ⊂ X / E` to a
/// nondegenerate relative 8α-chain of `B` starting far from `E`.
///
/// `chain` lists parent points of `B ∪ E`; points of `E` all stand for the
/// class `[E]`.
pub fn chain_lift(
    space: &FiniteMetricSpace,
    b: &[usize],
    e: &[usize],
    chain: &[usize],
    alpha: f64,
) -> Result<ChainLiftReport> {
    space.check_indices(b)?;
    space.check_indices(chain)?;
    if !(alpha > 0.0 && alpha <= 0.125) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            range: "(0, 1/8]",
        });
    }
    let q = quotient(space, e)?;
    if let Some(&p) = chain.iter().find(|p| !b.contains(p) && !e.contains(p)) {
        return Err(Error::NotSubset(p));
    }
    let classes: Vec<usize> = chain.iter().map(|&p| q.class_of[p]).collect();
    let (first, last) = match (classes.first(), classes.last()) {
        (Some(&f), Some(&l)) if f != l => (f, l),
        _ => return Err(Error::DegenerateChain),
    };
    if !is_relative_chain(&q.space, &classes, alpha) {
        return Err(Error::Precondition(format!(
            "input is not a relative {alpha}-chain in the quotient"
        )));
    }
    // Orient so that [x] is at least as far from [E] as [y].
    let mut cs = classes;
    if q.space.d(first, 0) < q.space.d(last, 0) {
        cs.reverse();
    }
    // Loop erasure: jump forward from each class to its last occurrence.
    let mut erased = Vec::with_capacity(cs.len());
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        erased.push(c);
        i = cs.iter().rposition(|&d| d == c).unwrap() + 1;
    }
    let x = erased[0];
    let y = *erased.last().unwrap();
    let rho_e = q.space.d(x, 0);
    let rho_xy = q.space.d(x, y);
    let i_star = erased
        .iter()
        .position(|&z| q.space.d(x, z) >= 0.5 * rho_e);
    let (case, kept) = match i_star {
        None => (ChainLiftCase::Whole, &erased[..]),
        Some(i) => (ChainLiftCase::Truncated { i_star: i }, &erased[..i]),
    };
    let w: Vec<usize> = kept.iter().map(|&c| q.representatives[c]).collect();
    let normalized = erased.iter().map(|&c| q.representatives[c]).collect();
    let span = if w.len() >= 2 {
        space.d(w[0], *w.last().unwrap())
    } else {
        0.0
    };
    let step = max_step(space, &w);
    let start_to_e = space.dist_to_set(w[0], e);
    Ok(ChainLiftReport {
        normalized,
        case,
        in_b: w.iter().all(|p| b.contains(p)),
        relative_ok: w.len() >= 2 && step <= 8.0 * alpha * span + TOL,
        far_from_e: start_to_e > 2.0 * span,
        span_bound_ok: span >= rho_xy / 8.0 - TOL,
        lifted_ratio: if span > 0.0 { step / span } else { f64::INFINITY },
        lifted: Chain {
            indices: w,
            scale: 8.0 * alpha,
            kind: ChainKind::Relative,
        },
        alpha,
        rho_xy,
        span,
        start_to_e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn chain_far_from_e_is_kept() {
        let mut xs: Vec<f64> = (0..=10).map(|k| 100.0 + k as f64 / 10.0).collect();
        xs.push(0.0);
        let s = FiniteMetricSpace::on_line(&xs);
        let b: Vec<usize> = (0..=10).collect();
        let r = chain_lift(&s, &b, &[11], &b, 0.1).unwrap();
        assert_eq!(r.case, ChainLiftCase::Whole);
        assert_eq!(r.lifted.indices.len(), 11);
        assert!((r.span - 1.0).abs() < 1e-12);
        assert!(r.passed());
    }

    #[test]
    fn chain_running_into_e_is_truncated() {
        // Points 1.0, 0.9, ..., 0.1 and E = {0}: the chain walks into E.
        let mut xs: Vec<f64> = (1..=10).rev().map(|k| k as f64 / 10.0).collect();
        xs.push(0.0);
        let s = FiniteMetricSpace::on_line(&xs);
        let b: Vec<usize> = (0..10).collect();
        let chain: Vec<usize> = (0..=10).collect();
        let r = chain_lift(&s, &b, &[10], &chain, 0.1).unwrap();
        assert_eq!(r.case, ChainLiftCase::Truncated { i_star: 5 });
        assert_eq!(r.lifted.indices, vec![0, 1, 2, 3, 4]);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0, 2.0]);
        assert!(chain_lift(&s, &[0, 1], &[2], &[0, 1], 0.5).is_err());
        assert_eq!(
            chain_lift(&s, &[0, 1], &[2], &[0, 1, 0], 0.1).unwrap_err(),
            Error::DegenerateChain
        );
    }
}
