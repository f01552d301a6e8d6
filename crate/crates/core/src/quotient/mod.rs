//! Metric quotients, pointed sums and the tree decompositions built from
//! them.

mod chain_lift;
mod coproduct;
mod sum;
mod uniform;
mod whitney_checks;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::metric::FiniteMetricSpace;
use crate::{Error, Result, TOL};

pub use chain_lift::{chain_lift, ChainLiftCase, ChainLiftReport};
pub use coproduct::{
    coproduct_decompose, pre_coproduct_decompose, wreath, Coproduct, Piece, PieceKind,
    PreCoproduct,
};
pub use sum::{sum, SumSpace};
pub use uniform::{branch_uniform_disconnect_check, UniformReport};
pub use whitney_checks::{
    whitney_isometry_check, whitney_quotient_check, CheckStatus, WhitneyIsometryReport,
    WhitneyQuotientReport,
};

/// `X / E` with `ρ([a],[b]) = min{d(a,b), d(a,E) + d(b,E)}`.
///
/// The collapsed class `[E]` is index 0 of [`QuotientSpace::space`] and its
/// basepoint; the remaining points follow in parent order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientSpace {
    /// The collapsed set, sorted.
    pub collapsed: Vec<usize>,
    /// Parent index to quotient index.
    pub class_of: Vec<usize>,
    /// Quotient index to a parent representative (the smallest member of
    /// `E` for the collapsed class).
    pub representatives: Vec<usize>,
    pub space: FiniteMetricSpace,
}

impl QuotientSpace {
    pub const COLLAPSED: usize = 0;

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    /// `ρ` between the classes of two parent points.
    pub fn rho(&self, a: usize, b: usize) -> f64 {
        self.space.d(self.class_of[a], self.class_of[b])
    }

    pub fn is_collapsed(&self, parent: usize) -> bool {
        self.class_of[parent] == Self::COLLAPSED
    }

    /// Classes of a set of parent points, deduplicated, in first-seen order.
    pub fn classes(&self, parents: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for &p in parents {
            let c = self.class_of[p];
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }
}

/// Collapses `collapsed` to a single point.
pub fn quotient(space: &FiniteMetricSpace, collapsed: &[usize]) -> Result<QuotientSpace> {
    space.check_indices(collapsed)?;
    if collapsed.is_empty() {
        return Err(Error::EmptySubset("collapsed set"));
    }
    let n = space.len();
    let mut e = collapsed.to_vec();
    e.sort_unstable();
    e.dedup();
    let mut in_e = vec![false; n];
    for &x in &e {
        in_e[x] = true;
    }
    let mut class_of = vec![0; n];
    let mut representatives = vec![e[0]];
    for x in 0..n {
        if !in_e[x] {
            class_of[x] = representatives.len();
            representatives.push(x);
        }
    }
    let de: Vec<f64> = representatives
        .iter()
        .map(|&x| space.dist_to_set(x, &e))
        .collect();
    let m = representatives.len();
    let mut rows = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let v = if i == 0 {
                de[j]
            } else {
                f64::min(space.d(representatives[i], representatives[j]), de[i] + de[j])
            };
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    let mut ids: Vec<String> = representatives
        .iter()
        .map(|&x| String::from(space.id(x)))
        .collect();
    ids[0] = format!("[{}]", space.id(e[0]));
    let q = FiniteMetricSpace::new(ids, rows)?.with_basepoint(0)?;
    Ok(QuotientSpace {
        collapsed: e,
        class_of,
        representatives,
        space: q,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleQuotientReport {
    pub points: usize,
    pub max_deviation: f64,
    /// Parent representatives of the worst pair.
    pub witness: Option<(usize, usize)>,
    pub passed: bool,
}

/// Compares `Z / Y` with `(Z / X) / (Y / X)` for `X ⊂ Y ⊂ Z`, matching
/// points through their parent representatives.
pub fn double_quotient_check(
    space: &FiniteMetricSpace,
    x: &[usize],
    y: &[usize],
) -> Result<DoubleQuotientReport> {
    if let Some(&p) = x.iter().find(|p| !y.contains(p)) {
        return Err(Error::NotSubset(p));
    }
    let zy = quotient(space, y)?;
    let zx = quotient(space, x)?;
    let yx: Vec<usize> = zx.classes(y);
    let right = quotient(&zx.space, &yx)?;
    let to_right = |z: usize| right.class_of[zx.class_of[z]];
    let reps = &zy.representatives;
    let mut rep = DoubleQuotientReport {
        points: zy.len(),
        max_deviation: 0.0,
        witness: None,
        passed: right.len() == zy.len(),
    };
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let l = zy.space.d(i, j);
            let r = right.space.d(to_right(reps[i]), to_right(reps[j]));
            let dev = (l - r).abs();
            if rep.witness.is_none() || dev > rep.max_deviation {
                rep.max_deviation = dev;
                rep.witness = Some((reps[i], reps[j]));
            }
        }
    }
    rep.passed &= rep.max_deviation <= TOL;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::validate_metric;

    #[test]
    fn singleton_quotient_is_isometric() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0, 3.0, 7.0]);
        let q = quotient(&s, &[2]).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(q.rho(a, b), s.d(a, b));
            }
        }
    }

    #[test]
    fn line_with_collapsed_ends() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0, 2.0, 3.0]);
        let q = quotient(&s, &[0, 3]).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(q.rho(1, 2), 1.0);
        assert_eq!(q.rho(1, 3), 1.0);
        assert_eq!(q.rho(0, 3), 0.0);
        assert_eq!(q.space.id(0), "[0]");
        assert_eq!(q.space.basepoint(), Some(0));
        assert!(validate_metric(&q.space).is_valid());
    }

    #[test]
    fn empty_collapse_is_rejected() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0]);
        assert!(quotient(&s, &[]).is_err());
    }

    #[test]
    fn double_quotient_trivial_cases() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0, 2.5, 4.0, 4.5]);
        let r = double_quotient_check(&s, &[1, 3], &[1, 3]).unwrap();
        assert!(r.passed);
        let r = double_quotient_check(&s, &[0], &[0, 4]).unwrap();
        assert!(r.passed);
        assert!(double_quotient_check(&s, &[2], &[0, 4]).is_err());
    }
}
