use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::tree_map::tree_map_values;
use super::{fold, measure_lightness, BoundCheck, BuiltMap, LightnessReport};
use crate::metric::FiniteMetricSpace;
use crate::quotient::{sum, wreath, QuotientSpace, SumSpace};
use crate::tree::{require_one_bt, MetricTree};
use crate::{Error, Result, TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WreathMap {
    /// `T / {a, b}`.
    pub quotient: QuotientSpace,
    /// The map on the wreath, indexed by quotient points.
    pub built: BuiltMap,
    /// The tree map before folding.
    pub unfolded: LightnessReport,
    /// The folded tree map on `T`.
    pub folded: LightnessReport,
    /// `Q̂(g) <= 2 + 2 Q̂(folded)`.
    pub check: BoundCheck,
}

/// A light map on the wreath `T / {a, b}`: a tree map folded at the
/// midpoint of its values at `a` and `b`, then passed to the quotient.
pub fn wreath_map(tree: &MetricTree, a: usize, b: usize) -> Result<WreathMap> {
    let q = wreath(tree, a, b)?;
    require_one_bt(tree)?;
    let (f, mut audit) = tree_map_values(tree)?;
    let unfolded = measure_lightness(tree.space(), &f);
    let folded_vals = if f[a] == f[b] {
        f
    } else {
        let mut g = fold(&f, 0.5 * (f[a] + f[b]));
        let low = g[a].min(g[b]);
        g[a] = low;
        g[b] = low;
        g
    };
    let folded = measure_lightness(tree.space(), &folded_vals);
    let g: Vec<f64> = q.representatives.iter().map(|&r| folded_vals[r]).collect();
    let report = measure_lightness(&q.space, &g);
    let check = BoundCheck::new("wreath", report.q_hat, 2.0 + 2.0 * folded.q_hat);
    audit.record(check.clone());
    Ok(WreathMap {
        built: BuiltMap {
            map: super::ScalarMap::new(g),
            report,
            audit,
            gap_repairs: 0,
        },
        quotient: q,
        unfolded,
        folded,
        check,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumMap {
    pub sum: SumSpace,
    /// The combined map, indexed by sum points.
    pub built: BuiltMap,
    pub pieces: Vec<LightnessReport>,
    /// `Q̂(F) <= 2 + 2 max Q̂(f_i)`, a conjectured bound.
    pub check: BoundCheck,
}

/// Combines maps on pointed pieces that vanish at their basepoints into a
/// map on the pointed sum.
pub fn sum_map(pieces: &[FiniteMetricSpace], maps: &[Vec<f64>]) -> Result<SumMap> {
    if pieces.len() != maps.len() {
        return Err(Error::Precondition(format!(
            "{} pieces but {} maps",
            pieces.len(),
            maps.len()
        )));
    }
    let s = sum(pieces)?;
    let mut values = vec![0.0; s.len()];
    let mut reports = Vec::with_capacity(pieces.len());
    for (i, (p, f)) in pieces.iter().zip(maps).enumerate() {
        if f.len() != p.len() {
            return Err(Error::DimensionMismatch {
                points: p.len(),
                rows: f.len(),
                bad_row: i,
                cols: 1,
            });
        }
        let base = p.basepoint().ok_or(Error::MissingBasepoint)?;
        if f[base].abs() > TOL {
            return Err(Error::NonzeroBasepoint {
                piece: i,
                value: f[base],
            });
        }
        for (k, &v) in f.iter().enumerate() {
            if k != base {
                values[s.piece_points[i][k]] = v;
            }
        }
        reports.push(measure_lightness(p, f));
    }
    let q_max = reports.iter().map(|r| r.q_hat).fold(0.0, f64::max);
    let report = measure_lightness(&s.space, &values);
    let check = BoundCheck::new("sum", report.q_hat, 2.0 + 2.0 * q_max).conjectural();
    let mut audit = super::Audit::default();
    audit.record(check.clone());
    Ok(SumMap {
        sum: s,
        built: BuiltMap {
            map: super::ScalarMap::new(values),
            report,
            audit,
            gap_repairs: 0,
        },
        pieces: reports,
        check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixtures::{path, star};
    use crate::tree::{gen_tree, Profile};

    #[test]
    fn path_wreath_folds() {
        let w = wreath_map(&path(7), 0, 6).unwrap();
        assert_eq!(w.quotient.len(), 6);
        assert!(w.check.holds, "{:?}", w.check);
        assert!(w.built.report.q_hat.is_finite());
    }

    #[test]
    fn equal_end_values_need_no_fold() {
        // Legs 3 and 4 both hang off the center of the spine 1-0-2 and get
        // the same translated map.
        let w = wreath_map(&star(4, 1), 3, 4).unwrap();
        assert_eq!(w.folded, w.unfolded);
        assert!(w.check.holds);
    }

    #[test]
    fn random_wreaths_respect_the_bound() {
        for seed in 0..10 {
            let t = gen_tree(20, seed, Profile::Geodesic).unwrap();
            let l = t.leaves();
            let w = wreath_map(&t, l[0], *l.last().unwrap()).unwrap();
            assert!(w.check.holds, "seed {seed}: {:?}", w.check);
        }
    }

    #[test]
    fn one_piece_sum_is_unchanged() {
        let p = FiniteMetricSpace::on_line(&[0.0, 1.0, 2.0]).with_basepoint(0).unwrap();
        let s = sum_map(core::slice::from_ref(&p), &[vec![0.0, 1.0, 2.0]]).unwrap();
        assert_eq!(s.built.map.values, vec![0.0, 1.0, 2.0]);
        assert_eq!(s.built.report.q_hat, s.pieces[0].q_hat);
    }

    #[test]
    fn two_segments_at_a_point() {
        let p = FiniteMetricSpace::on_line(&[0.0, 0.5, 1.0]).with_basepoint(0).unwrap();
        let s = sum_map(&[p.clone(), p], &[vec![0.0, 0.5, 1.0], vec![0.0, 0.5, 1.0]]).unwrap();
        assert!(s.check.holds && s.check.conjectural);
    }

    #[test]
    fn basepoint_must_vanish() {
        let p = FiniteMetricSpace::on_line(&[0.0, 1.0]).with_basepoint(0).unwrap();
        assert!(matches!(
            sum_map(&[p], &[vec![1.0, 2.0]]),
            Err(Error::NonzeroBasepoint { piece: 0, .. })
        ));
    }
}
