use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::tree_map::tree_map_values;
use super::{
    measure_lightness, measure_lightness_into, sum_map, translate_to, wreath_map, Audit,
    BoundCheck, BuiltMap, LightnessReport, ScalarMap,
};
use crate::metric::{find_relative_alpha_chain_in, uniform_disconnectedness_constant, Chain};
use crate::metric::FiniteMetricSpace;
use crate::quotient::{coproduct_decompose, pre_coproduct_decompose, quotient, PieceKind, QuotientSpace};
use crate::tree::{require_one_bt, MetricTree};
use crate::{Error, Result};

/// Largest image size for which the projection's lightness is measured
/// directly.
const PROJECTION_MEASURE_LIMIT: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientMapReport {
    /// Critical uniform disconnectedness constant of `Y`.
    pub alpha_star: f64,
    /// Constants of `π: X → X/Y`.
    pub report: LightnessReport,
    /// `Q̂(π) <= 9/α + 8` just below `α*`.
    pub forward: BoundCheck,
    /// `0.9 / Q̂(π)`, when `Y` has two points.
    pub beta: Option<f64>,
    /// A nondegenerate relative β-chain in `Y`; its existence refutes the
    /// converse.
    pub converse_chain: Option<Chain>,
}

impl QuotientMapReport {
    pub fn passed(&self) -> bool {
        self.forward.holds && self.converse_chain.is_none()
    }
}

fn forward_bound(alpha_star: f64) -> f64 {
    9.0 / (alpha_star * (1.0 - 1e-9)) + 8.0
}

/// Compares the lightness of the projection `X → X/Y` with the uniform
/// disconnectedness of `Y`, in both directions.
pub fn quotient_map_lightness(space: &FiniteMetricSpace, y: &[usize]) -> Result<QuotientMapReport> {
    let mut y = y.to_vec();
    y.sort_unstable();
    y.dedup();
    let alpha_star = uniform_disconnectedness_constant(space, &y)?.alpha;
    let q = quotient(space, &y)?;
    let report = measure_lightness_into(space, &q.space, &q.class_of);
    let forward = BoundCheck::new("projection", report.q_hat, forward_bound(alpha_star));
    let (mut beta, mut converse_chain) = (None, None);
    if y.len() >= 2 && report.q_hat > 0.0 {
        let b = 0.9 / report.q_hat;
        beta = Some(b);
        'search: for (i, &u) in y.iter().enumerate() {
            for &v in &y[i + 1..] {
                if let Some(c) = find_relative_alpha_chain_in(space, &y, u, v, b)? {
                    converse_chain = Some(c);
                    break 'search;
                }
            }
        }
    }
    Ok(QuotientMapReport {
        alpha_star,
        report,
        forward,
        beta,
        converse_chain,
    })
}

/// One piece `T_i / M_i` of the quotient pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientPieceStage {
    /// Vertices of `T_i`, as vertices of `T`.
    pub closure: Vec<usize>,
    pub boundary: Vec<usize>,
    pub branch_points: Vec<usize>,
    pub kinds: Vec<PieceKind>,
    /// Tree or wreath maps, one per sub-piece.
    pub sub_pieces: Vec<LightnessReport>,
    /// The sum map on `T_i / (B_i ∪ M_i)`.
    pub sum: LightnessReport,
    /// Critical constant of `[B_i ∪ M_i]` in `T_i / M_i`.
    pub alpha_star: f64,
    pub projection_bound: f64,
    /// Measured lightness of the projection when the piece is small.
    pub projection: Option<LightnessReport>,
    /// The sum map composed with the projection, on `T_i / M_i`.
    pub composite: LightnessReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientTreeMap {
    /// `T / M`.
    pub quotient: QuotientSpace,
    /// The map on `T / M`, indexed by quotient points.
    pub built: BuiltMap,
    pub pieces: Vec<QuotientPieceStage>,
    /// The map on the sum of the `T_i / M_i` before transport to `T / M`.
    pub outer_sum: LightnessReport,
}

/// A light map on `T / M` assembled from tree maps and wreath maps.
///
/// `T / M` is compared with the sum of the `T_i / M_i` over the closures
/// of the components of `T ∖ M`. Each `T_i / M_i` is projected onto
/// `T_i / (B_i ∪ M_i)`, where `B_i` are the branch points of the hull of
/// `M_i`; that space is a sum of trees and wreaths, each mapped on its own.
pub fn quotient_tree_map(tree: &MetricTree, m: &[usize]) -> Result<QuotientTreeMap> {
    require_one_bt(tree)?;
    let pc = pre_coproduct_decompose(tree, m).map_err(|e| e.at("pre_coproduct"))?;
    let mut audit = Audit::default();
    let mut stages = Vec::with_capacity(pc.pieces.len());
    let mut composites = Vec::with_capacity(pc.pieces.len());
    for piece in &pc.pieces {
        let m_local: Vec<usize> = piece
            .boundary
            .iter()
            .map(|b| piece.closure.binary_search(b).unwrap())
            .collect();
        let cp = coproduct_decompose(&piece.tree, &m_local).map_err(|e| e.at("coproduct"))?;
        let mut spaces = Vec::new();
        let mut maps = Vec::new();
        let mut sub_reports = Vec::new();
        for (sub, kind) in cp.decomposition.pieces.iter().zip(&cp.kinds) {
            let pos = |v: &usize| sub.closure.binary_search(v).unwrap();
            let g = match kind {
                PieceKind::Tree => {
                    let (mut v, a) = tree_map_values(&sub.tree).map_err(|e| e.at("tree_map"))?;
                    audit.merge(a);
                    translate_to(&mut v, pos(&sub.boundary[0]), 0.0);
                    sub.quotient.representatives.iter().map(|&r| v[r]).collect::<Vec<f64>>()
                }
                PieceKind::Wreath => {
                    let w = wreath_map(&sub.tree, pos(&sub.boundary[0]), pos(&sub.boundary[1]))
                        .map_err(|e| e.at("wreath_map"))?;
                    audit.merge(w.built.audit);
                    let mut g = w.built.map.values;
                    translate_to(&mut g, QuotientSpace::COLLAPSED, 0.0);
                    g
                }
            };
            sub_reports.push(measure_lightness(&sub.quotient.space, &g));
            spaces.push(sub.quotient.space.clone());
            maps.push(g);
        }
        let sm = sum_map(&spaces, &maps).map_err(|e| e.at("sum_map"))?;
        audit.merge(sm.built.audit.clone());
        let q_b = &cp.decomposition.quotient;
        let h: Vec<f64> = cp
            .decomposition
            .correspondence
            .iter()
            .map(|&s| sm.built.map.values[s])
            .collect();
        let composite: Vec<f64> = piece
            .quotient
            .representatives
            .iter()
            .map(|&x| h[q_b.class_of[x]])
            .collect();
        let mut marked = cp.hull_branch_points.clone();
        marked.extend(&m_local);
        let subset = piece.quotient.classes(&marked);
        let alpha_star = uniform_disconnectedness_constant(&piece.quotient.space, &subset)
            .map_err(|e| e.at("projection"))?
            .alpha;
        let projection_bound = forward_bound(alpha_star);
        let projection = (piece.quotient.len() <= PROJECTION_MEASURE_LIMIT).then(|| {
            let to_b: Vec<usize> = piece
                .quotient
                .representatives
                .iter()
                .map(|&x| q_b.class_of[x])
                .collect();
            let r = measure_lightness_into(&piece.quotient.space, &q_b.space, &to_b);
            audit.record(BoundCheck::new("projection", r.q_hat, projection_bound));
            r
        });
        stages.push(QuotientPieceStage {
            closure: piece.closure.clone(),
            boundary: piece.boundary.clone(),
            branch_points: cp.hull_branch_points.iter().map(|&b| piece.closure[b]).collect(),
            kinds: cp.kinds.clone(),
            sub_pieces: sub_reports,
            sum: sm.built.report,
            alpha_star,
            projection_bound,
            projection,
            composite: measure_lightness(&piece.quotient.space, &composite),
        });
        composites.push(composite);
    }
    let spaces: Vec<FiniteMetricSpace> = pc.pieces.iter().map(|p| p.quotient.space.clone()).collect();
    let outer = sum_map(&spaces, &composites).map_err(|e| e.at("outer_sum"))?;
    audit.merge(outer.built.audit.clone());
    let values: Vec<f64> = pc
        .correspondence
        .iter()
        .map(|&s| outer.built.map.values[s])
        .collect();
    if values.len() != pc.quotient.len() {
        return Err(Error::Structural("quotient and sum sizes differ".into()));
    }
    let built = BuiltMap {
        report: measure_lightness(&pc.quotient.space, &values),
        map: ScalarMap::new(values),
        audit,
        gap_repairs: 0,
    };
    Ok(QuotientTreeMap {
        quotient: pc.quotient,
        built,
        pieces: stages,
        outer_sum: outer.built.report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::light::tree_map;
    use crate::tree::fixtures::{path, star};
    use crate::tree::{gen_tree, Profile};
    use alloc::vec;

    #[test]
    fn single_point_projection_is_an_isometry() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0, 3.0, 3.5]);
        let r = quotient_map_lightness(&s, &[2]).unwrap();
        assert_eq!(r.report.q_hat, 1.0);
        assert!(r.passed());
    }

    #[test]
    fn geometric_set_on_a_line() {
        let mut xs: Vec<f64> = (0..8).map(|k| libm::pow(2.0, -(k as f64))).collect();
        xs.push(0.0);
        xs.extend([0.3, 0.7, 1.6, 2.2]);
        let s = FiniteMetricSpace::on_line(&xs);
        let y: Vec<usize> = (0..9).collect();
        let r = quotient_map_lightness(&s, &y).unwrap();
        assert!(r.alpha_star > 0.4);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn one_leaf_reduces_to_tree_map() {
        let t = star(3, 2);
        let q = quotient_tree_map(&t, &[2]).unwrap();
        let direct = tree_map(&t).unwrap();
        assert_eq!(q.pieces.len(), 1);
        assert_eq!(q.pieces[0].kinds, vec![PieceKind::Tree]);
        let mut a: Vec<f64> = q.built.map.values.clone();
        let shift = direct.map.values[2];
        let mut b: Vec<f64> = q
            .quotient
            .representatives
            .iter()
            .map(|&x| direct.map.values[x] - shift)
            .collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn two_path_ends_give_a_wreath() {
        let q = quotient_tree_map(&path(6), &[0, 5]).unwrap();
        assert_eq!(q.pieces[0].kinds, vec![PieceKind::Wreath]);
        assert!(q.built.report.q_hat.is_finite());
    }

    #[test]
    fn random_trees_with_leaf_subsets() {
        for seed in 0..4 {
            let t = gen_tree(30, seed, Profile::Geodesic).unwrap();
            let leaves = t.leaves();
            let m: Vec<usize> = leaves.iter().copied().step_by(2).collect();
            let q = quotient_tree_map(&t, &m).unwrap();
            assert!(q.built.report.q_hat.is_finite());
            assert_eq!(q.built.audit.proved_failures().count(), 0, "{:?}", q.built.audit);
        }
    }
}
