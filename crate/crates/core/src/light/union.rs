use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::extend::leaf_subset_values;
use super::tree_map::tree_map_values;
use super::{
    glue_subset_components, glue_two_piece_check, measure_lightness, Audit, BuiltMap, GluePiece,
    LightnessReport, TwoPieceReport,
};
use crate::metric::FiniteMetricSpace;
use crate::tree::{components_minus, require_one_bt, MetricTree};
use crate::{Error, Result};

/// A tree whose vertices are points of an ambient space. Its metric is the
/// ambient one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnionTree {
    pub vertices: Vec<usize>,
    /// Edges between ambient indices.
    pub edges: Vec<(usize, usize)>,
}

impl UnionTree {
    /// The tree on the sorted vertex list, with local indices.
    fn realize(&self, ambient: &FiniteMetricSpace) -> Result<(MetricTree, Vec<usize>)> {
        let mut verts = self.vertices.clone();
        verts.sort_unstable();
        verts.dedup();
        let local = |g: usize| {
            verts
                .binary_search(&g)
                .map_err(|_| Error::NotATree(format!("edge endpoint {g} is not a vertex")))
        };
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| Ok((local(a)?, local(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let t = MetricTree::new(ambient.restrict(&verts)?, edges)?;
        Ok((t, verts))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnionStage {
    /// Points shared with the earlier trees.
    pub shared: usize,
    /// The stage map on this tree.
    pub report: LightnessReport,
    /// The map on all trees so far against its two pieces; absent at
    /// stage 0.
    pub two_piece: Option<TwoPieceReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnionMap {
    /// Indexed by ambient points.
    pub built: BuiltMap,
    pub stages: Vec<UnionStage>,
}

/// A light map on a union of 1-bounded-turning trees covering the ambient
/// space, built one tree at a time.
///
/// Each new tree keeps the values already assigned on the points it
/// shares with earlier trees; every component of the rest is filled by
/// extending from its boundary leaves.
pub fn union_map(ambient: &FiniteMetricSpace, trees: &[UnionTree]) -> Result<UnionMap> {
    if trees.is_empty() {
        return Err(Error::EmptySubset("tree list"));
    }
    let realized = trees
        .iter()
        .map(|t| {
            let (tree, verts) = t.realize(ambient)?;
            require_one_bt(&tree)?;
            Ok((tree, verts))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = ambient.len();
    let mut values = vec![f64::NAN; n];
    let mut audit = Audit::default();
    let mut stages = Vec::with_capacity(trees.len());
    let mut covered: Vec<usize> = Vec::new();
    let mut repairs = 0;
    for (tree, verts) in &realized {
        let shared: Vec<usize> = (0..verts.len())
            .filter(|&k| !values[verts[k]].is_nan())
            .collect();
        let local = if shared.is_empty() {
            let (v, a) = tree_map_values(tree)?;
            audit.merge(a);
            v
        } else {
            let f_y: Vec<f64> = shared.iter().map(|&k| values[verts[k]]).collect();
            let mut pieces = Vec::new();
            for comp in components_minus(tree, &shared) {
                let (sub, cv) = tree.induced(&comp.closure)?;
                let m: Vec<usize> = comp
                    .boundary
                    .iter()
                    .map(|b| cv.binary_search(b).unwrap())
                    .collect();
                let fm: Vec<f64> = comp.boundary.iter().map(|&b| values[verts[b]]).collect();
                let (v, a, r) = leaf_subset_values(&sub, &m, &fm)?;
                audit.merge(a);
                repairs += r;
                pieces.push(GluePiece {
                    closure: comp.closure,
                    values: v,
                });
            }
            let g = glue_subset_components(tree, &shared, &f_y, &pieces)?;
            audit.merge(g.audit());
            g.map.values
        };
        let report = measure_lightness(tree.space(), &local);
        let previous = covered.clone();
        for (k, &g) in verts.iter().enumerate() {
            if values[g].is_nan() {
                values[g] = local[k];
                covered.push(g);
            }
        }
        covered.sort_unstable();
        let two_piece = if previous.is_empty() {
            None
        } else {
            let sub = ambient.restrict(&covered)?;
            let pos = |g: &usize| covered.binary_search(g).unwrap();
            let a: Vec<usize> = previous.iter().map(pos).collect();
            let b: Vec<usize> = verts.iter().map(pos).collect();
            let vals: Vec<f64> = covered.iter().map(|&g| values[g]).collect();
            let r = glue_two_piece_check(&sub, &vals, &a, &b)?;
            audit.record(r.check.clone());
            Some(r)
        };
        stages.push(UnionStage {
            shared: shared.len(),
            report,
            two_piece,
        });
    }
    if let Some(p) = values.iter().position(|v| v.is_nan()) {
        return Err(Error::Precondition(format!("ambient point {p} lies on no tree")));
    }
    let mut built = BuiltMap::measured(ambient, values, audit);
    built.gap_repairs = repairs;
    Ok(UnionMap { built, stages })
}

/// Two curves `{(x, 0)}` and `{(x, x²)}` over `[0, 1]` meeting at the
/// origin (index 0). The first has `per_curve` points spaced `1/(per_curve−1)`,
/// the second `per_curve` points besides the origin spaced `1/per_curve`.
pub fn cusp(per_curve: usize) -> Result<(FiniteMetricSpace, Vec<UnionTree>)> {
    if per_curve < 2 {
        return Err(Error::InvalidParameter {
            name: "points per curve",
            value: per_curve as f64,
            range: "[2, inf)",
        });
    }
    let mut pts = vec![vec![0.0, 0.0]];
    for i in 1..per_curve {
        pts.push(vec![i as f64 / (per_curve - 1) as f64, 0.0]);
    }
    for i in 1..=per_curve {
        let x = i as f64 / per_curve as f64;
        pts.push(vec![x, x * x]);
    }
    let space = FiniteMetricSpace::euclidean(&pts);
    let flat: Vec<usize> = (0..per_curve).collect();
    let curved: Vec<usize> = core::iter::once(0).chain(per_curve..2 * per_curve).collect();
    let as_path = |v: &[usize]| UnionTree {
        vertices: v.to_vec(),
        edges: v.windows(2).map(|w| (w[0], w[1])).collect(),
    };
    Ok((space, vec![as_path(&flat), as_path(&curved)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::light::tree_map;

    fn line_path(xs: &[f64], offset: f64) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| vec![x, offset]).collect()
    }

    #[test]
    fn far_apart_paths_are_independent() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let mut pts = line_path(&xs, 0.0);
        pts.extend(line_path(&xs, 100.0));
        let s = FiniteMetricSpace::euclidean(&pts);
        let trees = [
            UnionTree { vertices: vec![0, 1, 2, 3], edges: vec![(0, 1), (1, 2), (2, 3)] },
            UnionTree { vertices: vec![4, 5, 6, 7], edges: vec![(4, 5), (5, 6), (6, 7)] },
        ];
        let u = union_map(&s, &trees).unwrap();
        assert_eq!(u.stages[1].shared, 0);
        let tp = u.stages[1].two_piece.as_ref().unwrap();
        assert!(tp.check.holds);
    }

    #[test]
    fn crossing_paths_share_one_anchor() {
        // A horizontal and a vertical path through the origin (index 2).
        let pts = vec![
            vec![-2.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![2.0, 0.0],
            vec![0.0, -1.0],
            vec![0.0, 1.0],
        ];
        let s = FiniteMetricSpace::euclidean(&pts);
        let trees = [
            UnionTree { vertices: vec![0, 1, 2, 3, 4], edges: vec![(0, 1), (1, 2), (2, 3), (3, 4)] },
            UnionTree { vertices: vec![5, 2, 6], edges: vec![(5, 2), (2, 6)] },
        ];
        let u = union_map(&s, &trees).unwrap();
        assert_eq!(u.stages[1].shared, 1);
        let t0 = MetricTree::new(s.restrict(&[0, 1, 2, 3, 4]).unwrap(), vec![(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let stage0 = tree_map(&t0).unwrap();
        assert_eq!(&u.built.map.values[..5], &stage0.map.values[..]);
    }

    #[test]
    fn turning_trees_are_rejected() {
        let s = FiniteMetricSpace::on_line(&[0.0, 5.0, 1.0]);
        let t = UnionTree { vertices: vec![0, 1, 2], edges: vec![(0, 1), (1, 2)] };
        assert!(matches!(union_map(&s, &[t]), Err(Error::NotOneBoundedTurning { .. })));
    }

    #[test]
    fn small_cusp() {
        let (s, trees) = cusp(12).unwrap();
        assert_eq!(s.len(), 24);
        let u = union_map(&s, &trees).unwrap();
        assert!(u.built.report.q_hat.is_finite());
        assert_eq!(u.built.map.values[0], 0.0);
    }
}
