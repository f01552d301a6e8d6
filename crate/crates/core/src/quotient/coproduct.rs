use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{quotient, sum, QuotientSpace, SumSpace};
use crate::tree::{components_minus, hull, require_one_bt, MetricTree};
use crate::{Error, Result, TOL};

/// One piece `T_i / M_i` of a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    /// Closure of the component, as global vertices (sorted).
    pub closure: Vec<usize>,
    /// `M_i = T_i ∩ M`, global vertices.
    pub boundary: Vec<usize>,
    /// The closure as a tree; local index `k` is global `closure[k]`.
    pub tree: MetricTree,
    /// `T_i / M_i` over local indices.
    pub quotient: QuotientSpace,
}

/// `T / M` next to `∐ (T_i / M_i, [M_i])` and how far apart they are.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreCoproduct {
    pub collapsed: Vec<usize>,
    pub quotient: QuotientSpace,
    pub pieces: Vec<Piece>,
    pub sum: SumSpace,
    /// Quotient index to sum index.
    pub correspondence: Vec<usize>,
    /// Extremes of `ρ / σ` over distinct pairs (1 with fewer than 2 points).
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Quotient indices of the pair attaining `min_ratio`.
    pub worst_pair: Option<(usize, usize)>,
    /// `σ / 2 <= ρ <= σ` held for every pair.
    pub passed: bool,
}

/// Splits `T / M` along the closures of the components of `T ∖ M`.
pub fn pre_coproduct_decompose(tree: &MetricTree, m: &[usize]) -> Result<PreCoproduct> {
    if m.is_empty() {
        return Err(Error::EmptySubset("collapsed set M"));
    }
    tree.space().check_indices(m)?;
    require_one_bt(tree)?;
    let q = quotient(tree.space(), m)?;
    let mut pieces = Vec::new();
    for comp in components_minus(tree, m) {
        let (sub, _) = tree.induced(&comp.closure)?;
        let local: Vec<usize> = comp
            .boundary
            .iter()
            .map(|b| comp.closure.binary_search(b).unwrap())
            .collect();
        let pq = quotient(sub.space(), &local)?;
        pieces.push(Piece {
            closure: comp.closure,
            boundary: comp.boundary,
            tree: sub,
            quotient: pq,
        });
    }
    let s = sum(&pieces.iter().map(|p| p.quotient.space.clone()).collect::<Vec<_>>())?;
    let mut correspondence = vec![usize::MAX; q.len()];
    correspondence[QuotientSpace::COLLAPSED] = SumSpace::GLUED;
    for (i, p) in pieces.iter().enumerate() {
        for (k, &g) in p.closure.iter().enumerate() {
            if !q.is_collapsed(g) {
                let local_class = p.quotient.class_of[k];
                correspondence[q.class_of[g]] = s.piece_points[i][local_class];
            }
        }
    }
    if let Some(i) = correspondence.iter().position(|&c| c == usize::MAX) {
        return Err(Error::Structural(format!(
            "quotient point {i} belongs to no piece"
        )));
    }
    let mut out = PreCoproduct {
        collapsed: q.collapsed.clone(),
        min_ratio: 1.0,
        max_ratio: 1.0,
        worst_pair: None,
        passed: true,
        quotient: q,
        pieces,
        sum: s,
        correspondence,
    };
    let n = out.quotient.len();
    for a in 0..n {
        for b in a + 1..n {
            let rho = out.quotient.space.d(a, b);
            let sigma = out.sum.space.d(out.correspondence[a], out.correspondence[b]);
            let r = rho / sigma;
            if out.worst_pair.is_none() || r < out.min_ratio {
                out.min_ratio = r;
                out.worst_pair = Some((a, b));
            }
            if out.worst_pair.is_some() && r > out.max_ratio {
                out.max_ratio = r;
            }
            if rho < 0.5 * sigma - TOL || rho > sigma + TOL {
                out.passed = false;
            }
        }
    }
    Ok(out)
}

/// The wreath `T / {a, b}` for two distinct leaves.
pub fn wreath(tree: &MetricTree, a: usize, b: usize) -> Result<QuotientSpace> {
    tree.space().check_index(a)?;
    tree.space().check_index(b)?;
    if a == b || tree.degree(a) != 1 || tree.degree(b) != 1 {
        return Err(Error::Precondition(format!(
            "wreath needs two distinct leaves, got {a} and {b}"
        )));
    }
    quotient(tree.space(), &[a, b])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PieceKind {
    /// Meets the collapsed set in one point: a subtree.
    Tree,
    /// Meets it in two points, which are leaves of the piece.
    Wreath,
}

/// `T / (B ∪ M)` for `M` a set of leaves and `B` the branch points of the
/// hull of `M`, split into tree and wreath pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coproduct {
    pub hull: Vec<usize>,
    pub hull_branch_points: Vec<usize>,
    pub kinds: Vec<PieceKind>,
    pub decomposition: PreCoproduct,
}

pub fn coproduct_decompose(tree: &MetricTree, m: &[usize]) -> Result<Coproduct> {
    if m.is_empty() {
        return Err(Error::EmptySubset("leaf set M"));
    }
    tree.space().check_indices(m)?;
    if let Some(&x) = m.iter().find(|&&x| !tree.is_leaf(x)) {
        return Err(Error::Precondition(format!("vertex {x} of M is not a leaf")));
    }
    let s = hull(tree, m)?;
    let mut in_s = vec![false; tree.len()];
    for &x in &s {
        in_s[x] = true;
    }
    let b: Vec<usize> = s
        .iter()
        .copied()
        .filter(|&x| tree.neighbors(x).iter().filter(|&&y| in_s[y]).count() >= 3)
        .collect();
    let mut p: Vec<usize> = b.iter().chain(m).copied().collect();
    p.sort_unstable();
    p.dedup();
    let decomposition = pre_coproduct_decompose(tree, &p)?;
    let mut kinds = Vec::with_capacity(decomposition.pieces.len());
    for piece in &decomposition.pieces {
        let meets_hull = piece
            .closure
            .iter()
            .any(|&x| in_s[x] && p.binary_search(&x).is_err());
        let kind = match piece.boundary.len() {
            1 => PieceKind::Tree,
            2 => PieceKind::Wreath,
            k => {
                return Err(Error::Structural(format!(
                    "piece with closure {:?} meets B ∪ M in {k} points",
                    piece.closure
                )))
            }
        };
        if meets_hull != (kind == PieceKind::Wreath) {
            return Err(Error::Structural(format!(
                "piece with closure {:?} is a {kind:?} but {} the hull",
                piece.closure,
                if meets_hull { "meets" } else { "misses" }
            )));
        }
        kinds.push(kind);
    }
    Ok(Coproduct {
        hull: s,
        hull_branch_points: b,
        kinds,
        decomposition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixtures::*;
    use crate::tree::{gen_tree, Profile};

    #[test]
    fn single_leaf_is_one_exact_piece() {
        let t = star(3, 2);
        let pc = pre_coproduct_decompose(&t, &[2]).unwrap();
        assert_eq!(pc.pieces.len(), 1);
        assert!((pc.min_ratio - 1.0).abs() < 1e-12);
        assert!(pc.passed);
    }

    #[test]
    fn path_ends_give_one_wreath() {
        let t = path(5);
        let c = coproduct_decompose(&t, &[0, 4]).unwrap();
        assert_eq!(c.kinds, vec![PieceKind::Wreath]);
        assert!(c.hull_branch_points.is_empty());
        assert!(c.decomposition.passed);
    }

    #[test]
    fn comb_tips_give_only_wreaths() {
        let t = gen_tree(40, 2, Profile::Comb).unwrap();
        // Leaves ascend as: spine start, spine end, then the teeth tips.
        let tips: Vec<usize> = t.leaves()[2..].to_vec();
        assert!(tips.len() >= 3);
        let c = coproduct_decompose(&t, &tips).unwrap();
        // Interior teeth are cut off at their attachment points; each end of
        // the spine stays joined to its outer tooth. Nothing hangs off a
        // hull branch point, so no tree pieces appear.
        assert_eq!(c.hull_branch_points.len(), tips.len() - 2);
        assert_eq!(c.kinds, vec![PieceKind::Wreath; tips.len()]);
        assert!(c.decomposition.passed);
    }

    #[test]
    fn leg_off_the_hull_is_a_tree_piece() {
        let t = star(4, 2);
        let c = coproduct_decompose(&t, &[2, 4, 6]).unwrap();
        assert_eq!(c.hull_branch_points, vec![0]);
        let trees = c.kinds.iter().filter(|&&k| k == PieceKind::Tree).count();
        assert_eq!((c.kinds.len(), trees), (4, 1));
    }

    #[test]
    fn non_leaf_is_rejected() {
        let t = path(4);
        assert!(matches!(
            coproduct_decompose(&t, &[1]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn wreath_of_unit_path() {
        let t = path(5).with_space(
            crate::metric::FiniteMetricSpace::on_line(&[0.0, 0.25, 0.5, 0.75, 1.0]),
        );
        let w = wreath(&t.unwrap(), 0, 4).unwrap();
        assert_eq!(w.rho(1, 3), 0.5);
        assert_eq!(w.rho(1, 2), 0.25);
        assert!(wreath(&path(3), 0, 1).is_err());
    }
}
