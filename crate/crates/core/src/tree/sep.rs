use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{bounded_turning_constant, MetricTree};
use crate::{Error, Result, TOL};

/// Separated points hanging off the branch points of an arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SepPoints {
    /// `(a_j, b_j)`: `a_j` a branch point of the arc in arc order, `b_j`
    /// off the arc with `d(a_j, b_j) >= ε`.
    pub pairs: Vec<(usize, usize)>,
    pub epsilon: f64,
    /// `max_j d(a_j, b_j)`.
    pub d_max: f64,
    pub arc_diameter: f64,
    /// Smallest and largest `d(b_i, b_j)` over `i != j` (NaN with < 2 pairs).
    pub min_separation: f64,
    pub max_separation: f64,
    /// Pairs `(i, j)` breaking `ε <= d(b_i, b_j) <= 2 d_max + diam`.
    pub violations: Vec<(usize, usize)>,
}

/// For each branch point `a` of `arc(u, v)`, walks from `a` into the
/// off-arc component through its smallest off-arc neighbor, towards that
/// component's smallest leaf, and stops at the first vertex `b` with
/// `d(a, b) >= ε`.
pub fn sep_points(tree: &MetricTree, u: usize, v: usize, eps: f64) -> Result<SepPoints> {
    tree.space().check_index(u)?;
    tree.space().check_index(v)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: eps,
            range: "(0, inf)",
        });
    }
    let turning = bounded_turning_constant(tree);
    if turning.c_hat > 1.0 + TOL {
        return Err(Error::NotOneBoundedTurning {
            c_hat: turning.c_hat,
        });
    }
    let arc = tree.arc(u, v);
    let leaves = tree.leaves();
    for &x in &arc {
        let near = tree.space().dist_to_set(x, &leaves);
        if near <= eps {
            return Err(Error::Precondition(format!(
                "arc vertex {x} is within {near} <= {eps} of a leaf"
            )));
        }
    }
    let n = tree.len();
    let mut on_arc = vec![false; n];
    for &x in &arc {
        on_arc[x] = true;
    }
    let mut pairs = Vec::new();
    for &a in arc.iter().filter(|&&x| tree.degree(x) >= 3) {
        let w = *tree
            .neighbors(a)
            .iter()
            .filter(|&&y| !on_arc[y])
            .min()
            .expect("branch point has an off-arc neighbor");
        // Component of T minus a containing w, with parent pointers.
        let mut parent = vec![usize::MAX; n];
        parent[w] = a;
        let mut stack = vec![w];
        let mut leaf = usize::MAX;
        while let Some(x) = stack.pop() {
            if tree.degree(x) == 1 {
                leaf = leaf.min(x);
            }
            for &y in tree.neighbors(x) {
                if y != a && parent[y] == usize::MAX {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let mut path = vec![leaf];
        while *path.last().unwrap() != a {
            path.push(parent[*path.last().unwrap()]);
        }
        path.reverse();
        let b = path
            .iter()
            .copied()
            .find(|&x| tree.d(a, x) >= eps)
            .ok_or_else(|| {
                Error::Precondition(format!("no vertex at distance {eps} from {a} towards {leaf}"))
            })?;
        pairs.push((a, b));
    }
    let d_max = pairs.iter().map(|&(a, b)| tree.d(a, b)).fold(0.0, f64::max);
    let arc_diameter = tree.space().diam_of(&arc);
    let upper = 2.0 * d_max + arc_diameter;
    let (mut lo, mut hi) = (f64::NAN, f64::NAN);
    let mut violations = Vec::new();
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let d = tree.d(pairs[i].1, pairs[j].1);
            lo = if lo.is_nan() { d } else { lo.min(d) };
            hi = if hi.is_nan() { d } else { hi.max(d) };
            if d < eps - TOL || d > upper + TOL {
                violations.push((i, j));
            }
        }
    }
    Ok(SepPoints {
        pairs,
        epsilon: eps,
        d_max,
        arc_diameter,
        min_separation: lo,
        max_separation: hi,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{fixtures::*, gen_tree, Profile};
    use super::*;

    #[test]
    fn plain_arc_has_no_pairs() {
        let t = path(7);
        let s = sep_points(&t, 2, 4, 1.0).unwrap();
        assert!(s.pairs.is_empty());
    }

    #[test]
    fn leaf_too_close_is_reported() {
        let t = path(5);
        assert!(matches!(sep_points(&t, 0, 3, 0.5), Err(Error::Precondition(_))));
    }

    #[test]
    fn comb_gives_one_pair_per_tooth() {
        let t = gen_tree(60, 3, Profile::Comb).unwrap();
        let spine: Vec<usize> = (0..t.len()).filter(|&x| t.degree(x) >= 3).collect();
        let (u, v) = (spine[0], *spine.last().unwrap());
        let s = sep_points(&t, u, v, 1.5).unwrap();
        let branch_on_arc = t.arc(u, v).iter().filter(|&&x| t.degree(x) >= 3).count();
        assert_eq!(s.pairs.len(), branch_on_arc);
        assert!(s.violations.is_empty());
        assert!(s.min_separation >= 1.5);
    }
}
