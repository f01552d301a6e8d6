use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::MetricTree;
use crate::{Error, Result};

/// A component `U` of `T ∖ E` with its boundary `∂U ⊂ E` and closure
/// `U ∪ ∂U`. All lists are sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub boundary: Vec<usize>,
    pub closure: Vec<usize>,
}

/// Components of the forest left after deleting the vertices in `removed`,
/// ordered by smallest vertex.
pub fn components_minus(tree: &MetricTree, removed: &[usize]) -> Vec<Component> {
    let n = tree.len();
    let mut gone = vec![false; n];
    for &e in removed {
        if e < n {
            gone[e] = true;
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if gone[s] || label[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut vertices = Vec::new();
        let mut boundary = Vec::new();
        let mut stack = vec![s];
        label[s] = id;
        while let Some(x) = stack.pop() {
            vertices.push(x);
            for &y in tree.neighbors(x) {
                if gone[y] {
                    boundary.push(y);
                } else if label[y] == usize::MAX {
                    label[y] = id;
                    stack.push(y);
                }
            }
        }
        vertices.sort_unstable();
        boundary.sort_unstable();
        boundary.dedup();
        let mut closure = vertices.clone();
        closure.extend(&boundary);
        closure.sort_unstable();
        out.push(Component {
            vertices,
            boundary,
            closure,
        });
    }
    out
}

/// Vertices of the union of all arcs between points of `m`, sorted.
///
/// Computed by repeatedly pruning leaves that are not in `m`.
pub fn hull(tree: &MetricTree, m: &[usize]) -> Result<Vec<usize>> {
    if m.is_empty() {
        return Err(Error::EmptySubset("hull generator set"));
    }
    tree.space().check_indices(m)?;
    let n = tree.len();
    let mut keep = vec![false; n];
    for &v in m {
        keep[v] = true;
    }
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1 && !keep[v]).collect();
    let mut remaining = n;
    while let Some(v) = stack.pop() {
        if !alive[v] || remaining == 1 {
            continue;
        }
        alive[v] = false;
        remaining -= 1;
        for &w in tree.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] <= 1 && !keep[w] {
                    stack.push(w);
                }
            }
        }
    }
    Ok((0..n).filter(|&v| alive[v]).collect())
}

/// The nearest-point retraction onto `arc(u, v)`: the identity on the arc,
/// `u` where `u` separates `x` from `v`, `v` where `v` separates `u` from
/// `x`, and the median of `u, v, x` otherwise. All four cases are the
/// median, which is what is returned for each vertex.
pub fn retract_to_arc(tree: &MetricTree, u: usize, v: usize) -> Result<Vec<usize>> {
    tree.space().check_index(u)?;
    tree.space().check_index(v)?;
    if u == v {
        return Err(Error::InvalidParameter {
            name: "retraction arc length",
            value: 0.0,
            range: "u != v",
        });
    }
    Ok((0..tree.len()).map(|x| tree.median(u, v, x)).collect())
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn star_minus_center() {
        let t = star(3, 2);
        let comps = components_minus(&t, &[0]);
        assert_eq!(comps.len(), 3);
        for c in &comps {
            assert_eq!(c.boundary, vec![0]);
            assert!(c.closure.contains(&0));
            assert_eq!(c.vertices.len(), 2);
        }
        assert_eq!(components_minus(&t, &[]).len(), 1);
        let all: Vec<usize> = (0..t.len()).collect();
        assert!(components_minus(&t, &all).is_empty());
    }

    #[test]
    fn hull_of_two_tips_is_their_arc() {
        let t = star(3, 2);
        assert_eq!(hull(&t, &[2, 4]).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(hull(&t, &[2, 4, 6]).unwrap().len(), t.len());
        assert_eq!(hull(&t, &[5]).unwrap(), vec![5]);
        assert!(hull(&t, &[]).is_err());
    }

    #[test]
    fn retraction_cases() {
        let t = star(3, 2);
        let g = retract_to_arc(&t, 2, 4).unwrap();
        assert_eq!(g[1], 1);
        assert_eq!(g[6], 0);
        assert_eq!(g[5], 0);
        let g = retract_to_arc(&t, 1, 3).unwrap();
        assert_eq!(g[2], 1);
        assert_eq!(g[4], 3);
        assert!(retract_to_arc(&t, 1, 1).is_err());
    }
}
