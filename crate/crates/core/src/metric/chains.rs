use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::FiniteMetricSpace;
use crate::dsu::UnionFind;
use crate::{Error, Result, TOL};

/// How a [`Chain`]'s scale is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    /// Consecutive steps are at most `scale`.
    Delta,
    /// Consecutive steps are at most `scale · d(first, last)`.
    Relative,
}

/// An ordered sequence of points together with the scale it was built for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub indices: Vec<usize>,
    pub scale: f64,
    pub kind: ChainKind,
}

impl Chain {
    pub fn first(&self) -> usize {
        self.indices[0]
    }

    pub fn last(&self) -> usize {
        *self.indices.last().unwrap()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.indices.len() >= 2 && self.first() != self.last()
    }

    /// Holds the chain condition for its own kind and scale.
    pub fn is_valid(&self, space: &FiniteMetricSpace) -> bool {
        match self.kind {
            ChainKind::Delta => max_step(space, &self.indices) <= self.scale + TOL,
            ChainKind::Relative => is_relative_chain(space, &self.indices, self.scale),
        }
    }
}

/// Largest consecutive distance along `indices`.
pub fn max_step(space: &FiniteMetricSpace, indices: &[usize]) -> f64 {
    indices
        .windows(2)
        .map(|w| space.d(w[0], w[1]))
        .fold(0.0, f64::max)
}

/// The smallest α for which `indices` is a relative α-chain:
/// `max step / d(first, last)`. Infinite when the endpoints coincide.
pub fn relative_ratio(space: &FiniteMetricSpace, indices: &[usize]) -> f64 {
    match (indices.first(), indices.last()) {
        (Some(&a), Some(&b)) if a != b => max_step(space, indices) / space.d(a, b),
        _ => f64::INFINITY,
    }
}

pub fn is_relative_chain(space: &FiniteMetricSpace, indices: &[usize], alpha: f64) -> bool {
    let (Some(&a), Some(&b)) = (indices.first(), indices.last()) else {
        return false;
    };
    let bound = alpha * space.d(a, b) + TOL;
    indices.windows(2).all(|w| space.d(w[0], w[1]) <= bound)
}

/// Maximal δ-connected classes of `subset`. Each class lists points in
/// subset order; classes are ordered by their first member.
pub fn delta_components(space: &FiniteMetricSpace, subset: &[usize], delta: f64) -> Vec<Vec<usize>> {
    let m = subset.len();
    let mut uf = UnionFind::new(m);
    for a in 0..m {
        for b in a + 1..m {
            if space.d(subset[a], subset[b]) <= delta + TOL {
                uf.union(a, b);
            }
        }
    }
    let mut slot = vec![usize::MAX; m];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for a in 0..m {
        let r = uf.find(a);
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push(subset[a]);
    }
    classes
}

/// Shortest relative α-chain from `x` to `y` using any point of the space.
pub fn find_relative_alpha_chain(
    space: &FiniteMetricSpace,
    x: usize,
    y: usize,
    alpha: f64,
) -> Result<Option<Chain>> {
    let all: Vec<usize> = (0..space.len()).collect();
    find_relative_alpha_chain_in(space, &all, x, y, alpha)
}

/// As [`find_relative_alpha_chain`], restricted to points of `subset`
/// (which must contain `x` and `y`).
pub fn find_relative_alpha_chain_in(
    space: &FiniteMetricSpace,
    subset: &[usize],
    x: usize,
    y: usize,
    alpha: f64,
) -> Result<Option<Chain>> {
    space.check_index(x)?;
    space.check_index(y)?;
    if x == y {
        return Err(Error::DegenerateChain);
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            range: "(0, 1]",
        });
    }
    let sx = subset.iter().position(|&p| p == x).ok_or(Error::NotSubset(x))?;
    let sy = subset.iter().position(|&p| p == y).ok_or(Error::NotSubset(y))?;
    let bound = alpha * space.d(x, y) + TOL;
    let m = subset.len();
    let mut prev = vec![usize::MAX; m];
    prev[sx] = sx;
    let mut queue = VecDeque::from([sx]);
    while let Some(a) = queue.pop_front() {
        if a == sy {
            break;
        }
        for b in 0..m {
            if prev[b] == usize::MAX && space.d(subset[a], subset[b]) <= bound {
                prev[b] = a;
                queue.push_back(b);
            }
        }
    }
    if prev[sy] == usize::MAX {
        return Ok(None);
    }
    let mut path = vec![subset[sy]];
    let mut cur = sy;
    while cur != sx {
        cur = prev[cur];
        path.push(subset[cur]);
    }
    path.reverse();
    Ok(Some(Chain {
        indices: path,
        scale: alpha,
        kind: ChainKind::Relative,
    }))
}

/// Result of [`uniform_disconnectedness_constant`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disconnectedness {
    /// The critical ratio α*.
    pub alpha: f64,
    /// A pair attaining α*, if the subset has two points.
    pub witness: Option<(usize, usize)>,
    /// A relative α*-chain between the witness pair.
    pub chain: Option<Chain>,
}

/// Critical α* of a subset: for every α < α* no nondegenerate relative
/// α-chain exists inside the subset, and one exists for every α ≥ α*.
///
/// For a pair `(x, y)` the smallest α admitting a chain is the minimax
/// step between them divided by `d(x, y)`; minimax steps are read off a
/// minimum spanning tree.
pub fn uniform_disconnectedness_constant(
    space: &FiniteMetricSpace,
    subset: &[usize],
) -> Result<Disconnectedness> {
    space.check_indices(subset)?;
    let m = subset.len();
    if m == 0 {
        return Err(Error::EmptySubset("subset"));
    }
    if m == 1 {
        return Ok(Disconnectedness {
            alpha: 1.0,
            witness: None,
            chain: None,
        });
    }
    let (tree_adj, _) = minimum_spanning_tree(space, subset);
    let mut best = (f64::INFINITY, 0, 1);
    let mut bottleneck = vec![0.0; m];
    let mut stack = Vec::new();
    let mut seen = vec![false; m];
    for s in 0..m {
        seen.iter_mut().for_each(|v| *v = false);
        seen[s] = true;
        bottleneck[s] = 0.0;
        stack.push(s);
        while let Some(a) = stack.pop() {
            for &(b, w) in &tree_adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    bottleneck[b] = f64::max(bottleneck[a], w);
                    stack.push(b);
                }
            }
        }
        for t in s + 1..m {
            let r = bottleneck[t] / space.d(subset[s], subset[t]);
            if r < best.0 {
                best = (r, s, t);
            }
        }
    }
    let (alpha, s, t) = best;
    let (x, y) = (subset[s], subset[t]);
    let chain = find_relative_alpha_chain_in(space, subset, x, y, alpha)?;
    Ok(Disconnectedness {
        alpha,
        witness: Some((x, y)),
        chain,
    })
}

/// Prim's algorithm on the complete graph over `subset`. Returns local
/// adjacency lists with weights and the total weight.
pub(crate) fn minimum_spanning_tree(
    space: &FiniteMetricSpace,
    subset: &[usize],
) -> (Vec<Vec<(usize, f64)>>, f64) {
    let m = subset.len();
    let mut adj = vec![Vec::new(); m];
    if m == 0 {
        return (adj, 0.0);
    }
    let mut in_tree = vec![false; m];
    let mut key = vec![f64::INFINITY; m];
    let mut from = vec![0usize; m];
    key[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..m {
        let mut a = usize::MAX;
        for v in 0..m {
            if !in_tree[v] && (a == usize::MAX || key[v] < key[a]) {
                a = v;
            }
        }
        in_tree[a] = true;
        if a != 0 {
            adj[a].push((from[a], key[a]));
            adj[from[a]].push((a, key[a]));
            total += key[a];
        }
        for v in 0..m {
            let w = space.d(subset[a], subset[v]);
            if !in_tree[v] && w < key[v] {
                key[v] = w;
                from[v] = a;
            }
        }
    }
    (adj, total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric() -> FiniteMetricSpace {
        let mut xs: Vec<f64> = (0..=6).map(|k| libm::pow(2.0, -(k as f64))).collect();
        xs.push(0.0);
        FiniteMetricSpace::on_line(&xs)
    }

    #[test]
    fn line_components() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0, 10.0]);
        assert_eq!(delta_components(&s, &[0, 1, 2], 2.0), vec![vec![0, 1], vec![2]]);
        assert_eq!(delta_components(&s, &[0, 1, 2], 10.0).len(), 1);
        assert!(delta_components(&s, &[], 1.0).is_empty());
    }

    #[test]
    fn alpha_one_gives_direct_chain() {
        let s = geometric();
        let c = find_relative_alpha_chain(&s, 0, 7, 1.0).unwrap().unwrap();
        assert_eq!(c.indices, vec![0, 7]);
    }

    #[test]
    fn geometric_pair_has_no_chain_below_one() {
        let s = geometric();
        assert!(find_relative_alpha_chain(&s, 0, 1, 0.9).unwrap().is_none());
    }

    #[test]
    fn degenerate_request_is_rejected() {
        let s = geometric();
        assert_eq!(
            find_relative_alpha_chain(&s, 2, 2, 0.5).unwrap_err(),
            Error::DegenerateChain
        );
    }

    #[test]
    fn grid_constant_is_step_over_length() {
        let xs: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        let s = FiniteMetricSpace::on_line(&xs);
        let all: Vec<usize> = (0..11).collect();
        let u = uniform_disconnectedness_constant(&s, &all).unwrap();
        assert!((u.alpha - 0.1).abs() < 1e-12);
        assert_eq!(u.witness, Some((0, 10)));
        assert_eq!(u.chain.unwrap().indices.len(), 11);
    }

    #[test]
    fn geometric_constant_is_one_half() {
        let s = geometric();
        let all: Vec<usize> = (0..s.len()).collect();
        let u = uniform_disconnectedness_constant(&s, &all).unwrap();
        assert!((u.alpha - 0.5).abs() < 1e-12);
    }

    #[test]
    fn small_subsets() {
        let s = FiniteMetricSpace::on_line(&[0.0, 3.0]);
        assert_eq!(uniform_disconnectedness_constant(&s, &[0, 1]).unwrap().alpha, 1.0);
        assert_eq!(uniform_disconnectedness_constant(&s, &[1]).unwrap().alpha, 1.0);
        assert!(uniform_disconnectedness_constant(&s, &[]).is_err());
    }
}
