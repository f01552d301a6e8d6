//! Combinatorial trees carrying a metric on their vertices.
//!
//! Leaves are the vertices of degree one and branch points those of degree
//! at least three. Arcs are vertex paths; "points" of the continuum tree
//! are approximated by subdivision vertices.

mod decomp;
mod gen;
mod sep;
mod turning;

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::metric::FiniteMetricSpace;
use crate::{Error, Result};

pub use decomp::{components_minus, hull, retract_to_arc, Component};
pub use gen::{gen_tree, geodesic_tree, Profile};
pub use sep::{sep_points, SepPoints};
pub use turning::{arc_diameters, bounded_turning_constant, remetrize_1bt, require_one_bt, TurningReport};

/// A tree whose vertices are the points of a finite metric space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub struct MetricTree {
    space: FiniteMetricSpace,
    edges: Vec<(usize, usize)>,
    pub declared_c: Option<f64>,
    pub declared_d: Option<f64>,
    adj: Vec<Vec<usize>>,
    parent: Vec<usize>,
    depth: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    space: FiniteMetricSpace,
    edges: Vec<[usize; 2]>,
    #[serde(rename = "declared_C", default, skip_serializing_if = "Option::is_none")]
    declared_c: Option<f64>,
    #[serde(rename = "declared_D", default, skip_serializing_if = "Option::is_none")]
    declared_d: Option<f64>,
}

impl TryFrom<TreeRepr> for MetricTree {
    type Error = Error;

    fn try_from(r: TreeRepr) -> Result<Self> {
        let mut t = MetricTree::new(r.space, r.edges.iter().map(|e| (e[0], e[1])).collect())?;
        t.declared_c = r.declared_c;
        t.declared_d = r.declared_d;
        Ok(t)
    }
}

impl From<MetricTree> for TreeRepr {
    fn from(t: MetricTree) -> Self {
        TreeRepr {
            edges: t.edges.iter().map(|&(a, b)| [a, b]).collect(),
            space: t.space,
            declared_c: t.declared_c,
            declared_d: t.declared_d,
        }
    }
}

impl MetricTree {
    /// Checks that `edges` form a spanning tree of the space's points.
    pub fn new(space: FiniteMetricSpace, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = space.len();
        if n == 0 {
            return Err(Error::NotATree("no vertices".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::NotATree(format!(
                "{} edges for {} vertices",
                edges.len(),
                n
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            space.check_index(a)?;
            space.check_index(b)?;
            if a == b {
                return Err(Error::NotATree(format!("loop at {a}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0; n];
        parent[0] = 0;
        let mut queue = VecDeque::from([0]);
        let mut seen = 1;
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if parent[b] == usize::MAX {
                    parent[b] = a;
                    depth[b] = depth[a] + 1;
                    seen += 1;
                    queue.push_back(b);
                }
            }
        }
        if seen != n {
            return Err(Error::NotATree(format!(
                "only {seen} of {n} vertices reachable from vertex 0"
            )));
        }
        Ok(MetricTree {
            space,
            edges,
            declared_c: None,
            declared_d: None,
            adj,
            parent,
            depth,
        })
    }

    pub fn with_declared(mut self, c: Option<f64>, d: Option<f64>) -> Self {
        self.declared_c = c;
        self.declared_d = d;
        self
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn into_space(self) -> FiniteMetricSpace {
        self.space
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    #[inline]
    pub fn d(&self, u: usize, v: usize) -> f64 {
        self.space.d(u, v)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn leaves(&self) -> Vec<usize> {
        if self.len() == 1 {
            return vec![0];
        }
        (0..self.len()).filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn branch_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.degree(v) >= 3).collect()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.degree(v) <= 1
    }

    fn lca(&self, mut u: usize, mut v: usize) -> usize {
        while self.depth[u] > self.depth[v] {
            u = self.parent[u];
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v];
        }
        while u != v {
            u = self.parent[u];
            v = self.parent[v];
        }
        u
    }

    /// The unique vertex path from `u` to `v`, both included.
    pub fn arc(&self, u: usize, v: usize) -> Vec<usize> {
        let w = self.lca(u, v);
        let mut head = vec![u];
        let mut x = u;
        while x != w {
            x = self.parent[x];
            head.push(x);
        }
        let mut tail = Vec::new();
        let mut y = v;
        while y != w {
            tail.push(y);
            y = self.parent[y];
        }
        head.extend(tail.into_iter().rev());
        head
    }

    /// Number of edges between `u` and `v`.
    pub fn hop_distance(&self, u: usize, v: usize) -> usize {
        let w = self.lca(u, v);
        self.depth[u] + self.depth[v] - 2 * self.depth[w]
    }

    /// Whether `x` lies on `arc(u, v)`.
    pub fn on_arc(&self, x: usize, u: usize, v: usize) -> bool {
        self.hop_distance(u, x) + self.hop_distance(x, v) == self.hop_distance(u, v)
    }

    /// The vertex common to the three arcs between `x`, `y` and `z`.
    pub fn median(&self, x: usize, y: usize, z: usize) -> usize {
        let cands = [self.lca(x, y), self.lca(x, z), self.lca(y, z)];
        *cands.iter().max_by_key(|&&c| self.depth[c]).unwrap()
    }

    /// Diameter of the vertex set of `arc(u, v)`.
    pub fn arc_diameter(&self, u: usize, v: usize) -> f64 {
        self.space.diam_of(&self.arc(u, v))
    }

    /// The subtree spanned by `vertices` (which must induce a connected
    /// subgraph) and the map from its local indices to ours.
    pub fn induced(&self, vertices: &[usize]) -> Result<(MetricTree, Vec<usize>)> {
        let mut local = vec![usize::MAX; self.len()];
        for (k, &v) in vertices.iter().enumerate() {
            self.space.check_index(v)?;
            local[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| local[a] != usize::MAX && local[b] != usize::MAX)
            .map(|&(a, b)| (local[a], local[b]))
            .collect();
        let space = self.space.restrict(vertices)?;
        let t = MetricTree::new(space, edges)
            .map_err(|e| Error::NotATree(format!("induced subgraph: {e}")))?;
        Ok((t.with_declared(self.declared_c, self.declared_d), vertices.to_vec()))
    }

    /// Same combinatorics, new metric on the vertices.
    pub fn with_space(&self, space: FiniteMetricSpace) -> Result<MetricTree> {
        if space.len() != self.len() {
            return Err(Error::DimensionMismatch {
                points: self.len(),
                rows: space.len(),
                bad_row: 0,
                cols: space.len(),
            });
        }
        let mut t = self.clone();
        t.space = space;
        Ok(t)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Path `0 - 1 - ... - (n-1)` with unit edges.
    pub fn path(n: usize) -> MetricTree {
        let xs: Vec<f64> = (0..n).map(|i| i as f64).collect();
        MetricTree::new(
            FiniteMetricSpace::on_line(&xs),
            (1..n).map(|i| (i - 1, i)).collect(),
        )
        .unwrap()
    }

    /// Center 0 with `legs` legs of `len` unit edges each; leg `k` holds
    /// vertices `1 + k*len ..= (k+1)*len` from the center outwards.
    pub fn star(legs: usize, len: usize) -> MetricTree {
        let mut edges = Vec::new();
        let mut lengths = Vec::new();
        for k in 0..legs {
            for j in 0..len {
                let v = 1 + k * len + j;
                let u = if j == 0 { 0 } else { v - 1 };
                edges.push((u, v));
                lengths.push(1.0);
            }
        }
        geodesic_tree(1 + legs * len, &edges, &lengths).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn path_arcs() {
        let t = path(3);
        assert_eq!(t.arc(0, 2), vec![0, 1, 2]);
        assert_eq!(t.arc(2, 0), vec![2, 1, 0]);
        assert_eq!(t.arc(1, 1), vec![1]);
        assert_eq!(t.median(0, 1, 2), 1);
    }

    #[test]
    fn tripod_median_is_center() {
        let t = star(3, 2);
        assert_eq!(t.median(2, 4, 6), 0);
        assert_eq!(t.median(1, 2, 4), 1);
        assert_eq!(t.branch_points(), vec![0]);
        assert_eq!(t.leaves(), vec![2, 4, 6]);
    }

    #[test]
    fn cycle_is_rejected() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0, 2.0]);
        assert!(MetricTree::new(s.clone(), vec![(0, 1), (1, 0)]).is_err());
        assert!(MetricTree::new(s, vec![(0, 1)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = star(3, 1).with_declared(Some(1.0), None);
        let v = serde_json::to_string(&t).unwrap();
        assert!(v.contains("\"declared_C\":1.0"));
        let back: MetricTree = serde_json::from_str(&v).unwrap();
        assert_eq!(back, t);
    }
}
