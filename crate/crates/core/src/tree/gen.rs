use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::MetricTree;
use crate::metric::FiniteMetricSpace;
use crate::{Error, Result};

/// Shape and metric of a generated tree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// Random recursive tree, edge lengths uniform in `[0.5, 1.5]`, path
    /// metric.
    Geodesic,
    /// The geodesic tree for the same seed with distances raised to `s`.
    Snowflake { s: f64 },
    /// A spine with equal teeth hanging off its middle section.
    Comb,
    /// A cross whose arm tips sprout three arms a third as long, breadth
    /// first, until the vertex budget is spent.
    VicsekStep,
}

impl Profile {
    pub fn name(&self) -> &'static str {
        match self {
            Profile::Geodesic => "geodesic",
            Profile::Snowflake { .. } => "snowflake",
            Profile::Comb => "comb",
            Profile::VicsekStep => "vicsek-step",
        }
    }
}

/// Tree with the path metric induced by positive edge lengths.
pub fn geodesic_tree(n: usize, edges: &[(usize, usize)], lengths: &[f64]) -> Result<MetricTree> {
    if lengths.len() != edges.len() {
        return Err(Error::DimensionMismatch {
            points: edges.len(),
            rows: lengths.len(),
            bad_row: 0,
            cols: 1,
        });
    }
    if let Some(&l) = lengths.iter().find(|&&l| !(l > 0.0)) {
        return Err(Error::InvalidParameter {
            name: "edge length",
            value: l,
            range: "(0, inf)",
        });
    }
    let mut adj = vec![Vec::new(); n];
    for (&(a, b), &l) in edges.iter().zip(lengths) {
        if a >= n || b >= n {
            return Err(Error::IndexOutOfRange {
                index: a.max(b),
                len: n,
            });
        }
        adj[a].push((b, l));
        adj[b].push((a, l));
    }
    let mut dist = vec![f64::NAN; n * n];
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0.0;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &(y, l) in &adj[x] {
                if row[y].is_nan() {
                    row[y] = row[x] + l;
                    stack.push(y);
                }
            }
        }
    }
    if dist.iter().any(|d| d.is_nan()) {
        return Err(Error::NotATree("edges do not connect all vertices".into()));
    }
    let space = FiniteMetricSpace::from_fn(n, |i, j| dist[i * n + j]);
    MetricTree::new(space, edges.to_vec())
}

/// Deterministic tree with exactly `n` vertices. Every profile yields a
/// 1-bounded-turning metric, recorded as `declared_C = 1`.
pub fn gen_tree(n: usize, seed: u64, profile: Profile) -> Result<MetricTree> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "vertex count",
            value: n as f64,
            range: "[2, inf)",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (edges, lengths) = match profile {
        Profile::Geodesic | Profile::Snowflake { .. } => recursive(n, &mut rng),
        Profile::Comb => comb(n, &mut rng),
        Profile::VicsekStep => vicsek(n, &mut rng),
    };
    let tree = geodesic_tree(n, &edges, &lengths)?;
    let tree = match profile {
        Profile::Snowflake { s } => {
            let space = tree.space().snowflake(s)?;
            tree.with_space(space)?
        }
        _ => tree,
    };
    Ok(tree.with_declared(Some(1.0), None))
}

type Shape = (Vec<(usize, usize)>, Vec<f64>);

fn recursive(n: usize, rng: &mut ChaCha8Rng) -> Shape {
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    let lengths = (1..n).map(|_| rng.gen_range(0.5..=1.5)).collect();
    (edges, lengths)
}

/// Spine `0..s`, teeth of `t` edges at spine positions `t..t+k`, leaving
/// `t` spine edges free at each end.
fn comb(n: usize, rng: &mut ChaCha8Rng) -> Shape {
    let mut t = 2usize;
    while (t + 1) * (t + 1) * 4 <= n {
        t += 1;
    }
    let k = n.saturating_sub(2 * t) / (t + 1);
    let s = n - k * t;
    let mut edges: Vec<(usize, usize)> = (1..s).map(|i| (i - 1, i)).collect();
    let mut next = s;
    for j in 0..k {
        let mut prev = t + j;
        for _ in 0..t {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    let lengths = edges.iter().map(|_| rng.gen_range(0.8..=1.2)).collect();
    (edges, lengths)
}

fn vicsek(n: usize, rng: &mut ChaCha8Rng) -> Shape {
    const SEGMENTS: usize = 3;
    let mut edges = Vec::with_capacity(n - 1);
    let mut lengths = Vec::with_capacity(n - 1);
    let mut jobs: VecDeque<(usize, f64)> = (0..4).map(|_| (0usize, 1.0)).collect();
    let mut count = 1;
    while let Some((attach, len)) = jobs.pop_front() {
        let mut prev = attach;
        for _ in 0..SEGMENTS {
            if count == n {
                return (edges, lengths);
            }
            edges.push((prev, count));
            lengths.push(len / SEGMENTS as f64 * rng.gen_range(0.9..=1.1));
            prev = count;
            count += 1;
        }
        for _ in 0..3 {
            jobs.push_back((prev, len / 3.0));
        }
    }
    (edges, lengths)
}
