use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::quotient;
use crate::metric::{
    doubling_constant, find_relative_alpha_chain_in, uniform_disconnectedness_constant, Chain,
};
use crate::tree::{remetrize_1bt, MetricTree};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformReport {
    /// Doubling constant of the 1-bounded-turning metric.
    pub doubling: usize,
    pub doubling_exact: bool,
    /// `1 / (8 D̂²)`.
    pub bound: f64,
    /// Critical α of `[B ∪ L]` inside `T / L`.
    pub alpha_star: f64,
    /// Size of `[B ∪ L]`.
    pub points: usize,
    /// A chain at the bound found by exhaustive search, if any.
    pub counterexample: Option<Chain>,
    pub passed: bool,
}

/// Checks that the branch points together with the collapsed leaves admit
/// no nondegenerate relative `1/(8D̂²)`-chain in `T / L`.
///
/// The tree is remetrized to be 1-bounded turning first, and `D̂` is
/// measured on that metric.
pub fn branch_uniform_disconnect_check(tree: &MetricTree) -> Result<UniformReport> {
    let t = remetrize_1bt(tree)?;
    let dbl = doubling_constant(t.space());
    let bound = 1.0 / (8.0 * (dbl.value * dbl.value) as f64);
    let leaves = t.leaves();
    let q = quotient(t.space(), &leaves)?;
    let mut subset: Vec<usize> = q.classes(&t.branch_points());
    subset.insert(0, 0);
    subset.dedup();
    let ud = uniform_disconnectedness_constant(&q.space, &subset)?;
    let mut counterexample = None;
    'search: for (i, &a) in subset.iter().enumerate() {
        for &b in &subset[i + 1..] {
            if let Some(c) = find_relative_alpha_chain_in(&q.space, &subset, a, b, bound)? {
                counterexample = Some(Chain {
                    indices: c.indices.iter().map(|&k| q.representatives[k]).collect(),
                    ..c
                });
                break 'search;
            }
        }
    }
    Ok(UniformReport {
        doubling: dbl.value,
        doubling_exact: dbl.exact,
        bound,
        alpha_star: ud.alpha,
        points: subset.len(),
        passed: counterexample.is_none() && ud.alpha > bound,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixtures::star;
    use crate::tree::{geodesic_tree, gen_tree, Profile};
    use alloc::vec;

    #[test]
    fn tripod_is_vacuous() {
        let r = branch_uniform_disconnect_check(&star(3, 1)).unwrap();
        assert_eq!(r.points, 2);
        assert!(r.passed);
    }

    #[test]
    fn binary_tree_depth_four() {
        let n = 31;
        let edges: Vec<(usize, usize)> = (1..n).map(|v| ((v - 1) / 2, v)).collect();
        let lengths = vec![1.0; n - 1];
        let t = geodesic_tree(n, &edges, &lengths).unwrap();
        let r = branch_uniform_disconnect_check(&t).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.alpha_star >= r.bound);
    }

    #[test]
    fn snowflaked_combs() {
        for seed in 0..3 {
            let t = gen_tree(30, seed, Profile::Snowflake { s: 0.7 }).unwrap();
            assert!(branch_uniform_disconnect_check(&t).unwrap().passed);
            let c = gen_tree(30, seed, Profile::Comb).unwrap();
            let c = c.with_space(c.space().snowflake(0.6).unwrap()).unwrap();
            assert!(branch_uniform_disconnect_check(&c).unwrap().passed);
        }
    }
}
