//! Brute-force oracles for the exact measurements.

use qctree::freespace::free_norm;
use qctree::light::{measure_lightness, measure_lipschitz};
use qctree::{FiniteMetricSpace, FreeVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_space(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace {
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|_| vec![rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0)])
        .collect();
    FiniteMetricSpace::euclidean(&pts)
}

/// Components of `subset` under the `d <= r` relation, by breadth-first search.
fn components(space: &FiniteMetricSpace, subset: &[usize], r: f64) -> Vec<Vec<usize>> {
    let mut seen = vec![false; subset.len()];
    let mut out = Vec::new();
    for s in 0..subset.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![subset[s]];
        let mut k = 0;
        while k < comp.len() {
            let x = comp[k];
            for (t, &y) in subset.iter().enumerate() {
                if !seen[t] && space.d(x, y) <= r {
                    seen[t] = true;
                    comp.push(y);
                }
            }
            k += 1;
        }
        out.push(comp);
    }
    out
}

/// Largest `diam / r` over windows `[lo, lo + r]` with `lo` a value.
fn ratio_at(space: &FiniteMetricSpace, values: &[f64], r: f64) -> f64 {
    let mut best = 0.0f64;
    for &lo in values {
        let window: Vec<usize> = (0..values.len())
            .filter(|&i| values[i] >= lo && values[i] - lo <= r)
            .collect();
        for c in components(space, &window, r) {
            best = best.max(space.diam_of(&c) / r);
        }
    }
    best
}

fn critical_radii(space: &FiniteMetricSpace, values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut rs = space.distinct_distances();
    for i in 0..n {
        for j in 0..n {
            if values[j] > values[i] {
                rs.push(values[j] - values[i]);
            }
        }
    }
    rs.retain(|&r| r > 0.0);
    rs
}

#[test]
fn lightness_matches_dense_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..100 {
        let n = rng.gen_range(2..=12);
        let space = random_space(&mut rng, n);
        // Mix of continuous values and values on a coarse lattice, so that
        // value gaps coincide with each other.
        let values: Vec<f64> = if trial % 2 == 0 {
            (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect()
        } else {
            (0..n).map(|_| rng.gen_range(0..4) as f64 * 0.5).collect()
        };
        let q = measure_lightness(&space, &values).q_hat;
        let critical = critical_radii(&space, &values)
            .into_iter()
            .map(|r| ratio_at(&space, &values, r))
            .fold(0.0, f64::max);
        assert_eq!(q, critical, "trial {trial}");
        let top = space.diameter().max(1.0) * 8.0;
        for k in 1..=400 {
            let r = top * k as f64 / 400.0;
            assert!(ratio_at(&space, &values, r) <= q + 1e-12, "trial {trial} r {r}");
        }
    }
}

#[test]
fn lipschitz_matches_pair_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let n = rng.gen_range(2..=20);
        let space = random_space(&mut rng, n);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let mut scan = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    scan = scan.max((values[i] - values[j]).abs() / space.d(i, j));
                }
            }
        }
        assert_eq!(measure_lipschitz(&space, &values), scan);
    }
}

/// All labelled trees on `n` vertices as edge lists, from Prüfer sequences.
fn spanning_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 2 {
        return vec![vec![(0, 1)]];
    }
    let total = n.pow(n as u32 - 2);
    (0..total)
        .map(|mut code| {
            let seq: Vec<usize> = (0..n - 2)
                .map(|_| {
                    let s = code % n;
                    code /= n;
                    s
                })
                .collect();
            let mut degree = vec![1; n];
            for &s in &seq {
                degree[s] += 1;
            }
            let mut edges = Vec::with_capacity(n - 1);
            for &s in &seq {
                let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
                edges.push((leaf, s));
                degree[leaf] -= 1;
                degree[s] -= 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
            edges.push((rest[0], rest[1]));
            edges
        })
        .collect()
}

/// Maximum of `Σ aᵢ f(xᵢ)` over vertices of the 1-Lipschitz polytope with
/// `f(x₀) = 0`: every vertex is fixed by a spanning tree of tight edges.
fn vertex_enumeration(space: &FiniteMetricSpace, coeffs: &[f64], x0: usize) -> f64 {
    let n = space.len();
    let mut best = f64::NEG_INFINITY;
    for edges in spanning_trees(n) {
        let mut adj = vec![Vec::new(); n];
        for (k, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, k));
            adj[v].push((u, k));
        }
        for signs in 0u32..(1 << (n - 1)) {
            let mut f = vec![f64::NAN; n];
            f[x0] = 0.0;
            let mut stack = vec![x0];
            while let Some(u) = stack.pop() {
                for &(v, k) in &adj[u] {
                    if f[v].is_nan() {
                        let s = if signs >> k & 1 == 1 { 1.0 } else { -1.0 };
                        f[v] = f[u] + s * space.d(u, v);
                        stack.push(v);
                    }
                }
            }
            let feasible = (0..n)
                .all(|i| (0..n).all(|j| (f[i] - f[j]).abs() <= space.d(i, j) + 1e-9));
            if feasible {
                best = best.max(coeffs.iter().zip(&f).map(|(a, x)| a * x).sum());
            }
        }
    }
    best
}

#[test]
fn free_norm_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for trial in 0..40 {
        let n = rng.gen_range(2..=6);
        let x0 = rng.gen_range(0..n);
        let space = random_space(&mut rng, n).with_basepoint(x0).unwrap();
        let coeffs: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mu = FreeVector::from_dense(&coeffs);
        let report = free_norm(&space, &mu).unwrap();
        let oracle = vertex_enumeration(&space, &coeffs, x0);
        assert!(
            (report.value - oracle).abs() <= 1e-7 * (1.0 + oracle),
            "trial {trial}: {} vs {oracle}",
            report.value
        );
    }
}

#[test]
fn molecules_are_isometric() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let n = rng.gen_range(2..=10);
        let space = random_space(&mut rng, n).with_basepoint(0).unwrap();
        for x in 0..n {
            for y in 0..n {
                let v = free_norm(&space, &FreeVector::molecule(x, y)).unwrap().value;
                assert!((v - space.d(x, y)).abs() <= 1e-9 * (1.0 + space.d(x, y)));
            }
        }
    }
}
