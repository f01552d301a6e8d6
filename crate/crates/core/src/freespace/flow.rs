//! Transportation by successive shortest paths.

use alloc::vec;
use alloc::vec::Vec;

/// Optimal transport between `supply` (positive masses) and `demand`
/// (positive masses, same total) with costs `cost(i, j)`.
///
/// Returns the total cost and the nonzero shipments `(i, j, amount)`.
pub(crate) fn transport(
    supply: &[f64],
    demand: &[f64],
    cost: impl Fn(usize, usize) -> f64,
) -> (f64, Vec<(usize, usize, f64)>) {
    let (p, q) = (supply.len(), demand.len());
    let total: f64 = supply.iter().sum();
    let eps = 1e-13 * total.max(1.0);
    let mut left = supply.to_vec();
    let mut need = demand.to_vec();
    let mut x = vec![vec![0.0; q]; p];
    let c: Vec<Vec<f64>> = (0..p).map(|i| (0..q).map(|j| cost(i, j)).collect()).collect();
    // Nodes 0..p are sources and p..p+q sinks. Shortest paths by
    // Bellman-Ford: the residual graph of a cheapest flow has no negative
    // cycles.
    let v = p + q;
    let improves = |new: f64, old: f64| old.is_infinite() || new < old - 1e-12 * (1.0 + old.abs());
    loop {
        if !left.iter().any(|&s| s > eps) || !need.iter().any(|&d| d > eps) {
            break;
        }
        let mut dist = vec![f64::INFINITY; v];
        let mut prev = vec![usize::MAX; v];
        for i in 0..p {
            if left[i] > eps {
                dist[i] = 0.0;
            }
        }
        for _ in 0..v {
            let mut changed = false;
            for i in 0..p {
                for j in 0..q {
                    let w = p + j;
                    if dist[i].is_finite() && improves(dist[i] + c[i][j], dist[w]) {
                        dist[w] = dist[i] + c[i][j];
                        prev[w] = i;
                        changed = true;
                    }
                    if x[i][j] > eps && dist[w].is_finite() && improves(dist[w] - c[i][j], dist[i]) {
                        dist[i] = dist[w] - c[i][j];
                        prev[i] = w;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let sink = (0..q)
            .filter(|&j| need[j] > eps && dist[p + j].is_finite())
            .min_by(|&a, &b| dist[p + a].total_cmp(&dist[p + b]));
        let sink = match sink {
            Some(j) => p + j,
            None => break,
        };
        // Walk back to the source, collecting the bottleneck.
        let mut amount = need[sink - p];
        let mut node = sink;
        while prev[node] != usize::MAX {
            let from = prev[node];
            if from >= p {
                amount = amount.min(x[node][from - p]);
            }
            node = from;
        }
        amount = amount.min(left[node]);
        let source = node;
        let mut node = sink;
        while prev[node] != usize::MAX {
            let from = prev[node];
            if from < p {
                x[from][node - p] += amount;
            } else {
                x[node][from - p] -= amount;
            }
            node = from;
        }
        left[source] -= amount;
        need[sink - p] -= amount;
    }
    let mut plan = Vec::new();
    let mut total_cost = 0.0;
    for i in 0..p {
        for j in 0..q {
            if x[i][j] > eps {
                total_cost += x[i][j] * c[i][j];
                plan.push((i, j, x[i][j]));
            }
        }
    }
    (total_cost, plan)
}
