//! Random instance pieces shared by the lemma suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qctree::tree::gen_tree;
use qctree::{FiniteMetricSpace, MetricTree};

use crate::config::TrialParams;

pub type Points = Vec<Vec<f64>>;

/// A size in `[max(min_n, floor), max(max_n, that)]`.
pub fn size(rng: &mut ChaCha8Rng, p: &TrialParams, floor: usize) -> usize {
    let lo = p.min_n.max(floor);
    let hi = p.max_n.max(lo);
    rng.gen_range(lo..=hi)
}

/// Planar points, either uniform in a square or in a few tight clusters.
pub fn points(rng: &mut ChaCha8Rng, n: usize) -> Points {
    if rng.gen_bool(0.5) {
        (0..n)
            .map(|_| vec![rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)])
            .collect()
    } else {
        let k = rng.gen_range(1..=4usize);
        let centers: Points = (0..k)
            .map(|_| vec![rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)])
            .collect();
        let scale = rng.gen_range(0.05..1.0);
        (0..n)
            .map(|_| {
                let c = &centers[rng.gen_range(0..k)];
                vec![
                    c[0] + scale * rng.gen_range(-1.0..1.0),
                    c[1] + scale * rng.gen_range(-1.0..1.0),
                ]
            })
            .collect()
    }
}

pub fn space(points: &Points) -> FiniteMetricSpace {
    FiniteMetricSpace::euclidean(points)
}

/// A sorted subset of `from` with between `lo` and `hi` elements.
pub fn subset_of(rng: &mut ChaCha8Rng, from: &[usize], lo: usize, hi: usize) -> Vec<usize> {
    let hi = hi.min(from.len()).max(1);
    let lo = lo.clamp(1, hi);
    let k = rng.gen_range(lo..=hi);
    let mut v: Vec<usize> = from.choose_multiple(rng, k).copied().collect();
    v.sort_unstable();
    v
}

pub fn subset(rng: &mut ChaCha8Rng, n: usize, lo: usize, hi: usize) -> Vec<usize> {
    let all: Vec<usize> = (0..n).collect();
    subset_of(rng, &all, lo, hi)
}

pub fn tree(rng: &mut ChaCha8Rng, p: &TrialParams, floor: usize) -> qctree::Result<MetricTree> {
    let n = size(rng, p, floor);
    gen_tree(n, rng.gen(), p.profile())
}

/// Random coefficients on a random support.
pub fn measure(rng: &mut ChaCha8Rng, n: usize) -> qctree::FreeVector {
    let support = subset(rng, n, 1, n);
    let coeffs: Vec<f64> = support
        .iter()
        .map(|_| {
            let a: f64 = rng.gen_range(0.1..3.0);
            if rng.gen_bool(0.5) {
                a
            } else {
                -a
            }
        })
        .collect();
    qctree::FreeVector { support, coeffs }
}

/// Values of a random map: a linear functional with noise, or noise alone.
pub fn values(rng: &mut ChaCha8Rng, points: &Points) -> Vec<f64> {
    if rng.gen_bool(0.5) {
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let noise = rng.gen_range(0.0..0.5);
        points
            .iter()
            .map(|p| p[0] * t.cos() + p[1] * t.sin() + noise * rng.gen_range(-1.0..1.0))
            .collect()
    } else {
        points.iter().map(|_| rng.gen_range(-3.0..3.0)).collect()
    }
}
