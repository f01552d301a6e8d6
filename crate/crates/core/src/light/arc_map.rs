use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::ScalarMap;
use crate::metric::FiniteMetricSpace;
use crate::tree::MetricTree;
use crate::{Error, Result};

/// Diameter of `path[lo..=hi]`.
fn seg_diam(space: &FiniteMetricSpace, path: &[usize], lo: usize, hi: usize) -> f64 {
    space.diam_of(&path[lo..=hi])
}

/// Tent cascade: `g(path[lo]) = alpha` and `g(path[hi]) = beta` are set;
/// the interior is filled by splitting where the initial piece first
/// reaches half the diameter.
fn fill(space: &FiniteMetricSpace, path: &[usize], g: &mut [f64], lo: usize, hi: usize) {
    if hi <= lo + 1 {
        return;
    }
    let whole = seg_diam(space, path, lo, hi);
    let s = (lo + 1..hi)
        .find(|&s| seg_diam(space, path, lo, s) >= 0.5 * whole)
        .unwrap_or(hi - 1);
    let d1 = seg_diam(space, path, lo, s);
    let d2 = seg_diam(space, path, s, hi);
    let (alpha, beta) = (g[lo], g[hi]);
    let low = f64::max(alpha - d1, beta - d2);
    let high = f64::min(alpha + d1, beta + d2);
    let mid = 0.5 * (alpha + beta);
    g[s] = if low > high {
        mid
    } else if (mid - low) > (high - mid) {
        low
    } else {
        high
    };
    fill(space, path, g, lo, s);
    fill(space, path, g, s, hi);
}

/// Values along `path` (a sequence of distinct points of `space`) with
/// `a` at the first point and `b` at the last.
///
/// A tent cascade from 0 to the diameter `D` is built first. With
/// `r = |a − b| / D`, it is scaled by `r` when `r >= 1`; otherwise it is
/// folded at `(rD + D)/2` so that it ends at `rD`. Either way it is then
/// placed to start at `a`.
pub fn build_arc_map_on(
    space: &FiniteMetricSpace,
    path: &[usize],
    a: f64,
    b: f64,
) -> Result<Vec<f64>> {
    space.check_indices(path)?;
    if path.is_empty() {
        return Err(Error::NotAnArc("empty path".into()));
    }
    let m = path.len();
    let diam = space.diam_of(path);
    if m == 1 || diam == 0.0 {
        if a != b {
            return Err(Error::Precondition(format!(
                "a single point cannot take the two values {a} and {b}"
            )));
        }
        return Ok(vec![a; m]);
    }
    let mut g = vec![0.0; m];
    g[m - 1] = diam;
    fill(space, path, &mut g, 0, m - 1);
    let r = (b - a).abs() / diam;
    let sign = if b >= a { 1.0 } else { -1.0 };
    let mut out: Vec<f64> = if r >= 1.0 {
        g.iter().map(|&x| a + sign * r * x).collect()
    } else {
        let c = 0.5 * (r * diam + diam);
        g.iter().map(|&x| a + sign * (c - (x - c).abs())).collect()
    };
    out[0] = a;
    out[m - 1] = b;
    Ok(out)
}

/// Map on an arc tree with value `a` at the lower-numbered leaf and `b`
/// at the other.
pub fn build_arc_map(tree: &MetricTree, a: f64, b: f64) -> Result<ScalarMap> {
    if tree.len() == 1 {
        return build_arc_map_on(tree.space(), &[0], a, b).map(ScalarMap::new);
    }
    let leaves = tree.leaves();
    if leaves.len() != 2 {
        return Err(Error::NotAnArc(format!(
            "expected 2 leaves, found {}",
            leaves.len()
        )));
    }
    let path = tree.arc(leaves[0], leaves[1]);
    let vals = build_arc_map_on(tree.space(), &path, a, b)?;
    let mut values = vec![0.0; tree.len()];
    for (k, &p) in path.iter().enumerate() {
        values[p] = vals[k];
    }
    Ok(ScalarMap::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::light::measure_lightness;
    use crate::tree::fixtures::{path, star};
    use crate::TOL;

    fn unit_path(n: usize) -> MetricTree {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        path(n).with_space(FiniteMetricSpace::on_line(&xs)).unwrap()
    }

    #[test]
    fn segment_gives_identity() {
        let t = unit_path(9);
        let f = build_arc_map(&t, 0.0, 1.0).unwrap();
        for (i, v) in f.values.iter().enumerate() {
            assert!((v - i as f64 / 8.0).abs() < 1e-12);
        }
        let r = f.measure(t.space());
        assert!((r.l_hat - 1.0).abs() < TOL);
        assert!((r.q_hat - 1.0).abs() < TOL);
    }

    #[test]
    fn equal_targets_fold_to_a_tent() {
        let t = unit_path(11);
        let f = build_arc_map(&t, 0.0, 0.0).unwrap();
        for (i, v) in f.values.iter().enumerate() {
            let x = i as f64 / 10.0;
            assert!((v - f64::min(x, 1.0 - x)).abs() < 1e-12);
        }
        assert_eq!((f.values[0], f.values[10]), (0.0, 0.0));
    }

    #[test]
    fn steep_targets_scale() {
        let t = unit_path(5);
        let f = build_arc_map(&t, 3.0, -1.0).unwrap();
        assert_eq!((f.values[0], f.values[4]), (3.0, -1.0));
        assert!((measure_lightness(t.space(), &f.values).l_hat - 4.0).abs() < 1e-9);
    }

    #[test]
    fn snowflaked_arc_is_light() {
        for n in [5, 17, 40] {
            let t = unit_path(n);
            let t = t.with_space(t.space().snowflake(0.6).unwrap()).unwrap();
            let f = build_arc_map(&t, 0.0, 1.0).unwrap();
            let r = f.measure(t.space());
            assert!(r.q_hat.is_finite() && r.q_hat < 20.0, "n = {n}: {}", r.q_hat);
            assert_eq!((f.values[0], f.values[n - 1]), (0.0, 1.0));
        }
    }

    #[test]
    fn rejects_non_arcs() {
        assert!(matches!(
            build_arc_map(&star(3, 1), 0.0, 1.0),
            Err(Error::NotAnArc(_))
        ));
    }
}
