//! Brute-force lightness constant for small real-valued maps.

use qctree::FiniteMetricSpace;

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

/// Largest `diam / r` over `r`-components of preimages of windows
/// `[lo, lo + r]` with `lo` a value of the map.
pub fn ratio_at(space: &FiniteMetricSpace, values: &[f64], r: f64) -> f64 {
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

/// Pairwise distances and positive value gaps.
pub fn critical_radii(space: &FiniteMetricSpace, values: &[f64]) -> Vec<f64> {
    let mut rs = space.distinct_distances();
    for &a in values {
        for &b in values {
            if b > a {
                rs.push(b - a);
            }
        }
    }
    rs.retain(|&r| r > 0.0);
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    rs
}

/// Lightness constant as the maximum over all critical radii.
pub fn lightness(space: &FiniteMetricSpace, values: &[f64]) -> f64 {
    critical_radii(space, values)
        .into_iter()
        .map(|r| ratio_at(space, values, r))
        .fold(0.0, f64::max)
}

/// Largest ratio on a uniform grid of `steps` radii up to `top`.
pub fn grid_lightness(space: &FiniteMetricSpace, values: &[f64], top: f64, steps: usize) -> f64 {
    (1..=steps)
        .map(|k| ratio_at(space, values, top * k as f64 / steps as f64))
        .fold(0.0, f64::max)
}

/// `max |f(u) − f(v)| / d(u, v)` by scanning all ordered pairs.
pub fn lipschitz(space: &FiniteMetricSpace, values: &[f64]) -> f64 {
    let n = values.len();
    let mut best = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                best = best.max((values[i] - values[j]).abs() / space.d(i, j));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_map_on_two_points() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0]);
        assert_eq!(lightness(&s, &[0.0, 0.0]), 1.0);
    }

    #[test]
    fn identity_on_three_points() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0, 2.0]);
        assert_eq!(lightness(&s, &[0.0, 1.0, 2.0]), 1.0);
        assert_eq!(lipschitz(&s, &[0.0, 1.0, 2.0]), 1.0);
    }
}
