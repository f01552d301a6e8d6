use alloc::vec::Vec;

use super::FiniteMetricSpace;
use crate::{Error, Result, TOL};

/// Lipschitz constant of `values` (aligned with `subset`) and a pair
/// attaining it. Zero with no witness for fewer than two points.
pub fn lipschitz_on(
    space: &FiniteMetricSpace,
    subset: &[usize],
    values: &[f64],
) -> (f64, Option<(usize, usize)>) {
    let mut best = (0.0, None);
    for a in 0..subset.len() {
        for b in a + 1..subset.len() {
            let d = space.d(subset[a], subset[b]);
            let r = if d > 0.0 {
                (values[a] - values[b]).abs() / d
            } else {
                0.0
            };
            if r > best.0 {
                best = (r, Some((subset[a], subset[b])));
            }
        }
    }
    best
}

/// McShane extension `F(x) = min_{y ∈ S} f(y) + L · d(x, y)`.
///
/// `values[k]` is the value at `subset[k]`. The result agrees with the
/// input on `S` exactly and is `L`-Lipschitz everywhere.
pub fn mcshane_extend(
    space: &FiniteMetricSpace,
    subset: &[usize],
    values: &[f64],
    lip: f64,
) -> Result<Vec<f64>> {
    space.check_indices(subset)?;
    if subset.is_empty() {
        return Err(Error::EmptySubset("extension domain"));
    }
    if values.len() != subset.len() {
        return Err(Error::DimensionMismatch {
            points: subset.len(),
            rows: values.len(),
            bad_row: 0,
            cols: 1,
        });
    }
    if !(lip > 0.0) {
        return Err(Error::InvalidParameter {
            name: "Lipschitz bound",
            value: lip,
            range: "(0, inf)",
        });
    }
    let (l, pair) = lipschitz_on(space, subset, values);
    if l > lip * (1.0 + TOL) + TOL {
        let (a, b) = pair.unwrap();
        return Err(Error::NotLipschitz {
            a,
            b,
            ratio: l,
            bound: lip,
        });
    }
    let mut out: Vec<f64> = (0..space.len())
        .map(|x| {
            subset
                .iter()
                .zip(values)
                .map(|(&y, &f)| f + lip * space.d(x, y))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    for (&y, &f) in subset.iter().zip(values) {
        out[y] = f;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_anchor_gives_distance() {
        let s = FiniteMetricSpace::on_line(&[0.0, 2.0, 5.0]);
        let f = mcshane_extend(&s, &[1], &[0.0], 1.0).unwrap();
        assert_eq!(f, vec![2.0, 0.0, 3.0]);
    }

    #[test]
    fn full_domain_is_identity() {
        let s = FiniteMetricSpace::on_line(&[0.0, 2.0, 5.0]);
        let f = mcshane_extend(&s, &[0, 1, 2], &[1.0, 2.0, 0.5], 1.0).unwrap();
        assert_eq!(f, vec![1.0, 2.0, 0.5]);
    }

    #[test]
    fn steep_data_is_rejected_with_witness() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0]);
        let e = mcshane_extend(&s, &[0, 1], &[0.0, 3.0], 1.0).unwrap_err();
        assert!(matches!(e, Error::NotLipschitz { a: 0, b: 1, .. }));
    }
}
