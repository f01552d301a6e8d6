use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::quotient;
use crate::metric::{FiniteMetricSpace, WhitneyNet};
use crate::{Error, Result, TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The input is outside the range where the claim is made; numbers are
    /// reported but not judged.
    HypothesisViolated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhitneyQuotientReport {
    pub points: usize,
    pub epsilon: f64,
    /// Triples `(a, b, c)` of quotient indices with `u(a,c) > max(u(a,b), u(b,c))`.
    pub ultrametric_violations: Vec<(usize, usize, usize)>,
    /// Pairs with `ρ < ε·u` or `ρ > 2u`.
    pub sandwich_violations: Vec<(usize, usize)>,
    /// Extremes of `ρ / u` over distinct pairs.
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub status: CheckStatus,
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// On `(X ∪ N) / X`, compares `ρ` with the ultrametric
/// `u([n₁],[n₂]) = max{d(n₁,X), d(n₂,X)}`.
pub fn whitney_quotient_check(
    space: &FiniteMetricSpace,
    net: &WhitneyNet,
) -> Result<WhitneyQuotientReport> {
    let chk = net.check(space);
    if !chk.separation_violations.is_empty() || !chk.maximality_violations.is_empty() {
        return Err(Error::Precondition(format!(
            "not a Whitney net: {} separation and {} maximality violations",
            chk.separation_violations.len(),
            chk.maximality_violations.len()
        )));
    }
    let x = &net.target;
    let pts = union(x, &net.net);
    let sub = space.restrict(&pts)?;
    let local_x: Vec<usize> = x.iter().map(|p| pts.binary_search(p).unwrap()).collect();
    let q = quotient(&sub, &local_x)?;
    let m = q.len();
    let dx: Vec<f64> = (0..m)
        .map(|c| if c == 0 { 0.0 } else { sub.dist_to_set(q.representatives[c], &local_x) })
        .collect();
    let u = |a: usize, b: usize| if a == b { 0.0 } else { f64::max(dx[a], dx[b]) };
    let mut rep = WhitneyQuotientReport {
        points: m,
        epsilon: net.epsilon,
        ultrametric_violations: Vec::new(),
        sandwich_violations: Vec::new(),
        min_ratio: f64::INFINITY,
        max_ratio: 0.0,
        status: CheckStatus::Pass,
    };
    for a in 0..m {
        for b in a + 1..m {
            let (rho, ub) = (q.space.d(a, b), u(a, b));
            let r = rho / ub;
            rep.min_ratio = rep.min_ratio.min(r);
            rep.max_ratio = rep.max_ratio.max(r);
            if rho < net.epsilon * ub - TOL || rho > 2.0 * ub + TOL {
                rep.sandwich_violations.push((a, b));
            }
        }
    }
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if u(a, c) > f64::max(u(a, b), u(b, c)) + TOL {
                    rep.ultrametric_violations.push((a, b, c));
                }
            }
        }
    }
    if m < 2 {
        rep.min_ratio = 1.0;
        rep.max_ratio = 1.0;
    }
    if !rep.sandwich_violations.is_empty() || !rep.ultrametric_violations.is_empty() {
        rep.status = CheckStatus::Fail;
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhitneyIsometryReport {
    pub points: usize,
    pub epsilon: f64,
    pub max_deviation: f64,
    /// Parent points of the worst pair.
    pub witness: Option<(usize, usize)>,
    pub status: CheckStatus,
}

/// Compares `Y / (Y ∩ (X ∪ N))` with `(X ∪ Y) / (X ∪ N)` through the
/// identity on `Y ∖ (X ∪ N)`. The net's source is `Y` and its target `X`.
pub fn whitney_isometry_check(
    space: &FiniteMetricSpace,
    net: &WhitneyNet,
) -> Result<WhitneyIsometryReport> {
    let (x, y) = (&net.target, &net.source);
    if y.is_empty() {
        return Err(Error::EmptySubset("Y"));
    }
    let xn = union(x, &net.net);
    let y_sorted = union(y, &[]);
    let y_cap: Vec<usize> = y_sorted.iter().copied().filter(|p| xn.binary_search(p).is_ok()).collect();
    let ly = space.restrict(&y_sorted)?;
    let left = quotient(
        &ly,
        &y_cap.iter().map(|p| y_sorted.binary_search(p).unwrap()).collect::<Vec<_>>(),
    )?;
    let xy = union(x, y);
    let ry = space.restrict(&xy)?;
    let right = quotient(
        &ry,
        &xn.iter().map(|p| xy.binary_search(p).unwrap()).collect::<Vec<_>>(),
    )?;
    // Left quotient index -> right quotient index via the parent point.
    let to_right = |c: usize| -> usize {
        if c == 0 {
            0
        } else {
            let p = y_sorted[left.representatives[c]];
            right.class_of[xy.binary_search(&p).unwrap()]
        }
    };
    let mut rep = WhitneyIsometryReport {
        points: left.len(),
        epsilon: net.epsilon,
        max_deviation: 0.0,
        witness: None,
        status: CheckStatus::Pass,
    };
    let surjective = left.len() == right.len();
    for a in 0..left.len() {
        for b in a + 1..left.len() {
            let dev = (left.space.d(a, b) - right.space.d(to_right(a), to_right(b))).abs();
            if rep.witness.is_none() || dev > rep.max_deviation {
                rep.max_deviation = dev;
                rep.witness = Some((
                    y_sorted[left.representatives[a]],
                    y_sorted[left.representatives[b]],
                ));
            }
        }
    }
    rep.status = if net.epsilon > 0.5 {
        CheckStatus::HypothesisViolated
    } else if rep.max_deviation <= TOL && surjective {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::whitney_net;
    use alloc::vec;

    fn geometric() -> FiniteMetricSpace {
        let mut xs: Vec<f64> = (0..=6).map(|k| libm::pow(2.0, -(k as f64))).collect();
        xs.push(0.0);
        FiniteMetricSpace::on_line(&xs)
    }

    #[test]
    fn geometric_net_is_ultrametric_like() {
        let s = geometric();
        let b: Vec<usize> = (0..7).collect();
        let n = whitney_net(&s, &b, &[7], 0.5, None).unwrap();
        let r = whitney_quotient_check(&s, &n).unwrap();
        assert_eq!(r.status, CheckStatus::Pass);
        assert_eq!(r.points, 8);
        assert!(r.min_ratio >= 0.5 - 1e-12);
    }

    #[test]
    fn single_net_point_is_vacuous() {
        let s = FiniteMetricSpace::on_line(&[0.0, 5.0]);
        let n = whitney_net(&s, &[1], &[0], 0.5, None).unwrap();
        assert_eq!(whitney_quotient_check(&s, &n).unwrap().status, CheckStatus::Pass);
    }

    #[test]
    fn isometry_and_hypothesis_guard() {
        let s = FiniteMetricSpace::euclidean(&[
            vec![0.0, 0.0],
            vec![1.0, 0.2],
            vec![1.3, 0.9],
            vec![2.5, 0.1],
            vec![3.1, 1.7],
            vec![0.4, 2.2],
        ]);
        let y = [1, 2, 3, 4, 5];
        let n = whitney_net(&s, &y, &[0], 0.5, None).unwrap();
        assert_eq!(whitney_isometry_check(&s, &n).unwrap().status, CheckStatus::Pass);
        let n = whitney_net(&s, &y, &[0], 0.9, None).unwrap();
        assert_eq!(
            whitney_isometry_check(&s, &n).unwrap().status,
            CheckStatus::HypothesisViolated
        );
    }

    #[test]
    fn source_inside_net_collapses_to_a_point() {
        let s = FiniteMetricSpace::on_line(&[0.0, 4.0]);
        let n = whitney_net(&s, &[1], &[0], 0.5, None).unwrap();
        let r = whitney_isometry_check(&s, &n).unwrap();
        assert_eq!(r.points, 1);
        assert_eq!(r.status, CheckStatus::Pass);
    }
}
