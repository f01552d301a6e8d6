use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::flow::transport;
use super::lp::dual_norm;
use super::FreeVector;
use crate::metric::FiniteMetricSpace;
use crate::quotient::{quotient, sum};
use crate::{Error, Result};

/// Largest accepted difference between two computations of one norm,
/// relative to `1 + value`.
pub const GAP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    /// Cost of an optimal transport plan.
    pub value: f64,
    /// Optimum of the Lipschitz program.
    pub dual: f64,
    pub gap: f64,
    /// Shipments `(from, to, amount)` between points of the space; mass
    /// absorbed by the zero set is sent to its nearest point.
    pub plan: Vec<(usize, usize, f64)>,
    /// An optimal 1-Lipschitz function on the support, as `(point, value)`.
    pub potential: Vec<(usize, f64)>,
}

/// The norm of `mu` among functions that vanish on `zero`.
fn solve(space: &FiniteMetricSpace, zero: &[usize], mu: &FreeVector) -> Result<NormReport> {
    mu.check_in(space.len())?;
    space.check_indices(zero)?;
    let nearest: Vec<(usize, f64)> = (0..space.len())
        .map(|i| {
            zero.iter()
                .map(|&z| (z, space.d(i, z)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap()
        })
        .collect();
    let pts: Vec<(usize, f64)> = mu
        .support
        .iter()
        .zip(&mu.coeffs)
        .filter(|(p, _)| !zero.contains(p))
        .map(|(&p, &a)| (p, a))
        .collect();
    let net: f64 = pts.iter().map(|p| p.1).sum();
    // The zero set acts as one extra node, `None`, carrying `−net`.
    let mut sources: Vec<(Option<usize>, f64)> = Vec::new();
    let mut sinks: Vec<(Option<usize>, f64)> = Vec::new();
    for &(p, a) in &pts {
        if a > 0.0 {
            sources.push((Some(p), a));
        } else {
            sinks.push((Some(p), -a));
        }
    }
    if net > 0.0 {
        sinks.push((None, net));
    } else if net < 0.0 {
        sources.push((None, -net));
    }
    let rho = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (Some(i), Some(j)) => f64::min(space.d(i, j), nearest[i].1 + nearest[j].1),
        (Some(i), None) | (None, Some(i)) => nearest[i].1,
        (None, None) => 0.0,
    };
    let supply: Vec<f64> = sources.iter().map(|s| s.1).collect();
    let demand: Vec<f64> = sinks.iter().map(|s| s.1).collect();
    let (value, raw) = transport(&supply, &demand, |i, j| rho(sources[i].0, sinks[j].0));
    let plan = raw
        .into_iter()
        .map(|(i, j, amt)| {
            let resolve = |node: Option<usize>, other: Option<usize>| match node {
                Some(p) => p,
                None => nearest[other.unwrap()].0,
            };
            (
                resolve(sources[i].0, sinks[j].0),
                resolve(sinks[j].0, sources[i].0),
                amt,
            )
        })
        .collect();
    let mass: Vec<(usize, f64)> = pts.clone();
    let dual = dual_norm(|i, j| space.d(i, j), zero, &mass)?;
    let gap = (value - dual.value).abs();
    let scale = 1.0 + value.abs();
    if gap > GAP_TOL * scale || (dual.value - dual.certificate).abs() > GAP_TOL * scale {
        return Err(Error::Solver(format!(
            "transport {value} and linear program {} (certificate {}) disagree",
            dual.value, dual.certificate
        )));
    }
    Ok(NormReport {
        value,
        dual: dual.value,
        gap,
        plan,
        potential: dual.potential,
    })
}

/// `‖μ‖` in the free space of the pointed space.
pub fn free_norm(space: &FiniteMetricSpace, mu: &FreeVector) -> Result<NormReport> {
    let x0 = space.basepoint().ok_or(Error::MissingBasepoint)?;
    solve(space, &[x0], mu)
}

pub type ConstrainedNorm = NormReport;

/// `sup Σ aᵢ f(xᵢ)` over 1-Lipschitz `f` vanishing on `A ∪ {x₀}`.
pub fn constrained_dual_norm(
    space: &FiniteMetricSpace,
    mu: &FreeVector,
    a: &[usize],
) -> Result<ConstrainedNorm> {
    let x0 = space.basepoint().ok_or(Error::MissingBasepoint)?;
    if a.is_empty() {
        return Err(Error::EmptySubset("A"));
    }
    solve(space, &zero_set(a, x0), mu)
}

fn zero_set(a: &[usize], x0: usize) -> Vec<usize> {
    let mut z = a.to_vec();
    z.push(x0);
    z.sort_unstable();
    z.dedup();
    z
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub constrained: f64,
    /// `‖[μ]‖` in the quotient by `A ∪ {x₀}`, based at the collapsed class.
    pub quotient: f64,
    pub gap: f64,
    pub passed: bool,
}

/// Compares the constrained norm with the norm of the pushforward in the
/// quotient.
pub fn quotient_duality_check(
    space: &FiniteMetricSpace,
    a: &[usize],
    mu: &FreeVector,
) -> Result<DualityReport> {
    let constrained = constrained_dual_norm(space, mu, a)?.value;
    let x0 = space.basepoint().ok_or(Error::MissingBasepoint)?;
    let q = quotient(space, &zero_set(a, x0))?;
    let pushed = mu.pushforward(&q.class_of, q.len());
    let quotient = free_norm(&q.space, &pushed)?.value;
    let gap = (constrained - quotient).abs();
    Ok(DualityReport {
        constrained,
        quotient,
        gap,
        passed: gap <= GAP_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumDecompositionReport {
    pub total: f64,
    /// Norm of the restriction to each piece.
    pub parts: Vec<f64>,
    pub gap: f64,
    pub passed: bool,
}

/// `‖μ‖` on a pointed sum against the sum of the norms of its pieces.
/// `mu` lives on the sum built from `pieces`.
pub fn sum_decomposition_check(
    pieces: &[FiniteMetricSpace],
    mu: &FreeVector,
) -> Result<SumDecompositionReport> {
    let s = sum(pieces)?;
    let total = free_norm(&s.space, mu)?.value;
    let mut parts = Vec::with_capacity(pieces.len());
    for (i, p) in pieces.iter().enumerate() {
        let mut dense = alloc::vec![0.0; p.len()];
        for (&x, &a) in mu.support.iter().zip(&mu.coeffs) {
            if let Some((j, k)) = s.origin[x] {
                if j == i {
                    dense[k] += a;
                }
            }
        }
        parts.push(free_norm(p, &FreeVector::from_dense(&dense))?.value);
    }
    let gap = (total - parts.iter().sum::<f64>()).abs();
    Ok(SumDecompositionReport {
        total,
        parts,
        gap,
        passed: gap <= GAP_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiLipschitzReport {
    pub norm_a: f64,
    pub norm_b: f64,
    /// `norm_b / norm_a` (1 when both vanish).
    pub ratio: f64,
    pub lambda: f64,
    /// Extremes of `d_B / d_A` over distinct pairs.
    pub min_distance_ratio: f64,
    pub max_distance_ratio: f64,
    /// `1/λ <= ratio <= λ`.
    pub passed: bool,
}

/// Compares `‖μ‖` in `A` with the norm of its image in `B` under the
/// bijection `corr`, which must send basepoint to basepoint.
pub fn bilipschitz_norm_comparison(
    space_a: &FiniteMetricSpace,
    space_b: &FiniteMetricSpace,
    corr: &[usize],
    mu: &FreeVector,
    lambda: f64,
) -> Result<BiLipschitzReport> {
    let n = space_a.len();
    if corr.len() != n || space_b.len() != n {
        return Err(Error::Precondition("correspondence is not a bijection".into()));
    }
    let mut hit = alloc::vec![false; n];
    for &c in corr {
        if c >= n || hit[c] {
            return Err(Error::Precondition("correspondence is not a bijection".into()));
        }
        hit[c] = true;
    }
    let (ba, bb) = match (space_a.basepoint(), space_b.basepoint()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::MissingBasepoint),
    };
    if corr[ba] != bb {
        return Err(Error::Precondition(
            "correspondence does not preserve the basepoint".into(),
        ));
    }
    if !(lambda >= 1.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            range: "[1, inf)",
        });
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        for j in i + 1..n {
            let r = space_b.d(corr[i], corr[j]) / space_a.d(i, j);
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    if n < 2 {
        (lo, hi) = (1.0, 1.0);
    }
    let norm_a = free_norm(space_a, mu)?.value;
    let norm_b = free_norm(space_b, &mu.pushforward(corr, n))?.value;
    let ratio = if norm_a == 0.0 && norm_b == 0.0 {
        1.0
    } else {
        norm_b / norm_a
    };
    Ok(BiLipschitzReport {
        norm_a,
        norm_b,
        ratio,
        lambda,
        min_distance_ratio: lo,
        max_distance_ratio: hi,
        passed: ratio >= 1.0 / lambda - GAP_TOL && ratio <= lambda + GAP_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn square() -> FiniteMetricSpace {
        FiniteMetricSpace::euclidean(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.4, 2.0],
        ])
        .with_basepoint(0)
        .unwrap()
    }

    #[test]
    fn diracs_and_molecules_are_isometric() {
        let s = square();
        for x in 0..5 {
            let r = free_norm(&s, &FreeVector::dirac(x)).unwrap();
            assert!((r.value - s.d(x, 0)).abs() < 1e-9);
            for y in 0..5 {
                let m = free_norm(&s, &FreeVector::molecule(x, y)).unwrap();
                assert!((m.value - s.d(x, y)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn empty_measure_has_norm_zero() {
        assert_eq!(free_norm(&square(), &FreeVector::zero()).unwrap().value, 0.0);
    }

    #[test]
    fn whole_space_constraint_gives_zero() {
        let s = square();
        let mu = FreeVector::from_dense(&[0.0, 1.0, -2.0, 0.5, 3.0]);
        let r = constrained_dual_norm(&s, &mu, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(r.value, 0.0);
        let b = constrained_dual_norm(&s, &mu, &[0]).unwrap();
        assert!((b.value - free_norm(&s, &mu).unwrap().value).abs() < 1e-9);
    }

    #[test]
    fn single_atom_off_a_is_distance_to_a() {
        let s = square();
        let r = quotient_duality_check(&s, &[2, 3], &FreeVector::dirac(4)).unwrap();
        let expect = f64::min(s.d(4, 3), s.d(4, 2));
        assert!((r.constrained - expect).abs() < 1e-9 && r.passed);
    }

    #[test]
    fn two_pieces_route_through_the_glued_point() {
        let p = FiniteMetricSpace::on_line(&[0.0, 2.0]).with_basepoint(0).unwrap();
        let q = FiniteMetricSpace::on_line(&[0.0, 3.0]).with_basepoint(0).unwrap();
        let mu = FreeVector::molecule(1, 2);
        let r = sum_decomposition_check(&[p, q], &mu).unwrap();
        assert!((r.total - 5.0).abs() < 1e-9);
        assert!(r.passed);
    }

    #[test]
    fn scaling_by_three() {
        let s = square();
        let t = s.scaled(3.0).with_basepoint(0).unwrap();
        let mu = FreeVector::from_dense(&[0.0, 1.0, -0.5, 0.25, -2.0]);
        let id: Vec<usize> = (0..5).collect();
        let r = bilipschitz_norm_comparison(&s, &t, &id, &mu, 3.0).unwrap();
        assert!((r.ratio - 3.0).abs() < 1e-9 && r.passed);
        assert!(bilipschitz_norm_comparison(&s, &t, &[0, 0, 1, 2, 3], &mu, 3.0).is_err());
    }
}
