//! Exact rational versions of the norm identities.
//!
//! Distances are converted from `f64` without rounding, quotients and sums
//! are rebuilt in rational arithmetic, and the Lipschitz program is solved
//! exactly, so identities can be checked for equality.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use super::lp::dual_norm;
use super::FreeVector;
use crate::metric::FiniteMetricSpace;
use crate::{Error, Result};

/// A finite metric space with rational distances.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSpace {
    pub dist: Vec<Vec<BigRational>>,
    pub basepoint: Option<usize>,
}

fn rational(x: f64, name: &'static str) -> Result<BigRational> {
    BigRational::from_float(x).ok_or(Error::InvalidParameter {
        name,
        value: x,
        range: "finite",
    })
}

fn min(a: BigRational, b: BigRational) -> BigRational {
    if b < a {
        b
    } else {
        a
    }
}

impl RationalSpace {
    pub fn from_space(space: &FiniteMetricSpace) -> Result<Self> {
        let n = space.len();
        let dist = (0..n)
            .map(|i| (0..n).map(|j| rational(space.d(i, j), "distance")).collect())
            .collect::<Result<_>>()?;
        Ok(RationalSpace {
            dist,
            basepoint: space.basepoint(),
        })
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// `X / E` with the collapsed class at index 0 as basepoint, the other
    /// points in parent order. Also returns the class of every parent point.
    pub fn quotient(&self, e: &[usize]) -> Result<(RationalSpace, Vec<usize>)> {
        if e.is_empty() {
            return Err(Error::EmptySubset("collapsed set"));
        }
        let n = self.len();
        let to_e: Vec<BigRational> = (0..n)
            .map(|i| e.iter().map(|&z| self.dist[i][z].clone()).reduce(min).unwrap())
            .collect();
        let mut class_of = vec![0; n];
        let mut reps = vec![usize::MAX];
        for i in 0..n {
            if !e.contains(&i) {
                class_of[i] = reps.len();
                reps.push(i);
            }
        }
        let m = reps.len();
        let mut dist = vec![vec![BigRational::zero(); m]; m];
        for a in 0..m {
            for b in a + 1..m {
                let v = if a == 0 {
                    to_e[reps[b]].clone()
                } else {
                    let (x, y) = (reps[a], reps[b]);
                    min(self.dist[x][y].clone(), to_e[x].clone() + to_e[y].clone())
                };
                dist[a][b] = v.clone();
                dist[b][a] = v;
            }
        }
        Ok((
            RationalSpace {
                dist,
                basepoint: Some(0),
            },
            class_of,
        ))
    }

    /// The pointed sum, laid out like [`crate::quotient::sum`]: the glued
    /// point first, then each piece's other points in order. Also returns
    /// each piece's local-to-sum index map.
    pub fn sum(pieces: &[RationalSpace]) -> Result<(RationalSpace, Vec<Vec<usize>>)> {
        let bases: Vec<usize> = pieces
            .iter()
            .map(|p| p.basepoint.ok_or(Error::MissingBasepoint))
            .collect::<Result<_>>()?;
        let mut origin: Vec<Option<(usize, usize)>> = vec![None];
        let mut maps = Vec::with_capacity(pieces.len());
        for (i, p) in pieces.iter().enumerate() {
            let mut map = vec![0; p.len()];
            for (k, slot) in map.iter_mut().enumerate() {
                if k != bases[i] {
                    *slot = origin.len();
                    origin.push(Some((i, k)));
                }
            }
            maps.push(map);
        }
        let to_base = |s: usize| match origin[s] {
            None => BigRational::zero(),
            Some((i, k)) => pieces[i].dist[k][bases[i]].clone(),
        };
        let m = origin.len();
        let mut dist = vec![vec![BigRational::zero(); m]; m];
        for a in 0..m {
            for b in a + 1..m {
                let v = match (origin[a], origin[b]) {
                    (Some((i, k)), Some((j, l))) if i == j => pieces[i].dist[k][l].clone(),
                    _ => to_base(a) + to_base(b),
                };
                dist[a][b] = v.clone();
                dist[b][a] = v;
            }
        }
        Ok((
            RationalSpace {
                dist,
                basepoint: Some(0),
            },
            maps,
        ))
    }
}

/// Optimal value and the value of the optimal multipliers; equal for a
/// correct solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactNorm {
    pub value: BigRational,
    pub certificate: BigRational,
}

fn rational_mass(mu: &FreeVector) -> Result<Vec<(usize, BigRational)>> {
    mu.support
        .iter()
        .zip(&mu.coeffs)
        .map(|(&p, &a)| Ok((p, rational(a, "coefficient")?)))
        .collect()
}

/// The norm of `mu` among 1-Lipschitz functions vanishing on `zero`.
pub fn exact_norm(space: &RationalSpace, zero: &[usize], mu: &FreeVector) -> Result<ExactNorm> {
    mu.check_in(space.len())?;
    let mass = rational_mass(mu)?;
    let r = dual_norm(|i, j| space.dist[i][j].clone(), zero, &mass)?;
    Ok(ExactNorm {
        value: r.value,
        certificate: r.certificate,
    })
}

/// Two exact values that are expected to coincide.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactComparison {
    pub left: ExactNorm,
    pub right: ExactNorm,
}

impl ExactComparison {
    pub fn equal(&self) -> bool {
        self.left.value == self.right.value
            && self.left.value == self.left.certificate
            && self.right.value == self.right.certificate
    }
}

/// Constrained norm on `X` (left) against the norm of the pushforward in
/// `X / (A ∪ {x₀})` (right).
pub fn exact_quotient_duality(
    space: &FiniteMetricSpace,
    a: &[usize],
    mu: &FreeVector,
) -> Result<ExactComparison> {
    let x0 = space.basepoint().ok_or(Error::MissingBasepoint)?;
    let mut zero = a.to_vec();
    zero.push(x0);
    zero.sort_unstable();
    zero.dedup();
    let rs = RationalSpace::from_space(space)?;
    let left = exact_norm(&rs, &zero, mu)?;
    let (q, class_of) = rs.quotient(&zero)?;
    let right = exact_norm(&q, &[0], &mu.pushforward(&class_of, q.len()))?;
    Ok(ExactComparison { left, right })
}

/// Norm on the pointed sum (left) against the sum of the piece norms
/// (right, with the summed value in both fields).
pub fn exact_sum_decomposition(
    pieces: &[FiniteMetricSpace],
    mu: &FreeVector,
) -> Result<ExactComparison> {
    let rp: Vec<RationalSpace> = pieces
        .iter()
        .map(RationalSpace::from_space)
        .collect::<Result<_>>()?;
    let (s, maps) = RationalSpace::sum(&rp)?;
    let left = exact_norm(&s, &[0], mu)?;
    let dense = mu.to_dense(s.len());
    let mut value = BigRational::zero();
    let mut certificate = BigRational::zero();
    for (p, map) in rp.iter().zip(&maps) {
        let base = p.basepoint.unwrap();
        let local: Vec<f64> = (0..p.len())
            .map(|k| if k == base { 0.0 } else { dense[map[k]] })
            .collect();
        let r = exact_norm(p, &[base], &FreeVector::from_dense(&local))?;
        value += r.value;
        certificate += r.certificate;
    }
    Ok(ExactComparison {
        left,
        right: ExactNorm { value, certificate },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freespace::free_norm;
    use num_traits::ToPrimitive;

    #[test]
    fn matches_floating_point() {
        let s = FiniteMetricSpace::on_line(&[0.0, 0.75, 2.5, 3.0])
            .with_basepoint(0)
            .unwrap();
        let mu = FreeVector::from_dense(&[0.0, 1.5, -0.25, 2.0]);
        let e = exact_norm(&RationalSpace::from_space(&s).unwrap(), &[0], &mu).unwrap();
        assert_eq!(e.value, e.certificate);
        let f = free_norm(&s, &mu).unwrap().value;
        assert!((e.value.to_f64().unwrap() - f).abs() < 1e-12);
    }

    #[test]
    fn identities_hold_exactly() {
        let s = FiniteMetricSpace::euclidean(&[
            vec![0.0, 0.0],
            vec![1.0, 0.5],
            vec![0.25, 1.5],
            vec![2.0, 2.0],
            vec![1.5, 0.0],
        ])
        .with_basepoint(0)
        .unwrap();
        let mu = FreeVector::from_dense(&[0.5, -1.0, 0.75, 1.0, -0.25]);
        assert!(exact_quotient_duality(&s, &[1, 4], &mu).unwrap().equal());
        let p = FiniteMetricSpace::on_line(&[0.0, 1.0, 2.5]).with_basepoint(1).unwrap();
        let mu = FreeVector::from_dense(&[0.0, 1.0, -2.0, 0.5, 0.25]);
        assert!(exact_sum_decomposition(&[p.clone(), p], &mu).unwrap().equal());
    }
}
