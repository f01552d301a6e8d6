//! Dictionary simplex with Bland's rule, generic over the number type.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{Num, Signed};

use crate::{Error, Result};

pub(crate) trait LpScalar: Clone + PartialOrd + Num + Signed {
    /// Strictly positive beyond round-off.
    fn pos(&self) -> bool;
}

impl LpScalar for f64 {
    fn pos(&self) -> bool {
        *self > 1e-12
    }
}

impl LpScalar for BigRational {
    fn pos(&self) -> bool {
        self.is_positive()
    }
}

pub(crate) struct LpSolution<T> {
    pub value: T,
    pub x: Vec<T>,
    /// Optimal multipliers of the constraints.
    pub y: Vec<T>,
}

/// Maximizes `c·x` subject to `A x <= b`, `x >= 0`, with `b >= 0`.
pub(crate) fn simplex<T: LpScalar>(a: Vec<Vec<T>>, b: Vec<T>, c: Vec<T>) -> Result<LpSolution<T>> {
    let m = a.len();
    let k = c.len();
    // Labels 0..k are the original variables, k..k+m the slacks.
    let mut nonbasic: Vec<usize> = (0..k).collect();
    let mut basic: Vec<usize> = (k..k + m).collect();
    let mut t = a;
    let mut rhs = b;
    let mut r = c;
    let mut z = T::zero();
    loop {
        let entering = (0..k)
            .filter(|&j| r[j].pos())
            .min_by_key(|&j| nonbasic[j]);
        let q = match entering {
            None => break,
            Some(q) => q,
        };
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            if t[i][q].pos() {
                let ratio = rhs[i].clone() / t[i][q].clone();
                let better = match &leave {
                    None => true,
                    Some((p, best)) => ratio < *best || (ratio == *best && basic[i] < basic[*p]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let p = match leave {
            None => return Err(Error::Solver("linear program is unbounded".into())),
            Some((p, _)) => p,
        };
        let piv = t[p][q].clone();
        for j in 0..k {
            if j != q {
                t[p][j] = t[p][j].clone() / piv.clone();
            }
        }
        t[p][q] = T::one() / piv.clone();
        rhs[p] = rhs[p].clone() / piv.clone();
        let row_p = t[p].clone();
        for i in 0..m {
            if i == p || t[i][q].is_zero() {
                continue;
            }
            let f = t[i][q].clone();
            for j in 0..k {
                if j != q {
                    t[i][j] = t[i][j].clone() - f.clone() * row_p[j].clone();
                }
            }
            t[i][q] = -(f.clone() / piv.clone());
            rhs[i] = rhs[i].clone() - f * rhs[p].clone();
        }
        let f = r[q].clone();
        for j in 0..k {
            if j != q {
                r[j] = r[j].clone() - f.clone() * row_p[j].clone();
            }
        }
        r[q] = -(f.clone() / piv);
        z = z + f * rhs[p].clone();
        core::mem::swap(&mut basic[p], &mut nonbasic[q]);
    }
    let mut x = vec![T::zero(); k];
    for (i, &lbl) in basic.iter().enumerate() {
        if lbl < k {
            x[lbl] = rhs[i].clone();
        }
    }
    let mut y = vec![T::zero(); m];
    for (j, &lbl) in nonbasic.iter().enumerate() {
        if lbl >= k {
            y[lbl - k] = -r[j].clone();
        }
    }
    Ok(LpSolution { value: z, x, y })
}

pub(crate) struct DualNorm<T> {
    /// Optimal value of the Lipschitz program.
    pub value: T,
    /// `b·y` of the multipliers, shifted like `value`.
    pub certificate: T,
    /// An optimal function on the points that carry mass, as
    /// `(point, value)` pairs.
    pub potential: Vec<(usize, T)>,
}

/// `sup Σ a_i f(x_i)` over 1-Lipschitz `f` vanishing on `zero`.
///
/// Only the points carrying mass off `zero` matter, since any 1-Lipschitz
/// function on them and `zero` extends to the whole space. With
/// `r_i = d(x_i, zero)` the shift `g_i = f_i + r_i` is nonnegative and
/// turns every constraint into `... <= b` with `b >= 0`:
/// `g_i − g_j <= d(i,j) + r_i − r_j` and `g_i <= 2 r_i`.
pub(crate) fn dual_norm<T: LpScalar>(
    d: impl Fn(usize, usize) -> T,
    zero: &[usize],
    mass: &[(usize, T)],
) -> Result<DualNorm<T>> {
    if zero.is_empty() {
        return Err(Error::EmptySubset("zero set"));
    }
    let pts: Vec<(usize, T)> = mass
        .iter()
        .filter(|(p, a)| !zero.contains(p) && !a.is_zero())
        .cloned()
        .collect();
    let k = pts.len();
    if k == 0 {
        return Ok(DualNorm {
            value: T::zero(),
            certificate: T::zero(),
            potential: Vec::new(),
        });
    }
    let r: Vec<T> = pts
        .iter()
        .map(|(p, _)| {
            zero.iter()
                .map(|&z| d(*p, z))
                .reduce(|a, b| if b < a { b } else { a })
                .unwrap()
        })
        .collect();
    let mut a = Vec::with_capacity(k * k);
    let mut b = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let mut row = vec![T::zero(); k];
                row[i] = T::one();
                row[j] = -T::one();
                a.push(row);
                b.push(d(pts[i].0, pts[j].0) + r[i].clone() - r[j].clone());
            }
        }
        let mut row = vec![T::zero(); k];
        row[i] = T::one();
        a.push(row);
        b.push(r[i].clone() + r[i].clone());
    }
    let c: Vec<T> = pts.iter().map(|(_, a)| a.clone()).collect();
    let offset = pts
        .iter()
        .zip(&r)
        .fold(T::zero(), |s, ((_, a), ri)| s + a.clone() * ri.clone());
    let sol = simplex(a, b.clone(), c)?;
    let by = b
        .into_iter()
        .zip(&sol.y)
        .fold(T::zero(), |s, (bi, yi)| s + bi * yi.clone());
    Ok(DualNorm {
        value: sol.value - offset.clone(),
        certificate: by - offset,
        potential: pts
            .iter()
            .zip(sol.x)
            .zip(&r)
            .map(|(((p, _), g), ri)| (*p, g - ri.clone()))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn small_program() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3.
        let a = vec![vec![1.0, 1.0], vec![1.0, 3.0], vec![1.0, 0.0]];
        let s = simplex(a, vec![4.0, 6.0, 3.0], vec![3.0, 2.0]).unwrap();
        assert!((s.value - 11.0).abs() < 1e-12);
        assert!((s.x[0] - 3.0).abs() < 1e-12 && (s.x[1] - 1.0).abs() < 1e-12);
        let dual: f64 = [4.0, 6.0, 3.0].iter().zip(&s.y).map(|(b, y)| b * y).sum();
        assert!((dual - 11.0).abs() < 1e-12);
    }

    #[test]
    fn exact_arithmetic() {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let a = vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        let s = simplex(a, vec![q(1, 1), q(2, 1)], vec![q(1, 3), q(1, 2)]).unwrap();
        // Vertex (1/2, 1/2) gives 5/12.
        assert_eq!(s.value, q(5, 12));
    }

    #[test]
    fn degenerate_program_terminates() {
        let a = vec![
            vec![0.5, -5.5, -2.5, 9.0],
            vec![0.5, -1.5, -0.5, 1.0],
            vec![1.0, 0.0, 0.0, 0.0],
        ];
        let s = simplex(a, vec![0.0, 0.0, 1.0], vec![10.0, -57.0, -9.0, -24.0]).unwrap();
        assert!((s.value - 1.0).abs() < 1e-9);
    }
}
