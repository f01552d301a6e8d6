//! Norms of finitely supported measures in the Lipschitz free space.
//!
//! For a pointed space `(X, x₀)` and `μ = Σ aᵢ δ_{xᵢ}`,
//! `‖μ‖ = sup { Σ aᵢ f(xᵢ) : f(x₀) = 0, Lip(f) <= 1 }`. The primal side is a
//! transport problem in which the basepoint absorbs the net mass; the dual
//! side is solved as a linear program. Both are computed and compared.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

mod exact;
mod flow;
mod lp;
mod norms;

pub use exact::{
    exact_norm, exact_quotient_duality, exact_sum_decomposition, ExactComparison, ExactNorm,
    RationalSpace,
};
pub use norms::{
    bilipschitz_norm_comparison, constrained_dual_norm, free_norm, quotient_duality_check,
    sum_decomposition_check, BiLipschitzReport, ConstrainedNorm, DualityReport, NormReport,
    SumDecompositionReport, GAP_TOL,
};

/// A finitely supported signed measure `Σ aᵢ δ_{xᵢ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeVector {
    pub support: Vec<usize>,
    pub coeffs: Vec<f64>,
}

impl FreeVector {
    /// Fails on repeated support points, zero or non-finite coefficients,
    /// or length mismatch.
    pub fn new(support: Vec<usize>, coeffs: Vec<f64>) -> Result<Self> {
        let v = FreeVector { support, coeffs };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        if self.support.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch {
                points: self.support.len(),
                rows: self.coeffs.len(),
                bad_row: 0,
                cols: 1,
            });
        }
        for (k, &p) in self.support.iter().enumerate() {
            if self.support[..k].contains(&p) {
                return Err(Error::Precondition(format!("support point {p} is repeated")));
            }
            let a = self.coeffs[k];
            if a == 0.0 || !a.is_finite() {
                return Err(Error::Precondition(format!(
                    "coefficient {a} at point {p} must be finite and nonzero"
                )));
            }
        }
        Ok(())
    }

    pub fn zero() -> Self {
        FreeVector {
            support: Vec::new(),
            coeffs: Vec::new(),
        }
    }

    pub fn dirac(x: usize) -> Self {
        FreeVector {
            support: alloc::vec![x],
            coeffs: alloc::vec![1.0],
        }
    }

    /// `δ_x − δ_y`.
    pub fn molecule(x: usize, y: usize) -> Self {
        if x == y {
            return Self::zero();
        }
        FreeVector {
            support: alloc::vec![x, y],
            coeffs: alloc::vec![1.0, -1.0],
        }
    }

    /// From one coefficient per point, dropping zeros.
    pub fn from_dense(coeffs: &[f64]) -> Self {
        let (support, coeffs) = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0.0)
            .map(|(i, &a)| (i, a))
            .unzip();
        FreeVector { support, coeffs }
    }

    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut out = alloc::vec![0.0; n];
        for (&p, &a) in self.support.iter().zip(&self.coeffs) {
            out[p] += a;
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn scaled(&self, t: f64) -> Self {
        if t == 0.0 {
            return Self::zero();
        }
        FreeVector {
            support: self.support.clone(),
            coeffs: self.coeffs.iter().map(|a| a * t).collect(),
        }
    }

    /// `self + other` on a space of `n` points.
    pub fn add(&self, other: &FreeVector, n: usize) -> Self {
        let mut d = self.to_dense(n);
        for (&p, &a) in other.support.iter().zip(&other.coeffs) {
            d[p] += a;
        }
        Self::from_dense(&d)
    }

    /// Image under a point map into a space of `m` points; coefficients
    /// landing on the same point add up.
    pub fn pushforward(&self, map: &[usize], m: usize) -> Self {
        let mut d = alloc::vec![0.0; m];
        for (&p, &a) in self.support.iter().zip(&self.coeffs) {
            d[map[p]] += a;
        }
        Self::from_dense(&d)
    }

    pub(crate) fn check_in(&self, n: usize) -> Result<()> {
        self.validate()?;
        match self.support.iter().find(|&&p| p >= n) {
            Some(&p) => Err(Error::IndexOutOfRange { index: p, len: n }),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_are_enforced() {
        assert!(FreeVector::new(alloc::vec![0, 0], alloc::vec![1.0, 2.0]).is_err());
        assert!(FreeVector::new(alloc::vec![0, 1], alloc::vec![1.0, 0.0]).is_err());
        assert!(FreeVector::new(alloc::vec![0], alloc::vec![1.0, 2.0]).is_err());
        assert!(FreeVector::new(alloc::vec![2, 0], alloc::vec![1.0, -2.0]).is_ok());
    }

    #[test]
    fn pushforward_merges_and_cancels() {
        let v = FreeVector::new(alloc::vec![0, 1, 2], alloc::vec![1.0, -1.0, 2.0]).unwrap();
        let w = v.pushforward(&[0, 0, 1], 2);
        assert_eq!(w.support, alloc::vec![1]);
        assert_eq!(w.coeffs, alloc::vec![2.0]);
    }

    #[test]
    fn json_shape() {
        let v = FreeVector::molecule(3, 1);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"support":[3,1],"coeffs":[1.0,-1.0]}"#);
    }
}
