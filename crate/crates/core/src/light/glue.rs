use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{measure_lightness, Audit, BoundCheck, LightnessReport, ScalarMap};
use crate::metric::FiniteMetricSpace;
use crate::tree::{hull, MetricTree};
use crate::{Error, Result, TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPieceReport {
    pub q_a: f64,
    pub q_b: f64,
    pub q_hat: f64,
    /// `2Q(Q+2) + 1` with `Q = max(q_a, q_b)`.
    pub check: BoundCheck,
}

fn measure_on(space: &FiniteMetricSpace, set: &[usize], values: &[f64]) -> Result<LightnessReport> {
    let sub = space.restrict(set)?;
    let vals: Vec<f64> = set.iter().map(|&i| values[i]).collect();
    Ok(measure_lightness(&sub, &vals))
}

/// Lightness of a map on `A ∪ B` against the lightness of its restrictions.
pub fn glue_two_piece_check(
    space: &FiniteMetricSpace,
    values: &[f64],
    a: &[usize],
    b: &[usize],
) -> Result<TwoPieceReport> {
    space.check_indices(a)?;
    space.check_indices(b)?;
    let mut covered = vec![false; space.len()];
    for &i in a.iter().chain(b) {
        covered[i] = true;
    }
    if let Some(i) = covered.iter().position(|c| !c) {
        return Err(Error::Precondition(format!("point {i} lies in neither piece")));
    }
    let q_a = measure_on(space, a, values)?.q_hat;
    let q_b = measure_on(space, b, values)?.q_hat;
    let q_hat = measure_lightness(space, values).q_hat;
    let q = q_a.max(q_b);
    Ok(TwoPieceReport {
        q_a,
        q_b,
        q_hat,
        check: BoundCheck::new("two_piece", q_hat, 2.0 * q * (q + 2.0) + 1.0),
    })
}

/// A map on the closure of one component of `T ∖ X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluePiece {
    /// Tree vertices, sorted.
    pub closure: Vec<usize>,
    /// Values aligned with `closure`.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetGlue {
    pub map: ScalarMap,
    pub report: LightnessReport,
    /// Largest measured constants over `X` and the pieces.
    pub l0: f64,
    pub q0: f64,
    pub lipschitz: BoundCheck,
    /// `Q̂ <= 6 L Q0²` with `L = 2 L0`.
    pub lightness: BoundCheck,
    pub retract_violations: usize,
}

impl SubsetGlue {
    pub fn audit(&self) -> Audit {
        let mut a = Audit::default();
        a.record(self.lipschitz.clone());
        a.record(self.lightness.clone());
        a.retract_violations = self.retract_violations;
        a
    }
}

/// Counts vertices of the hull of `component` that are farther than `r`
/// from it. In a 1-bounded-turning tree an `r`-connected set is
/// `r`-dense in its hull, so the count should be zero.
pub fn retract_audit(tree: &MetricTree, component: &[usize], r: f64) -> usize {
    if component.len() < 2 {
        return 0;
    }
    let h = match hull(tree, component) {
        Ok(h) => h,
        Err(_) => return 0,
    };
    h.iter()
        .filter(|&&z| tree.space().dist_to_set(z, component) > r + TOL)
        .count()
}

/// Glues `f_x` on `X` with maps on the closures of the components of
/// `T ∖ X` and checks the result against the piece constants.
pub fn glue_subset_components(
    tree: &MetricTree,
    x: &[usize],
    f_x: &[f64],
    pieces: &[GluePiece],
) -> Result<SubsetGlue> {
    let n = tree.len();
    tree.space().check_indices(x)?;
    if x.is_empty() {
        return Err(Error::EmptySubset("glue base X"));
    }
    if f_x.len() != x.len() {
        return Err(Error::DimensionMismatch {
            points: x.len(),
            rows: f_x.len(),
            bad_row: 0,
            cols: 1,
        });
    }
    let mut values = vec![f64::NAN; n];
    for (&v, &f) in x.iter().zip(f_x) {
        values[v] = f;
    }
    let (mut l0, mut q0) = {
        let r = measure_on(tree.space(), x, &values)?;
        (r.l_hat, r.q_hat)
    };
    for p in pieces {
        tree.space().check_indices(&p.closure)?;
        for (&v, &f) in p.closure.iter().zip(&p.values) {
            if values[v].is_nan() {
                values[v] = f;
            } else if (values[v] - f).abs() > TOL {
                return Err(Error::BoundaryMismatch {
                    vertex: v,
                    left: values[v],
                    right: f,
                });
            }
        }
        let r = measure_on(tree.space(), &p.closure, &p.values_by_vertex(n))?;
        l0 = l0.max(r.l_hat);
        q0 = q0.max(r.q_hat);
    }
    if let Some(v) = values.iter().position(|f| f.is_nan()) {
        return Err(Error::Precondition(format!("vertex {v} is in no piece")));
    }
    let report = measure_lightness(tree.space(), &values);
    let retract_violations = report
        .q_witness
        .as_ref()
        .map_or(0, |w| retract_audit(tree, &w.component, w.radius));
    let l = 2.0 * l0;
    Ok(SubsetGlue {
        lipschitz: BoundCheck::new("subset_components_lipschitz", report.l_hat, l),
        lightness: BoundCheck::new("subset_components_lightness", report.q_hat, 6.0 * l * q0 * q0),
        map: ScalarMap::new(values),
        report,
        l0,
        q0,
        retract_violations,
    })
}

impl GluePiece {
    fn values_by_vertex(&self, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        for (&p, &f) in self.closure.iter().zip(&self.values) {
            v[p] = f;
        }
        v
    }
}
