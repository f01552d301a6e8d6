//! Lipschitz light maps to the real line.
//!
//! A map `f` is `L`-Lipschitz and `Q`-light when `|f(u) − f(v)| <= L d(u,v)`
//! and, for every `r > 0` and every set `E` of diameter at most `r`, the
//! `r`-components of `f⁻¹(E)` have diameter at most `Q r`. The measured
//! constants `L̂` and `Q̂` are the least such values for a finite input.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::metric::{lipschitz_on, FiniteMetricSpace};
use crate::{Error, Result, TOL};

mod arc_map;
mod extend;
mod glue;
mod lightness;
mod quotient_map;
mod tree_map;
mod union;
mod wreath;

pub use arc_map::{build_arc_map, build_arc_map_on};
pub use extend::{extend_from_leaf_subset, extend_from_leaves, LeafExtension};
pub use glue::{
    glue_subset_components, glue_two_piece_check, retract_audit, GluePiece, SubsetGlue,
    TwoPieceReport,
};
pub use lightness::{measure_lightness, measure_lightness_into, LightWitness, LightnessReport};
pub use quotient_map::{
    quotient_map_lightness, quotient_tree_map, QuotientMapReport, QuotientTreeMap,
};
pub use tree_map::tree_map;
pub use union::{cusp, union_map, UnionMap, UnionTree};
pub use wreath::{sum_map, wreath_map, SumMap, WreathMap};

/// A real value for every point of some domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarMap {
    /// Optional name of the domain the values belong to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_ref: Option<String>,
    pub values: Vec<f64>,
}

impl ScalarMap {
    pub fn new(values: Vec<f64>) -> Self {
        ScalarMap {
            domain_ref: None,
            values,
        }
    }

    pub fn with_domain_ref(mut self, name: impl Into<String>) -> Self {
        self.domain_ref = Some(name.into());
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Checks that there is one value per point and that a declared
    /// basepoint is sent to 0.
    pub fn check_domain(&self, space: &FiniteMetricSpace) -> Result<()> {
        if self.values.len() != space.len() {
            return Err(Error::DimensionMismatch {
                points: space.len(),
                rows: self.values.len(),
                bad_row: 0,
                cols: 1,
            });
        }
        if let Some(b) = space.basepoint() {
            if self.values[b].abs() > TOL {
                return Err(Error::NonzeroBasepoint {
                    piece: 0,
                    value: self.values[b],
                });
            }
        }
        Ok(())
    }

    pub fn measure(&self, space: &FiniteMetricSpace) -> LightnessReport {
        measure_lightness(space, &self.values)
    }

    /// `x ↦ c − |f(x) − c|`.
    pub fn fold(&self, c: f64) -> ScalarMap {
        ScalarMap {
            domain_ref: self.domain_ref.clone(),
            values: fold(&self.values, c),
        }
    }

    pub fn translate(&self, t: f64) -> ScalarMap {
        ScalarMap {
            domain_ref: self.domain_ref.clone(),
            values: self.values.iter().map(|v| v + t).collect(),
        }
    }

    pub fn restrict(&self, subset: &[usize]) -> ScalarMap {
        ScalarMap::new(subset.iter().map(|&i| self.values[i]).collect())
    }
}

/// Exact Lipschitz constant over all pairs.
pub fn measure_lipschitz(space: &FiniteMetricSpace, values: &[f64]) -> f64 {
    let all: Vec<usize> = (0..space.len()).collect();
    lipschitz_on(space, &all, values).0
}

/// `x ↦ c − |f(x) − c|`, a 1-Lipschitz post-composition.
pub fn fold(values: &[f64], c: f64) -> Vec<f64> {
    values.iter().map(|&v| c - (v - c).abs()).collect()
}

/// A measured quantity against the bound it should satisfy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub holds: bool,
    /// Set for bounds that are conjectured here rather than proved.
    #[serde(default)]
    pub conjectural: bool,
}

impl BoundCheck {
    pub fn new(name: &str, measured: f64, bound: f64) -> Self {
        BoundCheck {
            name: String::from(name),
            measured,
            bound,
            holds: measured <= bound + TOL * (1.0 + bound.abs()),
            conjectural: false,
        }
    }

    pub fn conjectural(mut self) -> Self {
        self.conjectural = true;
        self
    }

    fn slack_ratio(&self) -> f64 {
        if self.bound > 0.0 {
            self.measured / self.bound
        } else if self.measured > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }
}

/// Every bound checked while building a map, summarized.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Audit {
    pub checks: usize,
    pub failures: Vec<BoundCheck>,
    /// The check with the largest `measured / bound`.
    pub tightest: Option<BoundCheck>,
    /// Hull vertices of audited components that were farther than `r`
    /// from the component.
    pub retract_violations: usize,
}

impl Audit {
    pub fn record(&mut self, c: BoundCheck) {
        self.checks += 1;
        if !c.holds {
            self.failures.push(c.clone());
        }
        if self
            .tightest
            .as_ref()
            .is_none_or(|t| c.slack_ratio() > t.slack_ratio())
        {
            self.tightest = Some(c);
        }
    }

    pub fn merge(&mut self, other: Audit) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
        self.retract_violations += other.retract_violations;
        if let Some(t) = other.tightest {
            if self
                .tightest
                .as_ref()
                .is_none_or(|s| t.slack_ratio() > s.slack_ratio())
            {
                self.tightest = Some(t);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.retract_violations == 0
    }

    /// Failures of bounds that are proved, ignoring conjectural ones.
    pub fn proved_failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.failures.iter().filter(|c| !c.conjectural)
    }
}

/// A constructed map with its measured constants and the audit of every
/// intermediate bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuiltMap {
    pub map: ScalarMap,
    pub report: LightnessReport,
    pub audit: Audit,
    /// Arcs whose endpoint values were farther apart than the arc diameter.
    pub gap_repairs: usize,
}

impl BuiltMap {
    pub(crate) fn measured(space: &FiniteMetricSpace, values: Vec<f64>, audit: Audit) -> Self {
        BuiltMap {
            report: measure_lightness(space, &values),
            map: ScalarMap::new(values),
            audit,
            gap_repairs: 0,
        }
    }
}

/// Shift `values` so that `values[anchor] == target` exactly.
pub(crate) fn translate_to(values: &mut [f64], anchor: usize, target: f64) {
    let t = target - values[anchor];
    for v in values.iter_mut() {
        *v += t;
    }
    values[anchor] = target;
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn fold_equalizes_and_never_steepens() {
        let s = FiniteMetricSpace::on_line(&[0.0, 0.5, 1.0, 3.0]);
        let v = vec![0.0, 0.2, 1.0, 2.5];
        let f = fold(&v, 0.5);
        assert_eq!(f[0], f[2]);
        assert!(measure_lipschitz(&s, &f) <= measure_lipschitz(&s, &v) + TOL);
        for (a, b) in fold(&v, 10.0).iter().zip(&v) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn basepoint_value_is_checked() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0]).with_basepoint(1).unwrap();
        assert!(ScalarMap::new(vec![3.0, 0.0]).check_domain(&s).is_ok());
        assert!(ScalarMap::new(vec![0.0, 1.0]).check_domain(&s).is_err());
    }

    #[test]
    fn audit_tracks_tightest_and_failures() {
        let mut a = Audit::default();
        a.record(BoundCheck::new("x", 1.0, 4.0));
        a.record(BoundCheck::new("y", 3.0, 4.0));
        assert!(a.passed());
        assert_eq!(a.tightest.as_ref().unwrap().name, "y");
        a.record(BoundCheck::new("z", 5.0, 4.0).conjectural());
        assert!(!a.passed());
        assert_eq!(a.proved_failures().count(), 0);
    }
}
