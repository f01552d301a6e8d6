//! Free-space norms: duality gaps, identities and comparisons.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use qctree::freespace::{
    bilipschitz_norm_comparison, exact_quotient_duality, exact_sum_decomposition, free_norm,
    quotient_duality_check, sum_decomposition_check,
};
use qctree::quotient::{pre_coproduct_decompose, sum};
use qctree::{FiniteMetricSpace, FreeVector, MetricTree};

use crate::config::{Tolerances, TrialParams};
use crate::gen::{self, Points};
use crate::suite::{Lemma, Verdict};

fn pointed(points: &Points) -> qctree::Result<FiniteMetricSpace> {
    gen::space(points).with_basepoint(0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormInstance {
    /// The basepoint is the first point.
    pub points: Points,
    pub mu: FreeVector,
}

fn norm_instance(p: &TrialParams, rng: &mut ChaCha8Rng) -> NormInstance {
    let n = gen::size(rng, p, 2);
    let points = gen::points(rng, n);
    let mu = gen::measure(rng, n);
    NormInstance { points, mu }
}

pub struct FreeGap;

impl Lemma for FreeGap {
    const TAG: &'static str = "freegap";
    const SUMMARY: &'static str = "transport primal and Lipschitz dual agree";
    const TRIALS: usize = 500;
    const MAX_N: usize = 12;
    type Instance = NormInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<NormInstance> {
        Ok(norm_instance(p, rng))
    }

    fn check(inst: &NormInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let s = pointed(&inst.points)?;
        let r = free_norm(&s, &inst.mu)?;
        let mut v = Verdict::default();
        v.exact_at_most("gap", r.gap, tol.gap);
        let radial: f64 = inst
            .mu
            .support
            .iter()
            .zip(&inst.mu.coeffs)
            .map(|(&x, &a)| a * s.d(x, 0))
            .sum();
        v.at_least("norm_minus_radial", r.value, radial.abs(), tol);
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointsInstance {
    pub points: Points,
}

pub struct Isometry;

impl Lemma for Isometry {
    const TAG: &'static str = "isometry";
    const SUMMARY: &'static str = "x -> delta_x is an isometry into the free space";
    const TRIALS: usize = 50;
    const MAX_N: usize = 12;
    type Instance = PointsInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<PointsInstance> {
        let n = gen::size(rng, p, 2);
        Ok(PointsInstance {
            points: gen::points(rng, n),
        })
    }

    fn check(inst: &PointsInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let s = pointed(&inst.points)?;
        let mut worst = 0.0f64;
        for x in 0..s.len() {
            for y in 0..s.len() {
                if x == y {
                    continue;
                }
                let n = free_norm(&s, &FreeVector::molecule(x, y))?.value;
                worst = worst.max((n - s.d(x, y)).abs() / (1.0 + s.d(x, y)));
            }
        }
        let mut v = Verdict::default();
        v.exact_at_most("relative_deviation", worst, tol.isometry);
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SumNormInstance {
    /// Each piece's basepoint is its first point.
    pub pieces: Vec<Points>,
    /// A measure on the sum.
    pub mu: FreeVector,
}

fn pieces(inst: &SumNormInstance) -> qctree::Result<Vec<FiniteMetricSpace>> {
    inst.pieces.iter().map(pointed).collect()
}

fn sum_instance(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<SumNormInstance> {
    let budget = gen::size(rng, p, 3);
    let k = rng.gen_range(2..=4usize);
    let per = (budget / k).max(2);
    let pts: Vec<Points> = (0..k)
        .map(|_| {
            let m = rng.gen_range(2..=per);
            gen::points(rng, m)
        })
        .collect();
    let spaces = pts.iter().map(pointed).collect::<qctree::Result<Vec<_>>>()?;
    let n = sum(&spaces)?.len();
    Ok(SumNormInstance {
        pieces: pts,
        mu: gen::measure(rng, n),
    })
}

pub struct SumDecomp;

impl Lemma for SumDecomp {
    const TAG: &'static str = "sumdecomp";
    const SUMMARY: &'static str = "the norm on a pointed sum is the sum of the piece norms";
    const TRIALS: usize = 100;
    const MAX_N: usize = 12;
    type Instance = SumNormInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<SumNormInstance> {
        sum_instance(p, rng)
    }

    fn check(inst: &SumNormInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let r = sum_decomposition_check(&pieces(inst)?, &inst.mu)?;
        let mut v = Verdict::default();
        v.exact_at_most("gap", r.gap, tol.gap);
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualityInstance {
    /// The basepoint is the first point.
    pub points: Points,
    pub a: Vec<usize>,
    pub mu: FreeVector,
}

fn duality_instance(p: &TrialParams, rng: &mut ChaCha8Rng) -> DualityInstance {
    let NormInstance { points, mu } = norm_instance(p, rng);
    let n = points.len();
    let a = gen::subset(rng, n, 1, n / 2 + 1);
    DualityInstance { points, a, mu }
}

pub struct QuotientDuality;

impl Lemma for QuotientDuality {
    const TAG: &'static str = "quotientduality";
    const SUMMARY: &'static str = "the norm dual to Lip functions vanishing on A is the quotient norm";
    const TRIALS: usize = 100;
    const MAX_N: usize = 12;
    type Instance = DualityInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<DualityInstance> {
        Ok(duality_instance(p, rng))
    }

    fn check(inst: &DualityInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let r = quotient_duality_check(&pointed(&inst.points)?, &inst.a, &inst.mu)?;
        let mut v = Verdict::default();
        v.exact_at_most("gap", r.gap, tol.gap);
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "identity", rename_all = "snake_case")]
pub enum ExactInstance {
    Quotient(DualityInstance),
    Sum(SumNormInstance),
}

pub struct ExactNorm;

impl Lemma for ExactNorm {
    const TAG: &'static str = "exactnorm";
    const SUMMARY: &'static str = "rational arithmetic certifies the quotient and sum identities exactly";
    const TRIALS: usize = 20;
    const MAX_N: usize = 8;
    type Instance = ExactInstance;

    /// Even trials test quotient duality, odd trials the sum identity.
    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<ExactInstance> {
        Ok(if p.trial.is_multiple_of(2) {
            ExactInstance::Quotient(duality_instance(p, rng))
        } else {
            ExactInstance::Sum(sum_instance(p, rng)?)
        })
    }

    fn check(inst: &ExactInstance, _tol: &Tolerances) -> qctree::Result<Verdict> {
        let c = match inst {
            ExactInstance::Quotient(d) => exact_quotient_duality(&pointed(&d.points)?, &d.a, &d.mu)?,
            ExactInstance::Sum(s) => exact_sum_decomposition(&pieces(s)?, &s.mu)?,
        };
        let mut v = Verdict::default();
        v.require(c.equal(), || {
            format!(
                "left {} (certificate {}) differs from right {} (certificate {})",
                c.left.value, c.left.certificate, c.right.value, c.right.certificate
            )
        });
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollapsedNormInstance {
    pub tree: MetricTree,
    pub m: Vec<usize>,
    /// A measure on `T / M`.
    pub mu: FreeVector,
}

pub struct BiLipschitz;

impl Lemma for BiLipschitz {
    const TAG: &'static str = "bilipschitz";
    const SUMMARY: &'static str =
        "free norms on T/M and on the sum of its pieces differ by a factor in [1/2, 2]";
    const TRIALS: usize = 50;
    const MAX_N: usize = 20;
    type Instance = CollapsedNormInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<CollapsedNormInstance> {
        let tree = gen::tree(rng, p, 4)?;
        let m = gen::subset(rng, tree.len(), 1, tree.len() / 2 + 1);
        let k = tree.len() - m.len() + 1;
        let mu = gen::measure(rng, k);
        Ok(CollapsedNormInstance { tree, m, mu })
    }

    fn check(inst: &CollapsedNormInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let pc = pre_coproduct_decompose(&inst.tree, &inst.m)?;
        let r = bilipschitz_norm_comparison(
            &pc.quotient.space,
            &pc.sum.space,
            &pc.correspondence,
            &inst.mu,
            2.0,
        )?;
        let mut v = Verdict::default();
        v.at_least("norm_ratio_low", r.ratio, 0.5, tol);
        v.at_most("norm_ratio_high", r.ratio, 2.0, tol);
        v.observe("max_distance_ratio", r.max_distance_ratio);
        v.require(r.passed, || format!("norm ratio {} outside [1/2, 2]", r.ratio));
        Ok(v)
    }
}
