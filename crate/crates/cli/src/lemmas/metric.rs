//! Whitney nets, quotients, chain lifting and tree decompositions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use qctree::metric::{epsilon_prime, is_relative_chain, whitney_net};
use qctree::quotient::{
    branch_uniform_disconnect_check, chain_lift, coproduct_decompose, double_quotient_check,
    pre_coproduct_decompose, quotient, whitney_isometry_check, CheckStatus, PieceKind,
};
use qctree::MetricTree;

use crate::config::{Tolerances, TrialParams};
use crate::gen::{self, Points};
use crate::suite::{Lemma, Verdict};

const EPSILONS: [f64; 3] = [0.1, 0.25, 0.5];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetInstance {
    pub points: Points,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub epsilon: f64,
}

pub struct Whitney;

impl Lemma for Whitney {
    const TAG: &'static str = "whitney";
    const SUMMARY: &'static str = "every point of B \\ A has a net point within eps/(1-eps) d(x, A)";
    const TRIALS: usize = 200;
    const MAX_N: usize = 25;
    type Instance = NetInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<NetInstance> {
        let n = gen::size(rng, p, 3);
        let points = gen::points(rng, n);
        let a = gen::subset(rng, n, 1, n / 3 + 1);
        let b = if rng.gen_bool(0.5) {
            (0..n).collect()
        } else {
            gen::subset(rng, n, 1, n)
        };
        Ok(NetInstance {
            points,
            a,
            b,
            epsilon: EPSILONS[p.trial % EPSILONS.len()],
        })
    }

    fn check(inst: &NetInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let s = gen::space(&inst.points);
        let net = whitney_net(&s, &inst.b, &inst.a, inst.epsilon, None)?;
        let c = net.check(&s);
        let mut v = Verdict::default();
        v.at_most("cover_ratio", c.worst_cover_ratio, epsilon_prime(inst.epsilon), tol);
        v.exact_at_most("covering_violations", c.covering_violations.len() as f64, 0.0);
        v.exact_at_most("separation_violations", c.separation_violations.len() as f64, 0.0);
        v.exact_at_most("maximality_violations", c.maximality_violations.len() as f64, 0.0);
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NestedInstance {
    pub points: Points,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

pub struct DoubleQuotient;

impl Lemma for DoubleQuotient {
    const TAG: &'static str = "doublequotient";
    const SUMMARY: &'static str = "Z/Y is isometric to (Z/X)/(Y/X) for X in Y in Z";
    const TRIALS: usize = 100;
    const MAX_N: usize = 20;
    type Instance = NestedInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<NestedInstance> {
        let n = gen::size(rng, p, 3);
        let points = gen::points(rng, n);
        let y = gen::subset(rng, n, 1, n);
        let x = gen::subset_of(rng, &y, 1, y.len());
        Ok(NestedInstance { points, x, y })
    }

    fn check(inst: &NestedInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let s = gen::space(&inst.points);
        let r = double_quotient_check(&s, &inst.x, &inst.y)?;
        let mut v = Verdict::default();
        v.exact_at_most("max_deviation", r.max_deviation, tol.isometry);
        v.require(r.passed, || format!("quotients differ (witness {:?})", r.witness));
        Ok(v)
    }
}

pub struct WhitneyIso;

impl Lemma for WhitneyIso {
    const TAG: &'static str = "whitneyiso";
    const SUMMARY: &'static str = "Y/(Y n (X u N)) is isometric to (X u Y)/(X u N) for eps = 1/2";
    const TRIALS: usize = 100;
    const MAX_N: usize = 20;
    type Instance = NestedInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<NestedInstance> {
        let n = gen::size(rng, p, 3);
        let points = gen::points(rng, n);
        let x = gen::subset(rng, n, 1, n / 3 + 1);
        let y = gen::subset(rng, n, 1, n);
        Ok(NestedInstance { points, x, y })
    }

    fn check(inst: &NestedInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let s = gen::space(&inst.points);
        let net = whitney_net(&s, &inst.y, &inst.x, 0.5, None)?;
        let r = whitney_isometry_check(&s, &net)?;
        let mut v = Verdict::default();
        v.exact_at_most("max_deviation", r.max_deviation, tol.isometry);
        v.require(r.status == CheckStatus::Pass, || {
            format!("status {:?} (witness {:?})", r.status, r.witness)
        });
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainInstance {
    pub points: Points,
    pub b: Vec<usize>,
    pub e: Vec<usize>,
    pub chain: Vec<usize>,
    pub alpha: f64,
}

const ALPHAS: [f64; 3] = [0.125, 1.0 / 12.0, 0.0625];

fn euclid(p: &[f64], q: &[f64]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

pub struct ChainLift;

impl ChainLift {
    /// Samples the segment `p -> q` with consecutive gaps at most `step`,
    /// excluding `p`.
    fn sample(p: &[f64], q: &[f64], step: f64, out: &mut Points) {
        let k = (euclid(p, q) / step).ceil().max(1.0) as usize;
        for i in 1..=k {
            let t = i as f64 / k as f64;
            out.push(vec![p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
}

impl Lemma for ChainLift {
    const TAG: &'static str = "chainlift";
    const SUMMARY: &'static str =
        "a relative alpha-chain of [B u E] in X/E lifts to a relative 8 alpha-chain in B far from E";
    const TRIALS: usize = 200;
    const MAX_N: usize = 12;
    type Instance = ChainInstance;

    /// `E` is a small cluster at the origin. The chain runs from `x` to `y`
    /// in the plane, either straight or through a point of `E`, sampled
    /// finely enough to be a relative α-chain in `X / E`.
    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<ChainInstance> {
        let alpha = ALPHAS[p.trial % ALPHAS.len()];
        let k_e = rng.gen_range(1..=3);
        let mut points: Points = (0..k_e)
            .map(|_| vec![rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)])
            .collect();
        let e: Vec<usize> = (0..k_e).collect();
        let to_e = |q: &[f64], pts: &Points| e.iter().map(|&i| euclid(q, &pts[i])).fold(f64::INFINITY, f64::min);
        let polar = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
            let r = rng.gen_range(lo..hi);
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            vec![r * t.cos(), r * t.sin()]
        };
        let (x, y) = loop {
            let x = polar(rng, 2.0, 6.0);
            let y = polar(rng, 1.0, 6.0);
            if euclid(&x, &y) >= 1.0 {
                break (x, y);
            }
        };
        let rho = f64::min(euclid(&x, &y), to_e(&x, &points) + to_e(&y, &points));
        let step = 0.9 * alpha * rho;
        let through_e = rng.gen_bool(0.5);
        let start = points.len();
        points.push(x.clone());
        let mut path = Vec::new();
        let mut chain = vec![start];
        if through_e {
            let w = e[rng.gen_range(0..k_e)];
            let wp = points[w].clone();
            ChainLift::sample(&x, &wp, step, &mut path);
            path.pop();
            for q in path.drain(..) {
                chain.push(points.len());
                points.push(q);
            }
            chain.push(w);
            ChainLift::sample(&wp, &y, step, &mut path);
        } else {
            ChainLift::sample(&x, &y, step, &mut path);
        }
        for q in path {
            chain.push(points.len());
            points.push(q);
        }
        let extra = rng.gen_range(0..=p.max_n.min(6));
        for _ in 0..extra {
            points.push(polar(rng, 0.5, 8.0));
        }
        let b: Vec<usize> = (k_e..points.len()).collect();
        Ok(ChainInstance {
            points,
            b,
            e,
            chain,
            alpha,
        })
    }

    fn check(inst: &ChainInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let s = gen::space(&inst.points);
        let q = quotient(&s, &inst.e)?;
        let classes: Vec<usize> = inst.chain.iter().map(|&p| q.class_of[p]).collect();
        let mut v = Verdict::default();
        v.require(is_relative_chain(&q.space, &classes, inst.alpha), || {
            "constructed input is not a relative alpha-chain".to_string()
        });
        let r = chain_lift(&s, &inst.b, &inst.e, &inst.chain, inst.alpha)?;
        v.at_most("lifted_ratio", r.lifted_ratio, 8.0 * r.alpha, tol);
        v.observe("span_over_rho", r.span / r.rho_xy);
        v.at_least("start_to_e_over_span", r.start_to_e / r.span, 2.0, tol);
        v.require(r.far_from_e, || format!("d(w0, E) = {} is not above 2 span = {}", r.start_to_e, 2.0 * r.span));
        v.require(r.in_b, || "lifted chain leaves B".to_string());
        v.require(r.lifted.is_nondegenerate(), || "lifted chain is degenerate".to_string());
        v.require(r.lifted.is_valid(&s), || "lifted chain fails the relative chain validator".to_string());
        v.require(r.passed(), || format!("lift report rejected: {r:?}"));
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeInstance {
    pub tree: MetricTree,
}

pub struct Uniform;

impl Lemma for Uniform {
    const TAG: &'static str = "uniform";
    const SUMMARY: &'static str =
        "branch points with collapsed leaves are 1/(8 D^2)-uniformly disconnected in T/L";
    const TRIALS: usize = 50;
    const MAX_N: usize = 40;
    type Instance = TreeInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<TreeInstance> {
        Ok(TreeInstance {
            tree: gen::tree(rng, p, 4)?,
        })
    }

    fn check(inst: &TreeInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let r = branch_uniform_disconnect_check(&inst.tree)?;
        let mut v = Verdict::default();
        v.at_least("alpha_star", r.alpha_star, r.bound, tol);
        v.observe("doubling", r.doubling as f64);
        v.require(r.counterexample.is_none(), || {
            format!("relative chain at 1/(8 D^2) = {}: {:?}", r.bound, r.counterexample)
        });
        v.require(r.passed, || "uniform disconnectedness check failed".to_string());
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitInstance {
    pub tree: MetricTree,
    /// A set of leaves.
    pub leaves: Vec<usize>,
    /// An arbitrary set of vertices.
    pub vertices: Vec<usize>,
}

fn split_instance(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<SplitInstance> {
    let tree = gen::tree(rng, p, 4)?;
    let l = tree.leaves();
    let leaves = gen::subset_of(rng, &l, 1, l.len());
    let n = tree.len();
    let vertices = gen::subset(rng, n, 1, n / 2 + 1);
    Ok(SplitInstance {
        tree,
        leaves,
        vertices,
    })
}

pub struct PreCoproduct;

impl Lemma for PreCoproduct {
    const TAG: &'static str = "precoproduct";
    const SUMMARY: &'static str = "T/M and the sum of the pieces T_i/M_i satisfy sigma/2 <= rho <= sigma";
    const TRIALS: usize = 100;
    const MAX_N: usize = 40;
    type Instance = SplitInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<SplitInstance> {
        split_instance(p, rng)
    }

    fn check(inst: &SplitInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let mut v = Verdict::default();
        for m in [&inst.leaves, &inst.vertices] {
            let pc = pre_coproduct_decompose(&inst.tree, m)?;
            v.at_least("min_ratio", pc.min_ratio, 0.5, tol);
            v.at_most("max_ratio", pc.max_ratio, 1.0, tol);
            v.require(pc.passed, || format!("sandwich fails at {:?}", pc.worst_pair));
        }
        Ok(v)
    }
}

pub struct Coproduct;

impl Lemma for Coproduct {
    const TAG: &'static str = "coproduct";
    const SUMMARY: &'static str = "pieces of T \\ (B(S) u M) meet B u M in one point (TREE) or two (WREATH)";
    const TRIALS: usize = 100;
    const MAX_N: usize = 40;
    type Instance = SplitInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<SplitInstance> {
        split_instance(p, rng)
    }

    fn check(inst: &SplitInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let c = coproduct_decompose(&inst.tree, &inst.leaves)?;
        let mut v = Verdict::default();
        let mut errors = 0usize;
        for (piece, kind) in c.decomposition.pieces.iter().zip(&c.kinds) {
            let expected = match piece.boundary.len() {
                1 => Some(PieceKind::Tree),
                2 => Some(PieceKind::Wreath),
                _ => None,
            };
            if expected != Some(*kind) {
                errors += 1;
            }
        }
        v.exact_at_most("structural_errors", errors as f64, 0.0);
        v.at_least("min_ratio", c.decomposition.min_ratio, 0.5, tol);
        v.at_most("max_ratio", c.decomposition.max_ratio, 1.0, tol);
        Ok(v)
    }
}
