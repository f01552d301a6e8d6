//! Lipschitz light maps: gluing bounds, builders and exact measurement.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use qctree::light::{
    cusp, extend_from_leaf_subset, extend_from_leaves, glue_two_piece_check, measure_lightness,
    quotient_map_lightness, quotient_tree_map, sum_map, tree_map, union_map, wreath_map, Audit,
    UnionTree,
};
use qctree::metric::uniform_disconnectedness_constant;
use qctree::{FiniteMetricSpace, MetricTree};

use crate::config::{Tolerances, TrialParams};
use crate::gen::{self, Points};
use crate::oracle;
use crate::suite::{Lemma, Verdict};

fn audit_into(v: &mut Verdict, audit: &Audit) {
    v.exact_at_most("proved_bound_failures", audit.proved_failures().count() as f64, 0.0);
    v.exact_at_most("retract_violations", audit.retract_violations as f64, 0.0);
    let conjectural = audit.failures.len() - audit.proved_failures().count();
    v.observe("conjectural_bound_failures", conjectural as f64);
    if let Some(t) = &audit.tightest {
        v.observe("tightest_bound_ratio", t.measured / t.bound);
    }
    for f in audit.proved_failures() {
        v.failures
            .push(format!("{}: measured {} exceeds bound {}", f.name, f.measured, f.bound));
    }
}

fn total(v: &mut Verdict, values: &[f64], n: usize) {
    v.require(values.len() == n, || format!("{} values for {n} points", values.len()));
    v.require(values.iter().all(|x| x.is_finite()), || "non-finite value".to_string());
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DisconnectedInstance {
    pub points: Points,
    pub y: Vec<usize>,
    pub alpha: f64,
}

pub struct QuotientLight;

impl Lemma for QuotientLight {
    const TAG: &'static str = "quotientlight";
    const SUMMARY: &'static str =
        "X -> X/Y is (9/alpha + 8)-light for alpha-uniformly disconnected Y, and conversely";
    const TRIALS: usize = 100;
    const MAX_N: usize = 20;
    type Instance = DisconnectedInstance;

    /// `Y` is grown greedily from a random order of the points, keeping
    /// each point that leaves it `alpha`-uniformly disconnected.
    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<DisconnectedInstance> {
        let alpha = [0.25, 0.5][p.trial % 2];
        let n = gen::size(rng, p, 4);
        let points = gen::points(rng, n);
        let s = gen::space(&points);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let target = rng.gen_range(2..=n / 2 + 1);
        let mut y = vec![order[0]];
        for &c in &order[1..] {
            if y.len() >= target {
                break;
            }
            let mut t = y.clone();
            t.push(c);
            if uniform_disconnectedness_constant(&s, &t)?.alpha >= alpha {
                y = t;
            }
        }
        y.sort_unstable();
        Ok(DisconnectedInstance { points, y, alpha })
    }

    fn check(inst: &DisconnectedInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let s = gen::space(&inst.points);
        let r = quotient_map_lightness(&s, &inst.y)?;
        let mut v = Verdict::default();
        if inst.y.len() >= 2 {
            v.at_least("alpha_star", r.alpha_star, inst.alpha, tol);
        }
        v.at_most("q_hat", r.report.q_hat, 9.0 / inst.alpha + 8.0, tol);
        v.at_most("q_hat_at_alpha_star", r.report.q_hat, r.forward.bound, tol);
        v.require(r.converse_chain.is_none(), || {
            format!("relative {:?}-chain found: {:?}", r.beta, r.converse_chain)
        });
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoPieceInstance {
    pub points: Points,
    pub values: Vec<f64>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

pub struct TwoPiece;

impl Lemma for TwoPiece {
    const TAG: &'static str = "twopiece";
    const SUMMARY: &'static str = "a map light on A and on B is (2Q(Q+2)+1)-light on A u B";
    const TRIALS: usize = 100;
    const MAX_N: usize = 24;
    type Instance = TwoPieceInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<TwoPieceInstance> {
        let n = gen::size(rng, p, 2);
        let points = gen::points(rng, n);
        let values = gen::values(rng, &points);
        let a = gen::subset(rng, n, 1, n);
        let mut b: Vec<usize> = (0..n).filter(|i| a.binary_search(i).is_err()).collect();
        let shared = rng.gen_range(0..=a.len().min(3));
        b.extend(a.choose_multiple(rng, shared));
        b.sort_unstable();
        b.dedup();
        Ok(TwoPieceInstance { points, values, a, b })
    }

    fn check(inst: &TwoPieceInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let s = gen::space(&inst.points);
        let r = glue_two_piece_check(&s, &inst.values, &inst.a, &inst.b)?;
        let mut v = Verdict::default();
        v.at_most("q_hat", r.q_hat, r.check.bound, tol);
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeafDataInstance {
    pub tree: MetricTree,
    pub leaves: Vec<usize>,
    pub values: Vec<f64>,
}

fn leaf_values(rng: &mut ChaCha8Rng, tree: &MetricTree, k: usize) -> Vec<f64> {
    let scale = tree.space().diameter();
    (0..k).map(|_| rng.gen_range(0.0..=scale)).collect()
}

pub struct SubsetComponents;

impl Lemma for SubsetComponents {
    const TAG: &'static str = "subsetcomponents";
    const SUMMARY: &'static str =
        "gluing maps on X and on component closures gives L <= 2 L0 and Q <= 6 L Q0^2";
    const TRIALS: usize = 100;
    const MAX_N: usize = 60;
    type Instance = LeafDataInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<LeafDataInstance> {
        let tree = gen::tree(rng, p, 4)?;
        let l = tree.leaves();
        let leaves = gen::subset_of(rng, &l, 1, l.len());
        let values = leaf_values(rng, &tree, leaves.len());
        Ok(LeafDataInstance { tree, leaves, values })
    }

    fn check(inst: &LeafDataInstance, _tol: &Tolerances) -> qctree::Result<Verdict> {
        let built = extend_from_leaf_subset(&inst.tree, &inst.leaves, &inst.values)?;
        let mut v = Verdict::default();
        total(&mut v, &built.map.values, inst.tree.len());
        let subset_failures = built
            .audit
            .failures
            .iter()
            .filter(|c| c.name.starts_with("subset_components"))
            .count();
        v.exact_at_most("subset_components_failures", subset_failures as f64, 0.0);
        audit_into(&mut v, &built.audit);
        for (&x, &f) in inst.leaves.iter().zip(&inst.values) {
            v.require(built.map.values[x] == f, || format!("value at leaf {x} moved"));
        }
        v.observe("q_hat", built.report.q_hat);
        v.observe("gap_repairs", built.gap_repairs as f64);
        Ok(v)
    }
}

pub struct LeafExt;

impl Lemma for LeafExt {
    const TAG: &'static str = "leafext";
    const SUMMARY: &'static str = "leaf data extends to a light map with the prescribed leaf values";
    const TRIALS: usize = 50;
    const MAX_N: usize = 60;
    type Instance = LeafDataInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<LeafDataInstance> {
        let tree = gen::tree(rng, p, 3)?;
        let leaves = tree.leaves();
        let values = leaf_values(rng, &tree, leaves.len());
        Ok(LeafDataInstance { tree, leaves, values })
    }

    fn check(inst: &LeafDataInstance, _tol: &Tolerances) -> qctree::Result<Verdict> {
        let e = extend_from_leaves(&inst.tree, &inst.values)?;
        let mut v = Verdict::default();
        total(&mut v, &e.built.map.values, inst.tree.len());
        audit_into(&mut v, &e.built.audit);
        for (&x, &f) in inst.leaves.iter().zip(&inst.values) {
            v.require(e.built.map.values[x] == f, || format!("value at leaf {x} moved"));
        }
        v.observe("q_hat", e.built.report.q_hat);
        v.observe("gap_repairs", e.built.gap_repairs as f64);
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WreathInstance {
    pub tree: MetricTree,
    pub a: usize,
    pub b: usize,
}

pub struct Wreath;

impl Lemma for Wreath {
    const TAG: &'static str = "wreath";
    const SUMMARY: &'static str = "the folded tree map on T/{a,b} is (2 + 2Q')-light";
    const TRIALS: usize = 100;
    const MAX_N: usize = 60;
    type Instance = WreathInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<WreathInstance> {
        let tree = gen::tree(rng, p, 3)?;
        let pair: Vec<usize> = tree.leaves().choose_multiple(rng, 2).copied().collect();
        Ok(WreathInstance {
            tree,
            a: pair[0],
            b: pair[1],
        })
    }

    fn check(inst: &WreathInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let w = wreath_map(&inst.tree, inst.a, inst.b)?;
        let mut v = Verdict::default();
        v.at_most("q_hat", w.built.report.q_hat, 2.0 + 2.0 * w.folded.q_hat, tol);
        v.at_most("folded_l_hat", w.folded.l_hat, w.unfolded.l_hat, tol);
        audit_into(&mut v, &w.built.audit);
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SumInstance {
    /// Each piece's basepoint is its first point.
    pub pieces: Vec<Points>,
    pub maps: Vec<Vec<f64>>,
}

pub struct SumLight;

impl Lemma for SumLight {
    const TAG: &'static str = "sumlight";
    const SUMMARY: &'static str = "maps vanishing at the basepoints combine to a (2 + 2 max Q)-light map on the sum";
    const TRIALS: usize = 50;
    const MAX_N: usize = 30;
    type Instance = SumInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<SumInstance> {
        let budget = gen::size(rng, p, 4);
        let k = rng.gen_range(1..=(budget / 2).clamp(1, 10));
        let mut pieces = Vec::with_capacity(k);
        let mut maps = Vec::with_capacity(k);
        for _ in 0..k {
            let m = rng.gen_range(2..=(budget / k).max(2));
            let pts = gen::points(rng, m);
            let vals = gen::values(rng, &pts);
            maps.push(vals.iter().map(|x| x - vals[0]).collect());
            pieces.push(pts);
        }
        Ok(SumInstance { pieces, maps })
    }

    fn check(inst: &SumInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let spaces = inst
            .pieces
            .iter()
            .map(|p| gen::space(p).with_basepoint(0))
            .collect::<qctree::Result<Vec<_>>>()?;
        let sm = sum_map(&spaces, &inst.maps)?;
        let mut v = Verdict::default();
        v.at_most("q_hat", sm.check.measured, sm.check.bound, tol);
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapInstance {
    pub points: Points,
    pub values: Vec<f64>,
}

pub struct LipLightDef;

impl Lemma for LipLightDef {
    const TAG: &'static str = "liplightdef";
    const SUMMARY: &'static str = "measured L and Q equal the brute-force constants";
    const TRIALS: usize = 100;
    const MAX_N: usize = 12;
    type Instance = MapInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<MapInstance> {
        let n = gen::size(rng, p, 2);
        let points = gen::points(rng, n);
        let values = if p.trial.is_multiple_of(2) {
            gen::values(rng, &points)
        } else {
            (0..n).map(|_| rng.gen_range(0..4) as f64 * 0.5).collect()
        };
        Ok(MapInstance { points, values })
    }

    fn check(inst: &MapInstance, _tol: &Tolerances) -> qctree::Result<Verdict> {
        let s = gen::space(&inst.points);
        let r = measure_lightness(&s, &inst.values);
        let q = oracle::lightness(&s, &inst.values);
        let top = 2.0 * s.diameter().max(1.0);
        let grid = oracle::grid_lightness(&s, &inst.values, top, 400);
        let mut v = Verdict::default();
        v.exact_at_most("q_hat_minus_oracle", (r.q_hat - q).abs(), 0.0);
        v.exact_at_most("grid_excess", (grid - r.q_hat).max(0.0), 0.0);
        v.exact_at_most(
            "l_hat_minus_oracle",
            (r.l_hat - oracle::lipschitz(&s, &inst.values)).abs(),
            0.0,
        );
        Ok(v)
    }
}

pub struct TreeMap;

impl Lemma for TreeMap {
    const TAG: &'static str = "treemap";
    const SUMMARY: &'static str = "tree maps are total, exact at the arc ends, light, and audited";
    const TRIALS: usize = 30;
    const MAX_N: usize = 150;
    type Instance = crate::lemmas::metric::TreeInstance;

    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<Self::Instance> {
        Ok(crate::lemmas::metric::TreeInstance {
            tree: gen::tree(rng, p, 2)?,
        })
    }

    fn check(inst: &Self::Instance, _tol: &Tolerances) -> qctree::Result<Verdict> {
        let t = &inst.tree;
        let built = tree_map(t)?;
        let mut v = Verdict::default();
        let f = &built.map.values;
        total(&mut v, f, t.len());
        let leaves = t.leaves();
        let (mut u, mut w, mut best) = (leaves[0], leaves[1], -1.0);
        for (i, &a) in leaves.iter().enumerate() {
            for &b in &leaves[i + 1..] {
                if t.d(a, b) > best {
                    (u, w, best) = (a, b, t.d(a, b));
                }
            }
        }
        v.require(f[u] == 0.0 && f[w] == best, || {
            format!("arc ends {u}, {w} carry {} and {}, not 0 and {best}", f[u], f[w])
        });
        audit_into(&mut v, &built.audit);
        v.require(built.report.q_hat.is_finite(), || "q_hat is infinite".to_string());
        v.observe("q_hat", built.report.q_hat);
        v.observe("l_hat", built.report.l_hat);
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnionInstance {
    pub points: Points,
    pub trees: Vec<UnionTree>,
}

pub struct UnionMap;

impl UnionMap {
    /// Segments through a common center, sampled on both sides, plus
    /// sometimes a far segment sharing nothing.
    fn segments(p: &TrialParams, rng: &mut ChaCha8Rng) -> UnionInstance {
        let budget = gen::size(rng, p, 8);
        let k = rng.gen_range(2..=4usize);
        let far = rng.gen_bool(0.3);
        let lines = k + far as usize;
        let per_side = ((budget - 1) / (2 * lines)).max(1);
        let mut points: Points = vec![vec![rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)]];
        let mut trees = Vec::with_capacity(lines);
        for l in 0..lines {
            let theta: f64 = std::f64::consts::PI * (l as f64 + rng.gen_range(0.1..0.9)) / lines as f64;
            let dir = [theta.cos(), theta.sin()];
            let (origin, shared) = if l == k {
                (vec![points[0][0] + 100.0, points[0][1]], false)
            } else {
                (points[0].clone(), true)
            };
            let mut ts: Vec<f64> = Vec::new();
            for sign in [-1.0, 1.0] {
                let mut t = 0.0;
                for _ in 0..rng.gen_range(1..=per_side) {
                    t += rng.gen_range(0.2..1.0);
                    ts.push(sign * t);
                }
            }
            ts.push(0.0);
            ts.sort_by(f64::total_cmp);
            let vertices: Vec<usize> = ts
                .iter()
                .map(|&t| {
                    if t == 0.0 && shared {
                        0
                    } else {
                        points.push(vec![origin[0] + t * dir[0], origin[1] + t * dir[1]]);
                        points.len() - 1
                    }
                })
                .collect();
            let edges = vertices.windows(2).map(|w| (w[0], w[1])).collect();
            trees.push(UnionTree { vertices, edges });
        }
        UnionInstance { points, trees }
    }
}

fn cusp_points(space: &FiniteMetricSpace, per_curve: usize) -> Points {
    // Recover coordinates: the origin, then the flat curve, then the parabola.
    let mut pts = vec![vec![0.0, 0.0]];
    for i in 1..per_curve {
        pts.push(vec![i as f64 / (per_curve - 1) as f64, 0.0]);
    }
    for i in 1..=per_curve {
        let x = i as f64 / per_curve as f64;
        pts.push(vec![x, x * x]);
    }
    debug_assert_eq!(pts.len(), space.len());
    pts
}

impl Lemma for UnionMap {
    const TAG: &'static str = "unionmap";
    const SUMMARY: &'static str =
        "union maps are total, agree with the first tree map, and satisfy the two-piece bound at every stage";
    const TRIALS: usize = 30;
    const MAX_N: usize = 150;
    type Instance = UnionInstance;

    /// Trial 0 is the discretized cusp with 100 points per curve.
    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<UnionInstance> {
        if p.trial == 0 {
            let (space, trees) = cusp(100)?;
            return Ok(UnionInstance {
                points: cusp_points(&space, 100),
                trees,
            });
        }
        Ok(UnionMap::segments(p, rng))
    }

    fn check(inst: &UnionInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let s = gen::space(&inst.points);
        let u = union_map(&s, &inst.trees)?;
        let mut v = Verdict::default();
        let f = &u.built.map.values;
        total(&mut v, f, s.len());
        let t0 = &inst.trees[0];
        let mut verts = t0.vertices.clone();
        verts.sort_unstable();
        let local = |g: usize| verts.binary_search(&g).unwrap();
        let edges = t0.edges.iter().map(|&(a, b)| (local(a), local(b))).collect();
        let first = tree_map(&MetricTree::new(s.restrict(&verts)?, edges)?)?;
        v.require(
            verts.iter().zip(&first.map.values).all(|(&g, &x)| f[g] == x),
            || "union map differs from the first tree map on the first tree".to_string(),
        );
        for (k, st) in u.stages.iter().enumerate() {
            if let Some(tp) = &st.two_piece {
                v.at_most("two_piece_q_hat", tp.q_hat, tp.check.bound, tol);
                v.require(tp.check.holds, || format!("two-piece bound fails at stage {k}"));
            }
        }
        audit_into(&mut v, &u.built.audit);
        v.require(u.built.report.q_hat.is_finite(), || "q_hat is infinite".to_string());
        v.observe("q_hat", u.built.report.q_hat);
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollapseInstance {
    pub tree: MetricTree,
    pub m: Vec<usize>,
}

pub struct QuotientTreeMap;

impl Lemma for QuotientTreeMap {
    const TAG: &'static str = "quotienttreemap";
    const SUMMARY: &'static str =
        "quotient tree maps are total, vanish on [M], and satisfy every stage bound";
    const TRIALS: usize = 30;
    const MAX_N: usize = 150;
    type Instance = CollapseInstance;

    /// Even trials collapse a set of leaves, odd trials arbitrary vertices.
    fn generate(p: &TrialParams, rng: &mut ChaCha8Rng) -> qctree::Result<CollapseInstance> {
        let tree = gen::tree(rng, p, 3)?;
        let m = if p.trial.is_multiple_of(2) {
            let l = tree.leaves();
            gen::subset_of(rng, &l, 1, 6)
        } else {
            gen::subset(rng, tree.len(), 1, 6)
        };
        Ok(CollapseInstance { tree, m })
    }

    fn check(inst: &CollapseInstance, tol: &Tolerances) -> qctree::Result<Verdict> {
        let q = quotient_tree_map(&inst.tree, &inst.m)?;
        let mut v = Verdict::default();
        let f = &q.built.map.values;
        total(&mut v, f, q.quotient.len());
        v.require(f[0] == 0.0, || format!("value at [M] is {}", f[0]));
        for st in &q.pieces {
            if let Some(r) = &st.projection {
                v.at_most("projection_q_hat", r.q_hat, st.projection_bound, tol);
            }
        }
        audit_into(&mut v, &q.built.audit);
        v.require(q.built.report.q_hat.is_finite(), || "q_hat is infinite".to_string());
        v.observe("q_hat", q.built.report.q_hat);
        Ok(v)
    }
}
