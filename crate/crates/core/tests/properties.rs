use proptest::prelude::*;
use qctree::light::{measure_lightness, tree_map};
use qctree::metric::{mcshane_extend, validate_metric, whitney_net};
use qctree::quotient::{double_quotient_check, quotient, sum};
use qctree::tree::{gen_tree, Profile};
use qctree::{FiniteMetricSpace, MetricTree};

fn plane_points(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 2), 2..max)
}

fn space_and_subset(max: usize) -> impl Strategy<Value = (FiniteMetricSpace, Vec<usize>)> {
    plane_points(max).prop_flat_map(|pts| {
        let n = pts.len();
        (
            Just(FiniteMetricSpace::euclidean(&pts)),
            prop::collection::vec(0..n, 1..n.max(2)),
        )
    })
}

fn profile() -> impl Strategy<Value = Profile> {
    prop_oneof![
        Just(Profile::Geodesic),
        (0.3f64..1.0).prop_map(|s| Profile::Snowflake { s }),
        Just(Profile::Comb),
        Just(Profile::VicsekStep),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quotients_are_metrics((space, e) in space_and_subset(14)) {
        let q = quotient(&space, &e).unwrap();
        prop_assert!(validate_metric(&q.space).is_valid());
        for x in 0..space.len() {
            for y in 0..space.len() {
                let rho = q.space.d(q.class_of[x], q.class_of[y]);
                prop_assert!(rho <= space.d(x, y) + 1e-12);
            }
        }
    }

    #[test]
    fn sums_are_metrics(pieces in prop::collection::vec(plane_points(6), 1..4)) {
        let spaces: Vec<FiniteMetricSpace> = pieces
            .iter()
            .map(|p| FiniteMetricSpace::euclidean(p).with_basepoint(0).unwrap())
            .collect();
        let s = sum(&spaces).unwrap();
        prop_assert!(validate_metric(&s.space).is_valid());
        for (p, map) in spaces.iter().zip(&s.piece_points) {
            for a in 0..p.len() {
                for b in 0..p.len() {
                    prop_assert_eq!(s.space.d(map[a], map[b]), p.d(a, b));
                }
            }
        }
    }

    #[test]
    fn double_quotient_is_isometric(
        (space, y) in space_and_subset(14),
        keep in prop::collection::vec(any::<bool>(), 14),
    ) {
        let mut x: Vec<usize> = y.iter().zip(&keep).filter(|(_, k)| **k).map(|(p, _)| *p).collect();
        if x.is_empty() {
            x.push(y[0]);
        }
        let r = double_quotient_check(&space, &x, &y).unwrap();
        prop_assert!(r.passed);
        prop_assert!(r.max_deviation < 1e-9);
    }

    #[test]
    fn whitney_nets_cover(
        (space, a) in space_and_subset(16),
        eps in prop::sample::select(vec![0.1, 0.25, 0.5]),
    ) {
        let b: Vec<usize> = (0..space.len()).collect();
        let net = whitney_net(&space, &b, &a, eps, None).unwrap();
        prop_assert!(net.check(&space).passed());
    }

    #[test]
    fn mcshane_extends_with_same_constant(
        (space, sub) in space_and_subset(14),
        vals in prop::collection::vec(-3.0f64..3.0, 14),
    ) {
        let mut sub = sub;
        sub.sort_unstable();
        sub.dedup();
        let values: Vec<f64> = sub.iter().map(|&i| vals[i]).collect();
        let lip = qctree::metric::lipschitz_on(&space, &sub, &values).0.max(1e-3);
        let f = mcshane_extend(&space, &sub, &values, lip).unwrap();
        for (k, &i) in sub.iter().enumerate() {
            prop_assert!((f[i] - values[k]).abs() < 1e-12);
        }
        let l = measure_lightness(&space, &f).l_hat;
        prop_assert!(l <= lip * (1.0 + 1e-9));
    }

    #[test]
    fn space_json_round_trip(pts in plane_points(10), b in 0usize..10) {
        let mut s = FiniteMetricSpace::euclidean(&pts);
        s.set_basepoint(b % pts.len()).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: FiniteMetricSpace = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn tree_round_trip_and_map(n in 2usize..40, seed in any::<u64>(), p in profile()) {
        let t = gen_tree(n, seed, p).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        let back: MetricTree = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &t);
        let built = tree_map(&t).unwrap();
        prop_assert!(built.audit.passed());
        prop_assert!(built.report.q_hat.is_finite());
    }
}
