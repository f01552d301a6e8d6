use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::tree_map::tree_map_values;
use super::{build_arc_map_on, glue_subset_components, translate_to, Audit, BuiltMap, GluePiece};
use crate::metric::{lipschitz_on, mcshane_extend};
use crate::tree::{components_minus, hull, require_one_bt, MetricTree};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafExtension {
    pub built: BuiltMap,
    /// Leaves and branch points, sorted.
    pub anchors: Vec<usize>,
    /// Lipschitz constant used to extend to the branch points.
    pub mcshane_lipschitz: f64,
}

struct Extended {
    values: Vec<f64>,
    audit: Audit,
    repairs: usize,
    anchors: Vec<usize>,
    lip: f64,
}

/// Extends values given on the leaves (in the order of
/// [`MetricTree::leaves`]) to the whole tree.
///
/// Branch points get McShane values; every arc between consecutive
/// anchors is then filled with an arc map. When the two end values are
/// farther apart than the arc diameter, the arc map is built for the
/// clamped gap and the rest is spread by the ramp
/// `d(p,x) / (d(p,x) + d(x,q))`.
pub fn extend_from_leaves(tree: &MetricTree, leaf_values: &[f64]) -> Result<LeafExtension> {
    require_one_bt(tree)?;
    let e = extend_values(tree, leaf_values)?;
    let mut built = BuiltMap::measured(tree.space(), e.values, e.audit);
    built.gap_repairs = e.repairs;
    Ok(LeafExtension {
        built,
        anchors: e.anchors,
        mcshane_lipschitz: e.lip,
    })
}

fn extend_values(tree: &MetricTree, leaf_values: &[f64]) -> Result<Extended> {
    let space = tree.space();
    let leaves = tree.leaves();
    if leaf_values.len() != leaves.len() {
        return Err(Error::DimensionMismatch {
            points: leaves.len(),
            rows: leaf_values.len(),
            bad_row: 0,
            cols: 1,
        });
    }
    let (l0, _) = lipschitz_on(space, &leaves, leaf_values);
    let lip = if l0 > 0.0 { l0 } else { 1.0 };
    if tree.len() == 1 {
        return Ok(Extended {
            values: leaf_values.to_vec(),
            audit: Audit::default(),
            repairs: 0,
            anchors: leaves,
            lip,
        });
    }
    let ext = mcshane_extend(space, &leaves, leaf_values, lip)?;
    let mut anchors = leaves;
    anchors.extend(tree.branch_points());
    anchors.sort_unstable();
    let f_anchor: Vec<f64> = anchors.iter().map(|&p| ext[p]).collect();
    let mut repairs = 0;
    let mut pieces = Vec::new();
    for comp in components_minus(tree, &anchors) {
        let (p, q) = match comp.boundary[..] {
            [p, q] => (p, q),
            _ => {
                return Err(Error::Structural(format!(
                    "degree-2 run {:?} does not join two anchors",
                    comp.vertices
                )))
            }
        };
        let path = tree.arc(p, q);
        let (a, b) = (ext[p], ext[q]);
        let diam = space.diam_of(&path);
        let along = if (b - a).abs() > diam {
            repairs += 1;
            let clamped = a + (b - a).signum() * diam;
            let mut v = build_arc_map_on(space, &path, a, clamped)?;
            for (k, &x) in path.iter().enumerate() {
                let (dp, dq) = (space.d(p, x), space.d(x, q));
                v[k] += (b - clamped) * dp / (dp + dq);
            }
            let last = v.len() - 1;
            v[last] = b;
            v
        } else {
            build_arc_map_on(space, &path, a, b)?
        };
        let mut vals = vec![0.0; comp.closure.len()];
        for (&x, f) in path.iter().zip(along) {
            vals[comp.closure.binary_search(&x).unwrap()] = f;
        }
        pieces.push(GluePiece {
            closure: comp.closure,
            values: vals,
        });
    }
    let g = glue_subset_components(tree, &anchors, &f_anchor, &pieces)?;
    Ok(Extended {
        values: g.map.values.clone(),
        audit: g.audit(),
        repairs,
        anchors,
        lip,
    })
}

/// Extends values on a set `M` of leaves to the whole tree: first to the
/// hull of `M`, then to every component hanging off the hull by a
/// translated tree map.
pub fn extend_from_leaf_subset(tree: &MetricTree, m: &[usize], values: &[f64]) -> Result<BuiltMap> {
    require_one_bt(tree)?;
    let (v, audit, repairs) = leaf_subset_values(tree, m, values)?;
    let mut built = BuiltMap::measured(tree.space(), v, audit);
    built.gap_repairs = repairs;
    Ok(built)
}

pub(crate) fn leaf_subset_values(
    tree: &MetricTree,
    m: &[usize],
    values: &[f64],
) -> Result<(Vec<f64>, Audit, usize)> {
    if m.is_empty() {
        return Err(Error::EmptySubset("leaf set M"));
    }
    if m.len() != values.len() {
        return Err(Error::DimensionMismatch {
            points: m.len(),
            rows: values.len(),
            bad_row: 0,
            cols: 1,
        });
    }
    tree.space().check_indices(m)?;
    if let Some(&x) = m.iter().find(|&&x| !tree.is_leaf(x)) {
        return Err(Error::Precondition(format!("vertex {x} of M is not a leaf")));
    }
    let value_at = |g: usize| values[m.iter().position(|&x| x == g).unwrap()];
    let s = hull(tree, m)?;
    let (st, verts) = tree.induced(&s)?;
    let leaf_vals: Vec<f64> = st.leaves().iter().map(|&l| value_at(verts[l])).collect();
    let e = extend_values(&st, &leaf_vals)?;
    let mut audit = e.audit;
    let mut pieces = Vec::new();
    for comp in components_minus(tree, &s) {
        let (sub, cv) = tree.induced(&comp.closure)?;
        let (mut sv, a) = tree_map_values(&sub)?;
        audit.merge(a);
        let p = comp.boundary[0];
        let target = e.values[s.binary_search(&p).unwrap()];
        translate_to(&mut sv, cv.binary_search(&p).unwrap(), target);
        pieces.push(GluePiece {
            closure: comp.closure,
            values: sv,
        });
    }
    let g = glue_subset_components(tree, &s, &e.values, &pieces)?;
    audit.merge(g.audit());
    let out = g.map.values;
    if let Some(&x) = m.iter().find(|&&x| out[x] != value_at(x)) {
        return Err(Error::Structural(format!(
            "extension moved the prescribed value at {x}"
        )));
    }
    Ok((out, audit, e.repairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixtures::{path, star};
    use crate::tree::{gen_tree, Profile};

    #[test]
    fn path_reduces_to_arc_map() {
        let t = path(5);
        let e = extend_from_leaves(&t, &[0.0, 4.0]).unwrap();
        assert_eq!(e.built.map.values, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.built.gap_repairs, 0);
    }

    #[test]
    fn tripod_center_gets_mcshane_value() {
        let t = star(3, 2);
        let leaves = t.leaves();
        let e = extend_from_leaves(&t, &[0.0, 0.0, 1.0]).unwrap();
        // Leaf data is 1/4-Lipschitz; the center is 2 from each leaf.
        assert_eq!(e.mcshane_lipschitz, 0.25);
        assert_eq!(e.built.map.values[0], 0.5);
        for (&l, v) in leaves.iter().zip([0.0, 0.0, 1.0]) {
            assert_eq!(e.built.map.values[l], v);
        }
        assert!(e.built.audit.passed(), "{:?}", e.built.audit);
    }

    #[test]
    fn steep_leaf_data_is_repaired() {
        // Leaf data is 10/6-Lipschitz, so the center sits 5 above the
        // first two leaves and 5 below the third, across legs of length 3.
        let t = star(3, 3);
        let e = extend_from_leaves(&t, &[0.0, 0.0, 10.0]).unwrap();
        assert_eq!(e.built.gap_repairs, 3);
        assert_eq!(e.built.map.values[9], 10.0);
    }

    #[test]
    fn all_leaves_match_leaf_extension() {
        let t = gen_tree(25, 4, Profile::Geodesic).unwrap();
        let leaves = t.leaves();
        let vals: Vec<f64> = leaves.iter().map(|&l| (l % 5) as f64).collect();
        let a = extend_from_leaves(&t, &vals).unwrap();
        let b = extend_from_leaf_subset(&t, &leaves, &vals).unwrap();
        assert_eq!(a.built.map.values, b.map.values);
    }

    #[test]
    fn two_comb_leaves_span_the_spine() {
        let t = gen_tree(30, 1, Profile::Comb).unwrap();
        let leaves = t.leaves();
        let m = [leaves[0], leaves[1]];
        let b = extend_from_leaf_subset(&t, &m, &[0.0, 1.0]).unwrap();
        assert_eq!((b.map.values[m[0]], b.map.values[m[1]]), (0.0, 1.0));
        assert!(b.report.q_hat.is_finite());
    }

    #[test]
    fn empty_subset_is_rejected() {
        assert!(extend_from_leaf_subset(&path(3), &[], &[]).is_err());
    }
}
