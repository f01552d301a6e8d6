use alloc::vec;
use alloc::vec::Vec;

use super::{build_arc_map_on, glue_subset_components, translate_to, Audit, BuiltMap, GluePiece};
use crate::tree::{components_minus, require_one_bt, MetricTree};
use crate::Result;

/// A Lipschitz light map on a 1-bounded-turning tree.
///
/// A diameter-realizing pair of leaves spans an arc that is mapped
/// monotonically onto `[0, d(u, v)]`. Each component hanging off the arc is
/// mapped recursively and translated to agree at its attachment point.
pub fn tree_map(tree: &MetricTree) -> Result<BuiltMap> {
    require_one_bt(tree)?;
    let (values, audit) = tree_map_values(tree)?;
    Ok(BuiltMap::measured(tree.space(), values, audit))
}

pub(crate) fn tree_map_values(tree: &MetricTree) -> Result<(Vec<f64>, Audit)> {
    let n = tree.len();
    if n == 1 {
        return Ok((vec![0.0], Audit::default()));
    }
    let leaves = tree.leaves();
    let (mut u, mut v, mut best) = (leaves[0], leaves[1], -1.0);
    for (i, &a) in leaves.iter().enumerate() {
        for &b in &leaves[i + 1..] {
            if tree.d(a, b) > best {
                (u, v, best) = (a, b, tree.d(a, b));
            }
        }
    }
    let arc = tree.arc(u, v);
    let along = build_arc_map_on(tree.space(), &arc, 0.0, best)?;
    let mut base: Vec<(usize, f64)> = arc.iter().copied().zip(along).collect();
    base.sort_by_key(|p| p.0);
    let (x, fx): (Vec<usize>, Vec<f64>) = base.into_iter().unzip();
    let mut audit = Audit::default();
    let comps = components_minus(tree, &x);
    if comps.is_empty() {
        let mut values = vec![0.0; n];
        for (&p, &f) in x.iter().zip(&fx) {
            values[p] = f;
        }
        return Ok((values, audit));
    }
    let mut pieces = Vec::with_capacity(comps.len());
    for comp in comps {
        let (sub, verts) = tree.induced(&comp.closure)?;
        let (mut sv, a) = tree_map_values(&sub)?;
        audit.merge(a);
        let p = comp.boundary[0];
        let anchor = verts.binary_search(&p).unwrap();
        translate_to(&mut sv, anchor, fx[x.binary_search(&p).unwrap()]);
        pieces.push(GluePiece {
            closure: comp.closure,
            values: sv,
        });
    }
    let g = glue_subset_components(tree, &x, &fx, &pieces)?;
    audit.merge(g.audit());
    Ok((g.map.values, audit))
}
