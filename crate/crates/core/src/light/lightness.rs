use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::metric::{lipschitz_on, FiniteMetricSpace};

/// Where the lightness constant is attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightWitness {
    /// The scale `r`.
    pub radius: f64,
    /// For real-valued maps, the value window `[lo, lo + r]`; empty for
    /// maps into a general space.
    pub window: Option<(f64, f64)>,
    /// Target points whose preimage was examined (general maps only).
    pub target_set: Vec<usize>,
    /// The `r`-component of the preimage, sorted.
    pub component: Vec<usize>,
    pub diameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightnessReport {
    /// `max |f(u) − f(v)| / d(u, v)`.
    pub l_hat: f64,
    pub l_witness: Option<(usize, usize)>,
    /// Least `Q` such that every `r`-component of the preimage of a set of
    /// diameter at most `r` has diameter at most `Q r`.
    pub q_hat: f64,
    pub q_witness: Option<LightWitness>,
}

/// Disjoint sets that keep their members and diameters.
struct Clusters<'a> {
    space: &'a FiniteMetricSpace,
    root: Vec<usize>,
    members: Vec<Vec<usize>>,
    diam: Vec<f64>,
}

impl<'a> Clusters<'a> {
    fn new(space: &'a FiniteMetricSpace) -> Self {
        let n = space.len();
        Clusters {
            space,
            root: (0..n).collect(),
            members: (0..n).map(|i| vec![i]).collect(),
            diam: vec![0.0; n],
        }
    }

    fn reset(&mut self, points: impl Iterator<Item = usize>) {
        for i in points {
            self.root[i] = i;
            self.members[i].clear();
            self.members[i].push(i);
            self.diam[i] = 0.0;
        }
    }

    /// Merges the clusters of `a` and `b`; returns the new root and
    /// diameter if they were apart.
    fn merge(&mut self, a: usize, b: usize) -> Option<(usize, f64)> {
        let (mut ra, mut rb) = (self.root[a], self.root[b]);
        if ra == rb {
            return None;
        }
        if self.members[ra].len() < self.members[rb].len() {
            core::mem::swap(&mut ra, &mut rb);
        }
        let mut d = f64::max(self.diam[ra], self.diam[rb]);
        for &x in &self.members[ra] {
            for &y in &self.members[rb] {
                d = d.max(self.space.d(x, y));
            }
        }
        let moved = core::mem::take(&mut self.members[rb]);
        for &y in &moved {
            self.root[y] = ra;
        }
        self.members[ra].extend(moved);
        self.diam[ra] = d;
        Some((ra, d))
    }

    fn component(&self, r: usize) -> Vec<usize> {
        let mut c = self.members[r].clone();
        c.sort_unstable();
        c
    }
}

fn sorted_pairs(space: &FiniteMetricSpace) -> Vec<(f64, usize, usize)> {
    let n = space.len();
    let mut e: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (space.d(i, j), i, j))
        .collect();
    e.sort_by(|a, b| a.0.total_cmp(&b.0));
    e
}

/// Exact Lipschitz and lightness constants of a real-valued map.
///
/// It suffices to take value windows `[v, v + r]` whose lower end is a value
/// of the map. For a fixed lower end, components only change when a point
/// enters the window (`r = f(x) − v`) or a pair becomes `r`-close
/// (`r = d(x, y)`); a component's ratio `diam / r` is largest at the radius
/// where it forms, so only merges need to be scored.
pub fn measure_lightness(space: &FiniteMetricSpace, values: &[f64]) -> LightnessReport {
    let n = space.len();
    assert_eq!(values.len(), n, "one value per point");
    let all: Vec<usize> = (0..n).collect();
    let (l_hat, l_witness) = lipschitz_on(space, &all, values);
    let mut rep = LightnessReport {
        l_hat,
        l_witness,
        q_hat: 0.0,
        q_witness: None,
    };
    if n < 2 {
        return rep;
    }
    let pairs = sorted_pairs(space);
    let mut by_value: Vec<usize> = all.clone();
    by_value.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut clusters = Clusters::new(space);
    let mut active = vec![false; n];
    let mut start = 0;
    while start < n {
        let lo = values[by_value[start]];
        let order = &by_value[start..];
        clusters.reset(order.iter().copied());
        active.iter_mut().for_each(|a| *a = false);
        let (mut next_act, mut next_pair) = (0, 0);
        loop {
            let ra = order.get(next_act).map(|&i| values[i] - lo);
            let rp = pairs.get(next_pair).map(|p| p.0);
            let (r, merged) = match (ra, rp) {
                (None, None) => break,
                (Some(a), p) if p.is_none_or(|p| a <= p) => {
                    let i = order[next_act];
                    next_act += 1;
                    active[i] = true;
                    let mut last = None;
                    for &j in order.iter().take(next_act - 1) {
                        if space.d(i, j) <= a {
                            last = clusters.merge(i, j).or(last);
                            if let Some((root, d)) = last {
                                score(&mut rep, &clusters, root, d, a, lo);
                            }
                        }
                    }
                    (a, None)
                }
                (_, Some(p)) => {
                    let (_, i, j) = pairs[next_pair];
                    next_pair += 1;
                    if active[i] && active[j] {
                        (p, clusters.merge(i, j))
                    } else {
                        (p, None)
                    }
                }
                (Some(_), None) => unreachable!(),
            };
            if let Some((root, d)) = merged {
                score(&mut rep, &clusters, root, d, r, lo);
            }
        }
        while start < n && values[by_value[start]] == lo {
            start += 1;
        }
    }
    rep
}

fn score(rep: &mut LightnessReport, clusters: &Clusters, root: usize, d: f64, r: f64, lo: f64) {
    let q = d / r;
    if q > rep.q_hat {
        rep.q_hat = q;
        rep.q_witness = Some(LightWitness {
            radius: r,
            window: Some((lo, lo + r)),
            target_set: Vec::new(),
            component: clusters.component(root),
            diameter: d,
        });
    }
}

/// Exact constants of a map `map: domain → target` between finite spaces.
///
/// Sets of diameter at most `r` in the target are dominated by maximal
/// cliques of the graph `{ρ <= r}`, so each critical radius is handled by
/// enumerating those cliques. Exponential in the worst case; meant for
/// small spaces.
///
/// # Panics
/// If the image has more than 64 points.
pub fn measure_lightness_into(
    domain: &FiniteMetricSpace,
    target: &FiniteMetricSpace,
    map: &[usize],
) -> LightnessReport {
    let n = domain.len();
    assert_eq!(map.len(), n, "one image per point");
    let (mut l_hat, mut l_witness) = (0.0, None);
    for i in 0..n {
        for j in i + 1..n {
            let q = target.d(map[i], map[j]) / domain.d(i, j);
            if q > l_hat {
                l_hat = q;
                l_witness = Some((i, j));
            }
        }
    }
    let mut rep = LightnessReport {
        l_hat,
        l_witness,
        q_hat: 0.0,
        q_witness: None,
    };
    if n < 2 {
        return rep;
    }
    let mut image: Vec<usize> = map.to_vec();
    image.sort_unstable();
    image.dedup();
    let mut radii = domain.distinct_distances();
    radii.extend(target.restrict(&image).unwrap().distinct_distances());
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let m = image.len();
    assert!(m <= 64, "image too large for clique enumeration");
    let mut clusters = Clusters::new(domain);
    for &r in &radii {
        let adj: Vec<u64> = (0..m)
            .map(|a| {
                (0..m)
                    .filter(|&b| b != a && target.d(image[a], image[b]) <= r)
                    .fold(0u64, |s, b| s | (1 << b))
            })
            .collect();
        let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let mut cliques = Vec::new();
        bron_kerbosch(&adj, 0, full, 0, &mut cliques);
        for clique in cliques {
            let pre: Vec<usize> = (0..n)
                .filter(|&x| {
                    let a = image.binary_search(&map[x]).unwrap();
                    clique & (1 << a) != 0
                })
                .collect();
            if pre.len() < 2 {
                continue;
            }
            clusters.reset(pre.iter().copied());
            for (k, &x) in pre.iter().enumerate() {
                for &y in &pre[k + 1..] {
                    if domain.d(x, y) <= r {
                        if let Some((root, d)) = clusters.merge(x, y) {
                            if d / r > rep.q_hat {
                                rep.q_hat = d / r;
                                rep.q_witness = Some(LightWitness {
                                    radius: r,
                                    window: None,
                                    target_set: (0..m)
                                        .filter(|&a| clique & (1 << a) != 0)
                                        .map(|a| image[a])
                                        .collect(),
                                    component: clusters.component(root),
                                    diameter: d,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    rep
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = (p | x).trailing_zeros() as usize;
    let mut cand = p & !adj[pivot];
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        let bit = 1u64 << v;
        bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], out);
        p &= !bit;
        x |= bit;
        cand &= !bit;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_on_three_points() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0, 2.0]);
        let r = measure_lightness(&s, &[0.0, 1.0, 2.0]);
        assert_eq!(r.l_hat, 1.0);
        assert_eq!(r.q_hat, 1.0);
    }

    #[test]
    fn constant_on_two_points() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0]);
        let r = measure_lightness(&s, &[5.0, 5.0]);
        assert_eq!(r.l_hat, 0.0);
        assert_eq!(r.q_hat, 1.0);
        assert_eq!(r.q_witness.unwrap().radius, 1.0);
    }

    #[test]
    fn two_clusters_collapsed_to_two_values() {
        // Cluster {0, 0.1, 0.3} sent to 0, cluster {10, 10.5} sent to 1.
        let s = FiniteMetricSpace::on_line(&[0.0, 0.1, 0.3, 10.0, 10.5]);
        let r = measure_lightness(&s, &[0.0, 0.0, 0.0, 1.0, 1.0]);
        // Largest cluster diameter over smallest radius that joins it.
        let expect = f64::max(0.3 / 0.2, 0.5 / 0.5);
        assert!((r.q_hat - expect).abs() < 1e-12);
    }

    #[test]
    fn general_form_agrees_on_the_line() {
        let s = FiniteMetricSpace::euclidean(&[
            alloc::vec![0.0, 0.0],
            alloc::vec![1.0, 0.3],
            alloc::vec![0.2, 1.4],
            alloc::vec![2.1, 0.9],
            alloc::vec![1.2, 2.2],
            alloc::vec![3.0, 0.1],
        ]);
        let values = [0.0, 0.7, 0.4, 0.4, 1.9, 1.1];
        let mut targets = values.to_vec();
        targets.sort_by(f64::total_cmp);
        targets.dedup();
        let line = FiniteMetricSpace::on_line(&targets);
        let map: Vec<usize> = values
            .iter()
            .map(|v| targets.iter().position(|t| t == v).unwrap())
            .collect();
        let a = measure_lightness(&s, &values);
        let b = measure_lightness_into(&s, &line, &map);
        assert!((a.q_hat - b.q_hat).abs() < 1e-12, "{} vs {}", a.q_hat, b.q_hat);
        assert!((a.l_hat - b.l_hat).abs() < 1e-12);
    }
}
