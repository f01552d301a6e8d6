use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::FiniteMetricSpace;
use crate::TOL;

/// Largest space for which the cover search is exhaustive.
pub const EXACT_DOUBLING_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublingReport {
    /// Smallest count of half-radius balls that covers every ball, over all
    /// centers and all radii equal to a pairwise distance.
    pub value: usize,
    /// False when a greedy cover (an upper bound) was used.
    pub exact: bool,
    /// Center and radius of a ball needing `value` half-balls.
    pub witness: Option<(usize, f64)>,
}

/// Doubling constant with closed balls `B(x; r) = {y : d(x,y) <= r}` and
/// covering balls centered at points of the space.
pub fn doubling_constant(space: &FiniteMetricSpace) -> DoublingReport {
    let n = space.len();
    if n <= 1 {
        return DoublingReport {
            value: 1,
            exact: true,
            witness: if n == 1 { Some((0, 0.0)) } else { None },
        };
    }
    let exact = n <= EXACT_DOUBLING_LIMIT;
    let radii = space.distinct_distances();
    let ball = |c: usize, r: f64| -> Vec<usize> {
        (0..n).filter(|&y| space.d(c, y) <= r + TOL).collect()
    };
    let mut best = DoublingReport {
        value: 1,
        exact,
        witness: Some((0, radii[0])),
    };
    for x in 0..n {
        for &r in &radii {
            let target = ball(x, r);
            let halves: Vec<Vec<usize>> = (0..n)
                .map(|c| {
                    ball(c, r / 2.0)
                        .into_iter()
                        .filter(|y| target.contains(y))
                        .collect::<Vec<_>>()
                })
                .filter(|b: &Vec<usize>| !b.is_empty())
                .collect();
            let k = if exact {
                exact_cover(&target, &halves)
            } else {
                greedy_cover(&target, &halves)
            };
            if k > best.value {
                best.value = k;
                best.witness = Some((x, r));
            }
        }
    }
    best
}

fn greedy_cover(target: &[usize], sets: &[Vec<usize>]) -> usize {
    let mut uncovered: Vec<usize> = target.to_vec();
    let mut count = 0;
    while !uncovered.is_empty() {
        let pick = sets
            .iter()
            .max_by_key(|s| s.iter().filter(|y| uncovered.contains(y)).count())
            .expect("target points cover themselves");
        uncovered.retain(|y| !pick.contains(y));
        count += 1;
    }
    count
}

fn exact_cover(target: &[usize], sets: &[Vec<usize>]) -> usize {
    let pos = |y: usize| target.iter().position(|&t| t == y).unwrap();
    let masks: Vec<u32> = sets
        .iter()
        .map(|s| s.iter().fold(0u32, |m, &y| m | (1 << pos(y))))
        .collect();
    let full: u32 = if target.len() == 32 {
        u32::MAX
    } else {
        (1u32 << target.len()) - 1
    };
    let mut best = greedy_cover(target, sets);
    search(full, 0, 0, &masks, &mut best);
    best
}

fn search(full: u32, covered: u32, used: usize, masks: &[u32], best: &mut usize) {
    if covered == full {
        *best = (*best).min(used);
        return;
    }
    if used + 1 >= *best {
        return;
    }
    let first = (!covered & full).trailing_zeros();
    for &m in masks {
        if m & (1 << first) != 0 {
            search(full, covered | m, used + 1, masks, best);
        }
    }
}
