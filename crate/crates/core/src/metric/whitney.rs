use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::FiniteMetricSpace;
use crate::{Error, Result, TOL};

/// An ε-Whitney net `N ⊂ B ∖ A`: distinct net points satisfy
/// `d(u,v) >= ε · max(d(u,A), d(v,A))`, and no further point of `B ∖ A`
/// can be added.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhitneyNet {
    pub net: Vec<usize>,
    pub epsilon: f64,
    pub target: Vec<usize>,
    pub source: Vec<usize>,
}

/// Outcome of [`WhitneyNet::check`]. Each list holds offending points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhitneyCheck {
    pub separation_violations: Vec<(usize, usize)>,
    pub maximality_violations: Vec<usize>,
    pub covering_violations: Vec<usize>,
    /// `ε / (1 − ε)`, infinite for ε = 1.
    pub epsilon_prime: f64,
    /// Largest `d(x, N) / d(x, A)` over `x ∈ B ∖ A`.
    pub worst_cover_ratio: f64,
}

impl WhitneyCheck {
    pub fn passed(&self) -> bool {
        self.separation_violations.is_empty()
            && self.maximality_violations.is_empty()
            && self.covering_violations.is_empty()
    }
}

pub fn epsilon_prime(eps: f64) -> f64 {
    if eps >= 1.0 {
        f64::INFINITY
    } else {
        eps / (1.0 - eps)
    }
}

fn separated(space: &FiniteMetricSpace, target: &[usize], eps: f64, u: usize, v: usize) -> bool {
    let m = f64::max(space.dist_to_set(u, target), space.dist_to_set(v, target));
    space.d(u, v) >= eps * m - TOL
}

/// Greedy ε-Whitney net. Candidates are taken from `order` if given (it
/// must list points of `source`), otherwise in `source` order; points of
/// `target` are skipped.
pub fn whitney_net(
    space: &FiniteMetricSpace,
    source: &[usize],
    target: &[usize],
    eps: f64,
    order: Option<&[usize]>,
) -> Result<WhitneyNet> {
    space.check_indices(source)?;
    space.check_indices(target)?;
    if target.is_empty() {
        return Err(Error::EmptySubset("target set A"));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: eps,
            range: "(0, 1]",
        });
    }
    let order = order.unwrap_or(source);
    if let Some(&p) = order.iter().find(|p| !source.contains(p)) {
        return Err(Error::NotSubset(p));
    }
    let mut net: Vec<usize> = Vec::new();
    for &x in order {
        if target.contains(&x) || net.contains(&x) {
            continue;
        }
        if net.iter().all(|&u| separated(space, target, eps, x, u)) {
            net.push(x);
        }
    }
    Ok(WhitneyNet {
        net,
        epsilon: eps,
        target: target.to_vec(),
        source: source.to_vec(),
    })
}

impl WhitneyNet {
    /// Re-verifies separation, maximality and the covering bound
    /// `d(x, N) <= ε′ · d(x, A)` by full passes.
    pub fn check(&self, space: &FiniteMetricSpace) -> WhitneyCheck {
        let (a, eps) = (&self.target, self.epsilon);
        let mut sep = Vec::new();
        for (i, &u) in self.net.iter().enumerate() {
            for &v in &self.net[i + 1..] {
                if !separated(space, a, eps, u, v) {
                    sep.push((u, v));
                }
            }
        }
        let rest = self
            .source
            .iter()
            .copied()
            .filter(|x| !a.contains(x));
        let maximality = rest
            .clone()
            .filter(|x| !self.net.contains(x))
            .filter(|&x| self.net.iter().all(|&u| separated(space, a, eps, x, u)))
            .collect();
        let ep = epsilon_prime(eps);
        let mut worst = 0.0f64;
        let mut cover = Vec::new();
        for x in rest {
            let dn = space.dist_to_set(x, &self.net);
            let da = space.dist_to_set(x, a);
            worst = worst.max(dn / da);
            if dn > ep * da + TOL {
                cover.push(x);
            }
        }
        WhitneyCheck {
            separation_violations: sep,
            maximality_violations: maximality,
            covering_violations: cover,
            epsilon_prime: ep,
            worst_cover_ratio: worst,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn geometric_sequence_is_its_own_net() {
        let mut xs: Vec<f64> = (0..=6).map(|k| libm::pow(2.0, -(k as f64))).collect();
        xs.push(0.0);
        let s = FiniteMetricSpace::on_line(&xs);
        let b: Vec<usize> = (0..7).collect();
        let w = whitney_net(&s, &b, &[7], 0.5, None).unwrap();
        assert_eq!(w.net, b);
        assert!(w.check(&s).passed());
    }

    #[test]
    fn close_pair_at_epsilon_one_keeps_one_point() {
        // A at the origin, both points at distance 2, one unit apart.
        let s = FiniteMetricSpace::euclidean(&[
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![libm::sqrt(4.0 - 0.25), 0.5],
        ]);
        let w = whitney_net(&s, &[1, 2], &[0], 1.0, None).unwrap();
        assert_eq!(w.net, vec![1]);
        assert!(w.check(&s).passed());
    }

    #[test]
    fn source_inside_target_gives_empty_net() {
        let s = FiniteMetricSpace::on_line(&[0.0, 1.0]);
        let w = whitney_net(&s, &[0], &[0, 1], 0.5, None).unwrap();
        assert!(w.net.is_empty());
        assert!(w.check(&s).passed());
    }
}
