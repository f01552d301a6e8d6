use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::metric::FiniteMetricSpace;
use crate::{Error, Result};

/// Pointed sum of pointed spaces: disjoint union with all basepoints
/// identified to a single point `e` (index 0, the basepoint).
///
/// Within a piece distances are kept; across pieces `σ(a,b) = d_i(a,p_i) +
/// d_j(b,p_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumSpace {
    pub space: FiniteMetricSpace,
    /// For each sum point, its `(piece, local index)`; `None` for `e`.
    pub origin: Vec<Option<(usize, usize)>>,
    /// For each piece, local index to sum index (the basepoint maps to 0).
    pub piece_points: Vec<Vec<usize>>,
}

impl SumSpace {
    pub const GLUED: usize = 0;

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }
}

/// Builds the sum. Ids are `"e"` and `"{piece}:{local id}"`.
pub fn sum(pieces: &[FiniteMetricSpace]) -> Result<SumSpace> {
    let bases: Vec<usize> = pieces
        .iter()
        .map(|p| p.basepoint().ok_or(Error::MissingBasepoint))
        .collect::<Result<_>>()?;
    let mut origin = vec![None];
    let mut ids = vec![String::from("e")];
    let mut piece_points = Vec::with_capacity(pieces.len());
    for (i, p) in pieces.iter().enumerate() {
        let mut map = vec![SumSpace::GLUED; p.len()];
        for (k, slot) in map.iter_mut().enumerate() {
            if k != bases[i] {
                *slot = origin.len();
                origin.push(Some((i, k)));
                ids.push(format!("{i}:{}", p.id(k)));
            }
        }
        piece_points.push(map);
    }
    let to_base = |s: usize| -> f64 {
        match origin[s] {
            None => 0.0,
            Some((i, k)) => pieces[i].d(k, bases[i]),
        }
    };
    let m = origin.len();
    let mut rows = vec![vec![0.0; m]; m];
    for a in 0..m {
        for b in a + 1..m {
            let v = match (origin[a], origin[b]) {
                (Some((i, k)), Some((j, l))) if i == j => pieces[i].d(k, l),
                _ => to_base(a) + to_base(b),
            };
            rows[a][b] = v;
            rows[b][a] = v;
        }
    }
    let space = FiniteMetricSpace::new(ids, rows)?.with_basepoint(SumSpace::GLUED)?;
    Ok(SumSpace {
        space,
        origin,
        piece_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::validate_metric;

    #[test]
    fn one_piece_is_isometric() {
        let p = FiniteMetricSpace::on_line(&[0.0, 1.0, 3.0]).with_basepoint(1).unwrap();
        let s = sum(core::slice::from_ref(&p)).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(
                    s.space.d(s.piece_points[0][a], s.piece_points[0][b]),
                    p.d(a, b)
                );
            }
        }
    }

    #[test]
    fn two_segments_make_a_path() {
        let seg = FiniteMetricSpace::on_line(&[0.0, 1.0]).with_basepoint(0).unwrap();
        let s = sum(&[seg.clone(), seg]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.space.d(1, 2), 2.0);
        assert_eq!(s.space.id(2), "1:1");
        assert!(validate_metric(&s.space).is_valid());
    }

    #[test]
    fn unpointed_piece_is_rejected() {
        let p = FiniteMetricSpace::on_line(&[0.0, 1.0]);
        assert_eq!(sum(&[p]).unwrap_err(), Error::MissingBasepoint);
    }
}
