use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, TOL};

/// A finite metric space stored as a dense, row-major distance matrix.
///
/// Point identifiers are opaque labels carried through every derived
/// construction (restrictions, quotients, sums) for provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub struct FiniteMetricSpace {
    ids: Vec<String>,
    dist: Vec<f64>,
    basepoint: Option<usize>,
}

/// Wire form: `{"points":[ids],"dist":[[...]],"basepoint":i}`.
#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    points: Vec<String>,
    dist: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basepoint: Option<usize>,
}

impl TryFrom<SpaceRepr> for FiniteMetricSpace {
    type Error = Error;

    fn try_from(r: SpaceRepr) -> Result<Self> {
        let mut s = FiniteMetricSpace::new(r.points, r.dist)?;
        if let Some(b) = r.basepoint {
            s.set_basepoint(b)?;
        }
        Ok(s)
    }
}

impl From<FiniteMetricSpace> for SpaceRepr {
    fn from(s: FiniteMetricSpace) -> Self {
        let n = s.len();
        SpaceRepr {
            dist: (0..n).map(|i| s.dist[i * n..(i + 1) * n].to_vec()).collect(),
            points: s.ids,
            basepoint: s.basepoint,
        }
    }
}

/// Every way in which a matrix fails to be a metric.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub points: usize,
    /// Nonzero diagonal entries.
    pub diagonal: Vec<usize>,
    /// Pairs `i < j` with `d(i,j) != d(j,i)`.
    pub asymmetric: Vec<(usize, usize)>,
    /// Pairs `i < j` with `d(i,j) <= 0`, or a non-finite entry.
    pub nonpositive: Vec<(usize, usize)>,
    /// Triples `(i, j, k)` with `d(i,k) > d(i,j) + d(j,k)`.
    pub triangle: Vec<(usize, usize, usize)>,
    /// Total triangle violations; `triangle` keeps at most [`Self::WITNESS_CAP`].
    pub triangle_count: usize,
}

impl ValidationReport {
    pub const WITNESS_CAP: usize = 64;

    pub fn is_valid(&self) -> bool {
        self.diagonal.is_empty()
            && self.asymmetric.is_empty()
            && self.nonpositive.is_empty()
            && self.triangle_count == 0
    }
}

impl FiniteMetricSpace {
    /// Builds a space from labels and a square matrix. Only the shape is
    /// checked here; see [`validate_metric`] for the metric axioms.
    pub fn new(ids: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = ids.len();
        if dist.len() != n {
            return Err(Error::DimensionMismatch {
                points: n,
                rows: dist.len(),
                bad_row: dist.len().min(n),
                cols: dist.first().map_or(0, Vec::len),
            });
        }
        if let Some((row, r)) = dist.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::DimensionMismatch {
                points: n,
                rows: n,
                bad_row: row,
                cols: r.len(),
            });
        }
        Ok(FiniteMetricSpace {
            ids,
            dist: dist.into_iter().flatten().collect(),
            basepoint: None,
        })
    }

    /// Builds a space from a distance function evaluated on `i < j` and
    /// mirrored. Identifiers are the decimal indices.
    pub fn from_fn(n: usize, mut d: impl FnMut(usize, usize) -> f64) -> Self {
        let mut dist = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = d(i, j);
                dist[i * n + j] = v;
                dist[j * n + i] = v;
            }
        }
        FiniteMetricSpace {
            ids: (0..n).map(|i| i.to_string()).collect(),
            dist,
            basepoint: None,
        }
    }

    /// Euclidean distances between coordinate vectors of equal dimension.
    pub fn euclidean(points: &[Vec<f64>]) -> Self {
        Self::from_fn(points.len(), |i, j| euclid(&points[i], &points[j]))
    }

    /// Points on the real line.
    pub fn on_line(xs: &[f64]) -> Self {
        Self::from_fn(xs.len(), |i, j| (xs[i] - xs[j]).abs())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn set_ids(&mut self, ids: Vec<String>) -> Result<()> {
        if ids.len() != self.len() {
            return Err(Error::DimensionMismatch {
                points: self.len(),
                rows: ids.len(),
                bad_row: 0,
                cols: 0,
            });
        }
        self.ids = ids;
        Ok(())
    }

    pub fn basepoint(&self) -> Option<usize> {
        self.basepoint
    }

    pub fn set_basepoint(&mut self, b: usize) -> Result<()> {
        self.check_index(b)?;
        self.basepoint = Some(b);
        Ok(())
    }

    pub fn with_basepoint(mut self, b: usize) -> Result<Self> {
        self.set_basepoint(b)?;
        Ok(self)
    }

    pub fn clear_basepoint(&mut self) {
        self.basepoint = None;
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }

    pub fn check_indices(&self, set: &[usize]) -> Result<()> {
        set.iter().try_for_each(|&i| self.check_index(i))
    }

    /// `d(i, S) = min_{s in S} d(i, s)`; `+inf` for an empty set.
    pub fn dist_to_set(&self, i: usize, set: &[usize]) -> f64 {
        set.iter().map(|&s| self.d(i, s)).fold(f64::INFINITY, f64::min)
    }

    /// Diameter of a subset (0 for fewer than two points).
    pub fn diam_of(&self, set: &[usize]) -> f64 {
        let mut m = 0.0f64;
        for (a, &i) in set.iter().enumerate() {
            for &j in &set[a + 1..] {
                m = m.max(self.d(i, j));
            }
        }
        m
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Restriction to `subset`, in the given order. The basepoint survives
    /// when it belongs to the subset.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        self.check_indices(subset)?;
        let m = subset.len();
        let mut dist = alloc::vec![0.0; m * m];
        for (a, &i) in subset.iter().enumerate() {
            for (b, &j) in subset.iter().enumerate() {
                dist[a * m + b] = self.d(i, j);
            }
        }
        Ok(FiniteMetricSpace {
            ids: subset.iter().map(|&i| self.ids[i].clone()).collect(),
            dist,
            basepoint: self
                .basepoint
                .and_then(|b| subset.iter().position(|&i| i == b)),
        })
    }

    /// Same points, distances replaced by `g(i, j, d(i,j))`.
    pub fn map_distances(&self, mut g: impl FnMut(usize, usize, f64) -> f64) -> Self {
        let n = self.len();
        let mut out = self.clone();
        for i in 0..n {
            for j in i + 1..n {
                let v = g(i, j, self.d(i, j));
                out.dist[i * n + j] = v;
                out.dist[j * n + i] = v;
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map_distances(|_, _, d| d * factor)
    }

    /// The snowflake `d^s`, a metric for `s` in `(0, 1]`.
    pub fn snowflake(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "snowflake exponent",
                value: s,
                range: "(0, 1]",
            });
        }
        Ok(self.map_distances(|_, _, d| libm::pow(d, s)))
    }

    /// Distinct positive pairwise distances, ascending.
    pub fn distinct_distances(&self) -> Vec<f64> {
        let n = self.len();
        let mut v: Vec<f64> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.d(i, j))
            .filter(|&d| d > 0.0)
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Checks the metric axioms with absolute tolerance [`TOL`].
pub fn validate_metric(space: &FiniteMetricSpace) -> ValidationReport {
    let n = space.len();
    let mut rep = ValidationReport {
        points: n,
        ..Default::default()
    };
    for i in 0..n {
        if space.d(i, i) != 0.0 {
            rep.diagonal.push(i);
        }
        for j in i + 1..n {
            let (a, b) = (space.d(i, j), space.d(j, i));
            if !a.is_finite() || !b.is_finite() || a <= 0.0 || b <= 0.0 {
                rep.nonpositive.push((i, j));
            }
            if (a - b).abs() > TOL {
                rep.asymmetric.push((i, j));
            }
        }
    }
    for i in 0..n {
        for k in i + 1..n {
            let direct = space.d(i, k);
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                if direct > space.d(i, j) + space.d(j, k) + TOL {
                    rep.triangle_count += 1;
                    if rep.triangle.len() < ValidationReport::WITNESS_CAP {
                        rep.triangle.push((i, j, k));
                    }
                }
            }
        }
    }
    rep
}

impl FiniteMetricSpace {
    /// Fails with [`Error::Precondition`] describing the first violation.
    pub fn require_metric(&self) -> Result<()> {
        let rep = validate_metric(self);
        if rep.is_valid() {
            return Ok(());
        }
        let what = if let Some(i) = rep.diagonal.first() {
            format!("d({i},{i}) != 0")
        } else if let Some((i, j)) = rep.asymmetric.first() {
            format!("asymmetric at ({i},{j})")
        } else if let Some((i, j)) = rep.nonpositive.first() {
            format!("nonpositive distance at ({i},{j})")
        } else {
            let (i, j, k) = rep.triangle[0];
            format!("triangle inequality fails at ({i},{j},{k})")
        };
        Err(Error::Precondition(format!("not a metric: {what}")))
    }
}
