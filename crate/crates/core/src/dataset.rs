//! Colored point sets, per-color quotas and selections.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{Measure, Metric};

/// Stable, caller-supplied point identifier.
pub type PointId = u64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub id: PointId,
    pub vec: Vec<f64>,
    pub color: usize,
}

impl Point {
    pub fn new(id: PointId, vec: Vec<f64>, color: usize) -> Self {
        Point { id, vec, color }
    }
}

/// An immutable set of colored points in a metric space.
///
/// Points are stored in ascending id order, so "lowest index" and "lowest id"
/// coincide for every deterministic tie-break in the crate.
#[derive(Debug, Clone)]
pub struct ColoredDataset {
    points: Vec<Point>,
    m: usize,
    dim: usize,
    metric: Metric,
    members: Vec<Vec<usize>>,
    by_id: HashMap<PointId, usize>,
}

impl ColoredDataset {
    /// Builds a dataset with `m` colors. The dimension is taken from the first
    /// point; an empty dataset has dimension 0.
    pub fn new(points: Vec<Point>, m: usize, metric: Metric) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.vec.len());
        Self::with_dim(points, m, dim, metric)
    }

    pub fn with_dim(mut points: Vec<Point>, m: usize, dim: usize, metric: Metric) -> Result<Self> {
        points.sort_by_key(|p| p.id);
        let mut members = vec![Vec::new(); m];
        let mut by_id = HashMap::with_capacity(points.len());
        for (idx, p) in points.iter().enumerate() {
            if p.vec.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.vec.len(),
                });
            }
            if p.vec.iter().any(|x| !x.is_finite()) {
                return Err(Error::input(format!("point {} has a non-finite coordinate", p.id)));
            }
            if p.color >= m {
                return Err(Error::input(format!(
                    "point {} has color {} but only {m} colors exist",
                    p.id, p.color
                )));
            }
            if by_id.insert(p.id, idx).is_some() {
                return Err(Error::input(format!("duplicate point id {}", p.id)));
            }
            members[p.color].push(idx);
        }
        Ok(ColoredDataset {
            points,
            m,
            dim,
            metric,
            members,
            by_id,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, idx: usize) -> &Point {
        &self.points[idx]
    }

    pub fn num_colors(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.metric.distance(&self.points[a].vec, &self.points[b].vec)
    }

    /// Dataset indices of the points of color `c`, ascending.
    pub fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    /// The points of color `c` in dataset order.
    pub fn group(&self, c: usize) -> Vec<Point> {
        self.members[c].iter().map(|&i| self.points[i].clone()).collect()
    }

    pub fn color_counts(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, id: PointId) -> Option<usize> {
        self.by_id.get(&id).copied()
    }

    /// A new dataset holding only the given indices, with the same colors and metric.
    pub fn subset(&self, indices: &[usize]) -> ColoredDataset {
        let points = indices.iter().map(|&i| self.points[i].clone()).collect();
        ColoredDataset::with_dim(points, self.m, self.dim, self.metric)
            .expect("a subset of a valid dataset is valid")
    }

    /// Distance from `p` to the closest member of `set`.
    pub fn dist_to_set(&self, p: &Point, set: &Selection) -> Result<f64> {
        if set.is_empty() {
            return Err(Error::input("distance to an empty set is undefined"));
        }
        let mut best = f64::INFINITY;
        for &q in set.indices() {
            best = best.min(self.metric.checked_distance(&p.vec, &self.points[q].vec)?);
        }
        Ok(best)
    }

    pub fn diversity(&self, set: &Selection, measure: Measure) -> Result<f64> {
        self.diversity_of(set.indices(), measure)
    }

    /// Diversity of an arbitrary list of dataset indices.
    pub fn diversity_of(&self, indices: &[usize], measure: Measure) -> Result<f64> {
        measure.evaluate_with(indices.len(), |a, b| self.dist(indices[a], indices[b]))
    }

    /// Errors unless the quota has one entry per color and every color has
    /// at least as many points as requested.
    pub fn check_quota(&self, quota: &Quota) -> Result<()> {
        if quota.len() != self.m {
            return Err(Error::input(format!(
                "quota has {} entries but the dataset has {} colors",
                quota.len(),
                self.m
            )));
        }
        for (color, (&requested, members)) in quota.per_color().iter().zip(&self.members).enumerate() {
            if members.len() < requested {
                return Err(Error::InfeasibleQuota {
                    color,
                    requested,
                    available: members.len(),
                });
            }
        }
        Ok(())
    }
}

/// Per-color target counts `k_1..k_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quota {
    per_color: Vec<usize>,
}

impl Quota {
    pub fn new(per_color: Vec<usize>) -> Self {
        Quota { per_color }
    }

    /// `c` copies of the same count over `m` colors.
    pub fn uniform(m: usize, c: usize) -> Self {
        Quota::new(vec![c; m])
    }

    /// `step, 2·step, ..., m·step`, favouring the later colors.
    pub fn ramp(m: usize, step: usize) -> Self {
        Quota::new((1..=m).map(|i| i * step).collect())
    }

    pub fn per_color(&self) -> &[usize] {
        &self.per_color
    }

    pub fn get(&self, color: usize) -> usize {
        self.per_color[color]
    }

    pub fn len(&self) -> usize {
        self.per_color.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_color.is_empty()
    }

    pub fn total(&self) -> usize {
        self.per_color.iter().sum()
    }
}

impl fmt::Display for Quota {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, k) in self.per_color.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Quota {
    type Err = Error;

    /// Parses `2,2,2,2`, optionally wrapped in brackets or space separated.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let per_color = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::input(format!("bad quota entry `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Quota::new(per_color))
    }
}

/// A set of points drawn from one dataset, held as sorted dataset indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    indices: Vec<usize>,
    counts: Vec<usize>,
}

impl Selection {
    pub fn new(dataset: &ColoredDataset, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        let mut counts = vec![0; dataset.num_colors()];
        let mut seen = HashSet::with_capacity(indices.len());
        for &i in &indices {
            if i >= dataset.len() {
                return Err(Error::input(format!("index {i} is outside the dataset")));
            }
            if !seen.insert(i) {
                return Err(Error::input(format!("index {i} selected twice")));
            }
            counts[dataset.point(i).color] += 1;
        }
        Ok(Selection { indices, counts })
    }

    pub fn from_ids(dataset: &ColoredDataset, ids: &[PointId]) -> Result<Self> {
        let indices = ids
            .iter()
            .map(|&id| {
                dataset
                    .index_of(id)
                    .ok_or_else(|| Error::input(format!("unknown point id {id}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Selection::new(dataset, indices)
    }

    pub fn empty(dataset: &ColoredDataset) -> Self {
        Selection {
            indices: Vec::new(),
            counts: vec![0; dataset.num_colors()],
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn ids(&self, dataset: &ColoredDataset) -> Vec<PointId> {
        self.indices.iter().map(|&i| dataset.point(i).id).collect()
    }

    pub fn per_color_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// True iff the per-color counts equal the quota exactly.
    pub fn validate(&self, quota: &Quota) -> bool {
        self.counts == quota.per_color()
    }
}
