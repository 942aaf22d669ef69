//! Distances between dense vectors and the three diversity measures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The metric a dataset lives in.
///
/// `Angular` is the angle between two vectors divided by pi, so it takes
/// values in `[0, 1]` and satisfies the triangle inequality. Raw cosine
/// dissimilarity (`1 - cos`) is deliberately not offered because it is not
/// a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Euclidean,
    Angular,
}

impl Metric {
    /// Distance between two vectors of equal length. Callers are expected to
    /// have validated the dimensions; use [`Metric::checked_distance`] otherwise.
    #[inline]
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match self {
            Metric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Metric::Angular => angle(a, b) / std::f64::consts::PI,
        }
    }

    pub fn checked_distance(self, a: &[f64], b: &[f64]) -> Result<f64> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(self.distance(a, b))
    }
}

// Angle via 2·atan2(|â − b̂|, |â + b̂|); unlike acos of the cosine this is
// exactly zero for parallel vectors and well conditioned near 0 and pi.
fn angle(a: &[f64], b: &[f64]) -> f64 {
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    match (na == 0.0, nb == 0.0) {
        (true, true) => return 0.0,
        // The zero vector has no direction; put it at a right angle to everything.
        (true, false) | (false, true) => return std::f64::consts::FRAC_PI_2,
        _ => {}
    }
    let (mut diff, mut sum) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (u, v) = (x / na, y / nb);
        diff += (u - v) * (u - v);
        sum += (u + v) * (u + v);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Euclidean => "euclidean",
            Metric::Angular => "angular",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "l2" => Ok(Metric::Euclidean),
            "angular" => Ok(Metric::Angular),
            other => Err(Error::input(format!("unknown metric `{other}`"))),
        }
    }
}

/// Diversity measures over a selected point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Smallest pairwise distance (remote-edge).
    MinPairwise,
    /// Sum of distances over unordered pairs, each pair counted once (remote-clique).
    SumPairwise,
    /// Sum over points of the distance to their nearest other point (remote-pseudoforest).
    SumNn,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::SumPairwise, Measure::SumNn, Measure::MinPairwise];

    /// Evaluate the measure over `n` items whose pairwise distances are given
    /// by `dist(a, b)` for `a, b < n`.
    pub fn evaluate_with<F>(self, n: usize, dist: F) -> Result<f64>
    where
        F: Fn(usize, usize) -> f64,
    {
        if n < 2 {
            return Err(Error::input(format!(
                "diversity needs at least two points, got {n}"
            )));
        }
        Ok(match self {
            Measure::MinPairwise => {
                let mut best = f64::INFINITY;
                for a in 0..n {
                    for b in a + 1..n {
                        best = best.min(dist(a, b));
                    }
                }
                best
            }
            Measure::SumPairwise => {
                let mut total = 0.0;
                for a in 0..n {
                    for b in a + 1..n {
                        total += dist(a, b);
                    }
                }
                total
            }
            Measure::SumNn => nearest_neighbor_terms(n, dist).iter().sum(),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Measure::MinPairwise => "min_pairwise",
            Measure::SumPairwise => "sum_pairwise",
            Measure::SumNn => "sum_nn",
        }
    }
}

/// Per-item distance to the nearest other item. Requires `n >= 2` to be meaningful;
/// with `n < 2` every term is `+inf`.
pub fn nearest_neighbor_terms<F>(n: usize, dist: F) -> Vec<f64>
where
    F: Fn(usize, usize) -> f64,
{
    let mut nn = vec![f64::INFINITY; n];
    for a in 0..n {
        for b in a + 1..n {
            let d = dist(a, b);
            nn[a] = nn[a].min(d);
            nn[b] = nn[b].min(d);
        }
    }
    nn
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "min_pairwise" | "min" => Ok(Measure::MinPairwise),
            "sum_pairwise" | "sum" => Ok(Measure::SumPairwise),
            "sum_nn" | "nn" => Ok(Measure::SumNn),
            other => Err(Error::input(format!("unknown measure `{other}`"))),
        }
    }
}
