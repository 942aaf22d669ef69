//! Per-color core-set for fair sum-of-nearest-neighbour diversity.
//!
//! `k` rounds of farthest-point greedy, `k + 1` picks each, removing every
//! round's picks before the next. Only the global `k` matters; the color's own
//! quota is not used.

use crate::dataset::Point;
use crate::error::Result;
use crate::gmm::farthest_first_rounds;
use crate::metric::Metric;

pub fn size_bound(k: usize) -> usize {
    k * (k + 1)
}

/// Ascending positions of the core-set over `n` items.
pub fn coreset_positions<F>(n: usize, k: usize, dist: F) -> Vec<usize>
where
    F: Fn(usize, usize) -> f64,
{
    let mut keep = vec![false; n];
    for run in farthest_first_rounds(n, k, k + 1, dist) {
        for &p in run.picks() {
            keep[p] = true;
        }
    }
    (0..n).filter(|&p| keep[p]).collect()
}

/// Builds the core-set of one color group; an empty group yields an empty core-set.
/// Output points keep their input order, so the first round's seed stays first.
pub fn build_coreset_sum_nn(points: &[Point], k: usize, metric: Metric) -> Result<Vec<Point>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let dim = points[0].vec.len();
    if let Some(bad) = points.iter().find(|p| p.vec.len() != dim) {
        return Err(crate::Error::DimensionMismatch {
            expected: dim,
            found: bad.vec.len(),
        });
    }
    let positions = coreset_positions(points.len(), k, |a, b| {
        metric.distance(&points[a].vec, &points[b].vec)
    });
    Ok(positions.into_iter().map(|p| points[p].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmm::gmm;

    fn pts(xs: &[f64]) -> Vec<Point> {
        xs.iter()
            .enumerate()
            .map(|(i, &x)| Point::new(i as u64, vec![x], 0))
            .collect()
    }

    #[test]
    fn two_rounds_on_ten_points() {
        let group = pts(&(0..10).map(f64::from).collect::<Vec<_>>());
        let out = build_coreset_sum_nn(&group, 2, Metric::Euclidean).unwrap();
        let mut xs: Vec<f64> = out.iter().map(|p| p.vec[0]).collect();
        xs.sort_by(f64::total_cmp);
        // round 1 = [0, 9, 4], round 2 = [1, 8, 5]
        assert_eq!(xs, vec![0.0, 1.0, 4.0, 5.0, 8.0, 9.0]);
    }

    #[test]
    fn k_one_is_seed_and_farthest() {
        let group = pts(&[3.0, 1.0, 9.0, 4.0]);
        let out = build_coreset_sum_nn(&group, 1, Metric::Euclidean).unwrap();
        let xs: Vec<f64> = out.iter().map(|p| p.vec[0]).collect();
        assert_eq!(xs, vec![3.0, 9.0]);
    }

    #[test]
    fn small_group_survives_whole() {
        let group = pts(&[1.0, 5.0, 2.0, 8.0, 3.0]);
        assert_eq!(build_coreset_sum_nn(&group, 2, Metric::Euclidean).unwrap(), group);
        assert!(build_coreset_sum_nn(&[], 3, Metric::Euclidean).unwrap().is_empty());
    }

    #[test]
    fn greedy_on_the_coreset_replays_the_first_round() {
        let xs: Vec<f64> = (0..40).map(|i| ((i * 37 % 101) as f64).sin() * 50.0).collect();
        let group = pts(&xs);
        let k = 3;
        let core = build_coreset_sum_nn(&group, k, Metric::Euclidean).unwrap();
        let full = gmm(&group, Metric::Euclidean, k + 1, 0).unwrap();
        let again = gmm(&core, Metric::Euclidean, k + 1, 0).unwrap();
        let ids = |run: &crate::gmm::GmmRun, pts: &[Point]| -> Vec<u64> {
            run.picks().iter().map(|&p| pts[p].id).collect()
        };
        assert_eq!(ids(&full, &group), ids(&again, &core));
        assert_eq!(full.radii(), again.radii());
    }
}
