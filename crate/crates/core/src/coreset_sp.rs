//! Per-color core-set for fair sum-of-pairwise-distances diversity.
//!
//! Runs farthest-point greedy for `max(k_i, 2)` steps to get seeds, assigns
//! every point to its nearest seed (earlier seed wins ties), and keeps, for
//! each seed, the `k_i` assigned points closest to it. The result has at most
//! `max(k_i, 2)·k_i` points regardless of the group size or aspect ratio
//! (a seed is one of its own `k_i` closest points).

use crate::dataset::Point;
use crate::error::{Error, Result};
use crate::gmm::farthest_first;
use crate::metric::Metric;

/// Upper bound on the output size for a given `k_i`.
pub fn size_bound(k_i: usize) -> usize {
    k_i.max(2) * (k_i + 1)
}

/// Core-set over `n` items addressed by position. Returns ascending positions.
/// `k_i = 0` yields an empty core-set.
pub fn coreset_positions<F>(n: usize, k_i: usize, dist: F) -> Vec<usize>
where
    F: Fn(usize, usize) -> f64,
{
    if n == 0 || k_i == 0 {
        return Vec::new();
    }
    let seeds = farthest_first(n, k_i.max(2), 0, &dist).expect("non-empty input");
    let seeds = seeds.picks();

    // clusters[s] = (distance to seed s, position) for every point whose nearest seed is s
    let mut clusters: Vec<Vec<(f64, usize)>> = vec![Vec::new(); seeds.len()];
    for p in 0..n {
        let mut best = (0, f64::INFINITY);
        for (s, &seed) in seeds.iter().enumerate() {
            let d = dist(p, seed);
            if d < best.1 {
                best = (s, d);
            }
        }
        clusters[best.0].push((best.1, p));
    }

    let mut keep = vec![false; n];
    for &seed in seeds {
        keep[seed] = true;
    }
    for cluster in &mut clusters {
        cluster.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, p) in cluster.iter().take(k_i) {
            keep[p] = true;
        }
    }
    (0..n).filter(|&p| keep[p]).collect()
}

/// Builds the core-set of one color group. Output points keep their input order.
pub fn build_coreset_sum_pairwise(points: &[Point], k_i: usize, metric: Metric) -> Result<Vec<Point>> {
    if points.is_empty() {
        return Err(Error::input("cannot build a core-set of an empty group"));
    }
    let positions = coreset_positions(points.len(), k_i, |a, b| {
        metric.distance(&points[a].vec, &points[b].vec)
    });
    Ok(positions.into_iter().map(|p| points[p].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(xs: &[f64]) -> Vec<Point> {
        xs.iter()
            .enumerate()
            .map(|(i, &x)| Point::new(i as u64, vec![x], 0))
            .collect()
    }

    fn xs(points: &[Point]) -> Vec<f64> {
        points.iter().map(|p| p.vec[0]).collect()
    }

    #[test]
    fn three_point_example() {
        let out = build_coreset_sum_pairwise(&pts(&[0.0, 4.0, 10.0]), 2, Metric::Euclidean).unwrap();
        assert_eq!(xs(&out), vec![0.0, 4.0, 10.0]);
    }

    #[test]
    fn k_one_still_takes_two_seeds() {
        let out = build_coreset_sum_pairwise(&pts(&[0.0, 10.0]), 1, Metric::Euclidean).unwrap();
        assert_eq!(xs(&out), vec![0.0, 10.0]);
    }

    #[test]
    fn small_group_survives_whole() {
        let group = pts(&[1.0, 2.0, 3.0]);
        let out = build_coreset_sum_pairwise(&group, 3, Metric::Euclidean).unwrap();
        assert_eq!(out, group);
    }

    #[test]
    fn clusters_keep_only_closest_members() {
        // Seeds 0 and 100; each keeps itself plus its nearest neighbour.
        let group = pts(&[0.0, 100.0, 1.0, 2.0, 3.0, 99.0, 97.0]);
        let out = build_coreset_sum_pairwise(&group, 2, Metric::Euclidean).unwrap();
        assert_eq!(xs(&out), vec![0.0, 100.0, 1.0, 99.0]);
        assert!(out.len() <= size_bound(2));
    }

    #[test]
    fn zero_quota_and_empty_input() {
        assert!(build_coreset_sum_pairwise(&pts(&[1.0, 2.0]), 0, Metric::Euclidean)
            .unwrap()
            .is_empty());
        assert!(build_coreset_sum_pairwise(&[], 2, Metric::Euclidean).is_err());
    }

    #[test]
    fn idempotent_on_its_own_output() {
        let group = pts(&[5.0, -3.0, 8.5, 0.2, 12.0, 7.7, -9.0, 3.3, 4.1, 11.0]);
        for k in 1..4 {
            let once = build_coreset_sum_pairwise(&group, k, Metric::Euclidean).unwrap();
            let twice = build_coreset_sum_pairwise(&once, k, Metric::Euclidean).unwrap();
            assert_eq!(once, twice, "k = {k}");
        }
    }
}
