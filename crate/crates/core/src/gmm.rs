//! Greedy farthest-point traversal (Gonzalez / GMM).
//!
//! Starting from a seed, each step adds the point farthest from everything
//! picked so far. `radii[i]` is the minimum pairwise distance among the first
//! `i + 1` picks; `radii[0]` is `+inf` and must never be read as a real radius.
//!
//! Ties on the farthest distance go to the lowest input position, which makes
//! every run a pure function of the input order and the seed. Each run costs
//! `O(n·k)` distance evaluations: every point keeps its distance to the picked
//! set and is updated once per new pick.

use crate::dataset::Point;
use crate::error::{Error, Result};
use crate::metric::Metric;

#[derive(Debug, Clone, PartialEq)]
pub struct GmmRun {
    picks: Vec<usize>,
    radii: Vec<f64>,
}

impl GmmRun {
    /// Input positions of the picks, in pick order.
    pub fn picks(&self) -> &[usize] {
        &self.picks
    }

    /// `radii[0] = +inf`, then non-increasing.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }

    /// The radius after `i` picks, 1-based (so `radius(1)` is the sentinel).
    pub fn radius(&self, i: usize) -> f64 {
        self.radii[i - 1]
    }
}

/// Runs farthest-point greedy over `n` items addressed by position, with
/// `dist(a, b)` giving their distance. Returns `min(k, n)` picks.
pub fn farthest_first<F>(n: usize, k: usize, seed: usize, dist: F) -> Result<GmmRun>
where
    F: Fn(usize, usize) -> f64,
{
    if n == 0 {
        return Err(Error::input("farthest-point greedy on an empty point set"));
    }
    if seed >= n {
        return Err(Error::input(format!("seed index {seed} out of range for {n} points")));
    }
    let pool: Vec<usize> = (0..n).collect();
    Ok(run_on_pool(&pool, k, seed, &dist))
}

/// [`farthest_first`] over concrete points.
pub fn gmm(points: &[Point], metric: Metric, k: usize, seed: usize) -> Result<GmmRun> {
    check_dims(points)?;
    farthest_first(points.len(), k, seed, |a, b| {
        metric.distance(&points[a].vec, &points[b].vec)
    })
}

/// Repeated greedy without replacement: each round runs on whatever the
/// previous rounds did not pick, seeded at the lowest surviving position.
/// Stops early once the pool is empty. Picks are positions in the original input.
pub fn farthest_first_rounds<F>(n: usize, rounds: usize, per_round: usize, dist: F) -> Vec<GmmRun>
where
    F: Fn(usize, usize) -> f64,
{
    let mut pool: Vec<usize> = (0..n).collect();
    let mut runs = Vec::new();
    for _ in 0..rounds {
        if pool.is_empty() || per_round == 0 {
            break;
        }
        let run = run_on_pool(&pool, per_round, 0, &dist);
        let mut taken = vec![false; n];
        for &p in run.picks() {
            taken[p] = true;
        }
        pool.retain(|&p| !taken[p]);
        runs.push(run);
    }
    runs
}

pub fn gmm_rounds(points: &[Point], metric: Metric, rounds: usize, per_round: usize) -> Result<Vec<GmmRun>> {
    check_dims(points)?;
    Ok(farthest_first_rounds(points.len(), rounds, per_round, |a, b| {
        metric.distance(&points[a].vec, &points[b].vec)
    }))
}

fn check_dims(points: &[Point]) -> Result<()> {
    if let Some(first) = points.first() {
        let dim = first.vec.len();
        if let Some(bad) = points.iter().find(|p| p.vec.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.vec.len(),
            });
        }
    }
    Ok(())
}

// `pool` holds the candidate item ids in priority order; `seed` indexes into it.
fn run_on_pool<F>(pool: &[usize], k: usize, seed: usize, dist: &F) -> GmmRun
where
    F: Fn(usize, usize) -> f64,
{
    let k = k.min(pool.len());
    let mut picks = Vec::with_capacity(k);
    let mut radii = Vec::with_capacity(k);
    if k == 0 {
        return GmmRun { picks, radii };
    }

    let first = pool[seed];
    picks.push(first);
    radii.push(f64::INFINITY);
    let mut picked = vec![false; pool.len()];
    picked[seed] = true;
    let mut to_set: Vec<f64> = pool.iter().map(|&p| dist(p, first)).collect();

    while picks.len() < k {
        let mut best: Option<(usize, f64)> = None;
        for (slot, &d) in to_set.iter().enumerate() {
            if picked[slot] {
                continue;
            }
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((slot, d));
            }
        }
        let (slot, far) = best.expect("pool larger than pick count");
        picked[slot] = true;
        let next = pool[slot];
        picks.push(next);
        let prev = *radii.last().unwrap();
        radii.push(prev.min(far));
        for (s, &p) in pool.iter().enumerate() {
            if !picked[s] {
                let d = dist(p, next);
                if d < to_set[s] {
                    to_set[s] = d;
                }
            }
        }
    }
    GmmRun { picks, radii }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> impl Fn(usize, usize) -> f64 + '_ {
        move |a, b| (xs[a] - xs[b]).abs()
    }

    #[test]
    fn three_points_on_a_line() {
        let xs = [0.0, 4.0, 10.0];
        let run = farthest_first(3, 3, 0, line(&xs)).unwrap();
        assert_eq!(run.picks(), &[0, 2, 1]);
        assert_eq!(run.radii(), &[f64::INFINITY, 10.0, 4.0]);
    }

    #[test]
    fn single_pick_is_the_seed() {
        let xs = [0.0, 4.0, 10.0];
        let run = farthest_first(3, 1, 1, line(&xs)).unwrap();
        assert_eq!(run.picks(), &[1]);
        assert_eq!(run.radii(), &[f64::INFINITY]);
    }

    #[test]
    fn k_beyond_n_exhausts() {
        let xs = [0.0, 4.0, 10.0];
        let run = farthest_first(3, 10, 0, line(&xs)).unwrap();
        assert_eq!(run.len(), 3);
    }

    #[test]
    fn empty_input_and_bad_seed_are_errors() {
        assert!(farthest_first(0, 2, 0, |_, _| 0.0).is_err());
        assert!(farthest_first(2, 2, 2, |_, _| 0.0).is_err());
        assert!(gmm(&[], Metric::Euclidean, 1, 0).is_err());
    }

    #[test]
    fn ties_go_to_the_lowest_position() {
        // 2 and 6 are both at distance 2 from the seed 4.
        let xs = [4.0, 2.0, 6.0];
        let run = farthest_first(3, 2, 0, line(&xs)).unwrap();
        assert_eq!(run.picks(), &[0, 1]);
    }

    #[test]
    fn rounds_remove_earlier_picks() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let runs = farthest_first_rounds(5, 2, 3, line(&xs));
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].len(), 3);
        assert_eq!(runs[1].len(), 2);

        let xs = [0.0, 1.0, 2.0, 3.0];
        let runs = farthest_first_rounds(4, 2, 2, line(&xs));
        assert_eq!(runs[0].picks(), &[0, 3]);
        assert_eq!(runs[1].picks(), &[1, 2]);
    }

    #[test]
    fn one_round_matches_plain_greedy() {
        let xs = [3.0, -1.0, 8.0, 2.5, 7.0, 0.1];
        let plain = farthest_first(6, 4, 0, line(&xs)).unwrap();
        let rounds = farthest_first_rounds(6, 1, 4, line(&xs));
        assert_eq!(rounds, vec![plain]);
    }

    #[test]
    fn rounds_stop_when_pool_is_empty() {
        let xs = [0.0, 1.0, 2.0];
        let runs = farthest_first_rounds(3, 5, 2, line(&xs));
        assert_eq!(runs.len(), 2);
    }

    #[test]
    fn point_api_matches_positions() {
        let points: Vec<Point> = [0.0, 4.0, 10.0]
            .iter()
            .enumerate()
            .map(|(i, &x)| Point::new(i as u64 + 100, vec![x], 0))
            .collect();
        let run = gmm(&points, Metric::Euclidean, 3, 0).unwrap();
        assert_eq!(run.picks(), &[0, 2, 1]);
        assert_eq!(run.radius(3), 4.0);
        let rounds = gmm_rounds(&points, Metric::Euclidean, 1, 3).unwrap();
        assert_eq!(rounds[0], run);
    }
}
