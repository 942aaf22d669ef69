//! Fair diversity maximization under the sum-of-nearest-neighbour measure.
//!
//! For every color `i` the solver runs farthest-point greedy for `k` steps on
//! that color. For each prefix length `j` it forms disjoint balls of radius
//! `r_t/2` around the first `t = compute_t(radii, j)` picks, chooses a large
//! subset `B'` of those balls such that enough points of every color survive
//! outside `B'`, and completes a candidate solution from the centers of `B'`
//! plus lowest-index survivors. The best valid candidate wins.
//!
//! The ball subset is found either exhaustively (largest feasible subset,
//! exponential in `k_i`) or by the polynomial halving procedure, which loses
//! at most a factor of about `m` in the subset size when every color has at
//! least twice its quota.

use crate::dataset::{ColoredDataset, Quota, Selection};
use crate::error::Result;
use crate::gmm::farthest_first;
use crate::metric::Measure;

/// How the solver picks the ball subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallApproach {
    #[default]
    Exhaustive,
    Halving,
}

impl std::str::FromStr for BallApproach {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exhaustive" => Ok(BallApproach::Exhaustive),
            "halving" => Ok(BallApproach::Halving),
            other => Err(crate::Error::input(format!("unknown approach `{other}`"))),
        }
    }
}

impl std::fmt::Display for BallApproach {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BallApproach::Exhaustive => "exhaustive",
            BallApproach::Halving => "halving",
        })
    }
}

/// Closed balls of one shared radius around dataset points.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSet {
    pub centers: Vec<usize>,
    pub radius: f64,
}

impl BallSet {
    pub fn new(centers: Vec<usize>, radius: f64) -> Self {
        BallSet { centers, radius }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Centers pairwise at least `2·radius` apart.
    pub fn is_disjoint(&self, dataset: &ColoredDataset) -> bool {
        self.centers.iter().enumerate().all(|(a, &ca)| {
            self.centers[a + 1..]
                .iter()
                .all(|&cb| dataset.dist(ca, cb) >= 2.0 * self.radius)
        })
    }
}

/// Residual per-color counts that must still survive outside the chosen balls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandVector(pub Vec<usize>);

impl DemandVector {
    pub fn is_cleared(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    fn needy(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &d)| d > 0).map(|(l, _)| l)
    }
}

/// Largest iteration `t >= j` (1-based) with `r_t >= r_j / 2`, capped at the
/// number of radii available. `radii[0]` is the greedy's `+inf` sentinel.
pub fn compute_t(radii: &[f64], j: usize) -> usize {
    assert!(j >= 2 && j <= radii.len(), "j = {j} outside 2..={}", radii.len());
    let half = radii[j - 1] / 2.0;
    let mut t = j;
    while t < radii.len() && radii[t] >= half {
        t += 1;
    }
    t
}

/// Which points fall inside which balls, split by color.
///
/// Balls built by the solver are disjoint except for points sitting exactly on
/// a shared boundary; those are tracked separately so that counts stay exact.
#[derive(Debug, Clone)]
struct Occupancy {
    /// `single[b][l]`: color-`l` points inside ball `b` and no other.
    single: Vec<Vec<usize>>,
    /// Points inside two or more balls: (ball list, color).
    shared: Vec<(Vec<usize>, usize)>,
    counts: Vec<usize>,
}

impl Occupancy {
    fn build(dataset: &ColoredDataset, balls: &BallSet) -> Self {
        Self::from_distances(dataset, balls.len(), balls.radius, |p, b| {
            dataset.dist(p, balls.centers[b])
        })
    }

    fn from_distances<F>(dataset: &ColoredDataset, t: usize, radius: f64, dist: F) -> Self
    where
        F: Fn(usize, usize) -> f64,
    {
        let m = dataset.num_colors();
        let mut single = vec![vec![0; m]; t];
        let mut shared = Vec::new();
        let mut inside = Vec::new();
        for p in 0..dataset.len() {
            inside.clear();
            inside.extend((0..t).filter(|&b| dist(p, b) <= radius));
            let color = dataset.point(p).color;
            match inside.len() {
                0 => {}
                1 => single[inside[0]][color] += 1,
                _ => shared.push((inside.clone(), color)),
            }
        }
        Occupancy {
            single,
            shared,
            counts: dataset.color_counts(),
        }
    }

    fn num_balls(&self) -> usize {
        self.single.len()
    }

    /// Per-color number of points inside at least one chosen ball.
    fn covered(&self, chosen: &[bool]) -> Vec<usize> {
        let mut covered = vec![0; self.counts.len()];
        for (b, per_color) in self.single.iter().enumerate() {
            if chosen[b] {
                for (c, &n) in covered.iter_mut().zip(per_color) {
                    *c += n;
                }
            }
        }
        for (list, color) in &self.shared {
            if list.iter().any(|&b| chosen[b]) {
                covered[*color] += 1;
            }
        }
        covered
    }

    fn outside(&self, chosen: &[bool]) -> Vec<usize> {
        self.counts
            .iter()
            .zip(self.covered(chosen))
            .map(|(n, c)| n - c)
            .collect()
    }

    fn feasible(&self, chosen: &[bool], size: usize, color: usize, quota: &Quota) -> bool {
        self.outside(chosen).iter().enumerate().all(|(l, &left)| {
            let need = if l == color {
                quota.get(l).saturating_sub(size)
            } else {
                quota.get(l)
            };
            left >= need
        })
    }
}

/// Number of subsets of size at most `max_size` out of `t` balls.
pub fn exhaustive_cost(t: usize, max_size: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for z in 0..=max_size.min(t) {
        if z > 0 {
            binom = binom * (t - z + 1) as u128 / z as u128;
        }
        total = total.saturating_add(binom);
    }
    total
}

/// The largest feasible `B' ⊆ B` with `|B'| <= max_size`; among equally large
/// subsets the lexicographically first by ball position. Returns ball
/// positions (indices into `balls.centers`), ascending.
pub fn select_balls_exhaustive(
    dataset: &ColoredDataset,
    balls: &BallSet,
    color: usize,
    quota: &Quota,
    max_size: usize,
) -> Vec<usize> {
    exhaustive_on(&Occupancy::build(dataset, balls), color, quota, max_size)
}

fn exhaustive_on(occ: &Occupancy, color: usize, quota: &Quota, max_size: usize) -> Vec<usize> {
    let t = occ.num_balls();
    let mut chosen = vec![false; t];
    for size in (1..=max_size.min(t)).rev() {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            chosen.iter_mut().for_each(|c| *c = false);
            for &b in &combo {
                chosen[b] = true;
            }
            if occ.feasible(&chosen, size, color, quota) {
                return combo;
            }
            if !next_combination(&mut combo, t) {
                break;
            }
        }
    }
    Vec::new()
}

// Advances `combo` to the next size-|combo| subset of 0..n in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for pos in (0..k).rev() {
        if combo[pos] < n - k + pos {
            combo[pos] += 1;
            for q in pos + 1..k {
                combo[q] = combo[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Polynomial-time ball subset: the better of the best subset of size at most
/// two, and the result of repeatedly halving `B` while discarding the half
/// that clears the residual demands of at least as many colors. Intended for
/// inputs where every color has at least twice its quota.
pub fn select_balls_halving(
    dataset: &ColoredDataset,
    balls: &BallSet,
    color: usize,
    quota: &Quota,
) -> Vec<usize> {
    halving_on(&Occupancy::build(dataset, balls), color, quota).0
}

/// Halving that also returns the demand vector after every step, starting
/// with the demands left once points outside every ball are accounted for.
pub fn select_balls_halving_traced(
    dataset: &ColoredDataset,
    balls: &BallSet,
    color: usize,
    quota: &Quota,
) -> (Vec<usize>, Vec<DemandVector>) {
    halving_on(&Occupancy::build(dataset, balls), color, quota)
}

fn halving_on(occ: &Occupancy, color: usize, quota: &Quota) -> (Vec<usize>, Vec<DemandVector>) {
    let t = occ.num_balls();
    let cap = quota.get(color);
    let small = exhaustive_on(occ, color, quota, cap.min(2));

    // The special color's demand starts at its full quota, not k_i - |B'|.
    let demands_for = |kept: &[usize]| {
        let mut chosen = vec![false; t];
        for &b in kept {
            chosen[b] = true;
        }
        let outside = occ.outside(&chosen);
        DemandVector(
            quota
                .per_color()
                .iter()
                .zip(outside)
                .map(|(&k, left)| k.saturating_sub(left))
                .collect(),
        )
    };

    let mut kept: Vec<usize> = (0..t).collect();
    let mut demand = demands_for(&kept);
    let mut history = vec![demand.clone()];
    while !demand.is_cleared() && !kept.is_empty() {
        let split = kept.len().div_ceil(2);
        let (first, second) = kept.split_at(split);
        let in_first = covered_by(occ, first);
        let in_second = covered_by(occ, second);
        let mut wins_first = 0;
        let mut wins_second = 0;
        for l in demand.needy() {
            if in_first[l] > in_second[l] {
                wins_first += 1;
            } else if in_second[l] > in_first[l] {
                wins_second += 1;
            }
        }
        // Discard the half holding more of the needy colors' points.
        let next = if wins_second >= wins_first {
            first.to_vec()
        } else {
            second.to_vec()
        };
        if next.len() == kept.len() {
            // A lone ball holding none of the missing points: the demands
            // cannot be met by discarding anything.
            break;
        }
        kept = next;
        demand = demands_for(&kept);
        history.push(demand.clone());
    }

    if !demand.is_cleared() {
        // Only reachable when some color has fewer points than its quota.
        return (small, history);
    }
    kept.truncate(cap);
    if small.len() > kept.len() {
        (small, history)
    } else {
        (kept, history)
    }
}

fn covered_by(occ: &Occupancy, subset: &[usize]) -> Vec<usize> {
    let mut chosen = vec![false; occ.num_balls()];
    for &b in subset {
        chosen[b] = true;
    }
    occ.covered(&chosen)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumNnConfig {
    pub approach: BallApproach,
    /// Maximum number of ball subsets the exhaustive approach may enumerate in
    /// one step before falling back to halving.
    pub exhaustive_budget: u128,
}

impl Default for SumNnConfig {
    fn default() -> Self {
        SumNnConfig {
            approach: BallApproach::Exhaustive,
            exhaustive_budget: 10_000_000,
        }
    }
}

impl SumNnConfig {
    pub fn with_approach(approach: BallApproach) -> Self {
        SumNnConfig {
            approach,
            ..Default::default()
        }
    }
}

pub fn solve_fdm_sum_nn(dataset: &ColoredDataset, quota: &Quota, approach: BallApproach) -> Result<Selection> {
    solve_fdm_sum_nn_with(dataset, quota, &SumNnConfig::with_approach(approach))
}

pub fn solve_fdm_sum_nn_with(dataset: &ColoredDataset, quota: &Quota, cfg: &SumNnConfig) -> Result<Selection> {
    dataset.check_quota(quota)?;
    let m = dataset.num_colors();
    let k = quota.total();

    let initial: Vec<usize> = (0..m)
        .flat_map(|c| dataset.members(c)[..quota.get(c)].iter().copied())
        .collect();
    if k < 2 {
        return Selection::new(dataset, initial);
    }
    let mut best_value = dataset.diversity_of(&initial, Measure::SumNn)?;
    let mut best = initial;

    for color in 0..m {
        let k_i = quota.get(color);
        let members = dataset.members(color);
        if k_i == 0 || members.is_empty() {
            continue;
        }
        let run = farthest_first(members.len(), k, 0, |a, b| dataset.dist(members[a], members[b]))?;
        let picks: Vec<usize> = run.picks().iter().map(|&p| members[p]).collect();
        // Distances from every point to every pick, reused across prefix lengths.
        let to_pick: Vec<Vec<f64>> = (0..dataset.len())
            .map(|p| picks.iter().map(|&c| dataset.dist(p, c)).collect())
            .collect();

        for j in 2..=run.len() {
            let t = compute_t(run.radii(), j);
            let balls = BallSet::new(picks[..t].to_vec(), run.radius(t) / 2.0);
            debug_assert!(balls.is_disjoint(dataset));
            let occ = Occupancy::from_distances(dataset, t, balls.radius, |p, b| to_pick[p][b]);

            let chosen = match cfg.approach {
                BallApproach::Exhaustive if exhaustive_cost(t, k_i) <= cfg.exhaustive_budget => {
                    exhaustive_on(&occ, color, quota, k_i)
                }
                BallApproach::Exhaustive => {
                    log::warn!(
                        "exhaustive ball search over {t} balls exceeds the budget; using halving"
                    );
                    halving_on(&occ, color, quota).0
                }
                BallApproach::Halving => halving_on(&occ, color, quota).0,
            };

            let centers: Vec<usize> = chosen.iter().map(|&b| balls.centers[b]).collect();
            let Some(candidate) = complete_solution(dataset, quota, color, centers, |p| {
                chosen.iter().any(|&b| to_pick[p][b] <= balls.radius)
            }) else {
                continue;
            };
            let value = dataset.diversity_of(&candidate, Measure::SumNn)?;
            if value > best_value {
                best_value = value;
                best = candidate;
            }
        }
    }
    Selection::new(dataset, best)
}

// Centers of the chosen balls, then lowest-index survivors outside them.
fn complete_solution<F>(
    dataset: &ColoredDataset,
    quota: &Quota,
    color: usize,
    centers: Vec<usize>,
    in_chosen: F,
) -> Option<Vec<usize>>
where
    F: Fn(usize) -> bool,
{
    let taken = centers.len();
    let mut out = centers;
    out.reserve(quota.total());
    for c in 0..dataset.num_colors() {
        let need = if c == color {
            quota.get(c) - taken
        } else {
            quota.get(c)
        };
        let fill: Vec<usize> = dataset
            .members(c)
            .iter()
            .copied()
            .filter(|&p| !in_chosen(p))
            .take(need)
            .collect();
        if fill.len() < need {
            return None;
        }
        out.extend(fill);
    }
    Some(out)
}
