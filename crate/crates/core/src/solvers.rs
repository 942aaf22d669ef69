//! Exact oracle and baseline solvers for fair and unconstrained diversity maximization.

use crate::dataset::{ColoredDataset, Point, Quota, Selection};
use crate::error::{Error, Result};
use crate::fdm_nn::{solve_fdm_sum_nn_with, SumNnConfig};
use crate::gmm::farthest_first;
use crate::metric::Measure;

pub const DEFAULT_BRUTE_FORCE_BUDGET: u128 = 10_000_000;
pub const DEFAULT_EPS: f64 = 0.05;

/// Settings shared by the measure-dispatching entry points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Local search accepts a swap only if it multiplies the objective by more than `1 + eps/k`.
    pub eps: f64,
    pub sum_nn: SumNnConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            eps: DEFAULT_EPS,
            sum_nn: SumNnConfig::default(),
        }
    }
}

/// Number of quota-respecting selections, saturating.
pub fn candidate_count(dataset: &ColoredDataset, quota: &Quota) -> u128 {
    (0..dataset.num_colors())
        .map(|c| binomial(dataset.members(c).len(), quota.get(c)))
        .fold(1u128, |acc, x| acc.saturating_mul(x))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

pub fn brute_force_fdm(dataset: &ColoredDataset, quota: &Quota, measure: Measure) -> Result<(Selection, f64)> {
    brute_force_fdm_with_budget(dataset, quota, measure, DEFAULT_BRUTE_FORCE_BUDGET)
}

/// Exact optimum by enumerating every per-color combination. Among optimal
/// selections the lexicographically first (by ascending id list) wins.
pub fn brute_force_fdm_with_budget(
    dataset: &ColoredDataset,
    quota: &Quota,
    measure: Measure,
    budget: u128,
) -> Result<(Selection, f64)> {
    dataset.check_quota(quota)?;
    let required = candidate_count(dataset, quota);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let k = quota.total();
    if k < 2 {
        return Err(Error::input(format!("diversity needs at least two points, quota asks for {k}")));
    }

    let n = dataset.len();
    let matrix: Vec<f64> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| dataset.dist(a, b))
        .collect();

    let groups: Vec<&[usize]> = (0..dataset.num_colors()).map(|c| dataset.members(c)).collect();
    let mut combos: Vec<Vec<usize>> = (0..groups.len()).map(|c| (0..quota.get(c)).collect()).collect();
    let mut current = Vec::with_capacity(k);
    let mut best: Option<(Vec<usize>, f64)> = None;

    loop {
        current.clear();
        for (group, combo) in groups.iter().zip(&combos) {
            current.extend(combo.iter().map(|&p| group[p]));
        }
        current.sort_unstable();
        let value = measure.evaluate_with(k, |a, b| matrix[current[a] * n + current[b]])?;
        let better = match &best {
            None => true,
            Some((ids, v)) => value > *v || (value == *v && current < *ids),
        };
        if better {
            best = Some((current.clone(), value));
        }

        // Odometer over the per-color combinations, last color fastest.
        let mut c = groups.len();
        loop {
            if c == 0 {
                let (indices, value) = best.expect("at least one candidate");
                return Ok((Selection::new(dataset, indices)?, value));
            }
            c -= 1;
            if advance(&mut combos[c], groups[c].len()) {
                break;
            }
            combos[c] = (0..quota.get(c)).collect();
        }
    }
}

fn advance(combo: &mut [usize], n: usize) -> bool {
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

/// Result of a local search run with the objective value after every accepted swap.
#[derive(Debug, Clone)]
pub struct LocalSearchOutcome {
    pub selection: Selection,
    /// Objective at the start, then after each accepted swap.
    pub trace: Vec<f64>,
}

pub fn local_search_sum_pairwise(dataset: &ColoredDataset, quota: &Quota, eps: f64) -> Result<Selection> {
    Ok(local_search_sum_pairwise_traced(dataset, quota, eps)?.selection)
}

/// Same-color single swap local search for sum of pairwise distances,
/// starting from per-color farthest-point picks.
pub fn local_search_sum_pairwise_traced(
    dataset: &ColoredDataset,
    quota: &Quota,
    eps: f64,
) -> Result<LocalSearchOutcome> {
    dataset.check_quota(quota)?;
    let mut start = Vec::with_capacity(quota.total());
    for c in 0..dataset.num_colors() {
        let members = dataset.members(c);
        if quota.get(c) == 0 {
            continue;
        }
        let run = farthest_first(members.len(), quota.get(c), 0, |a, b| {
            dataset.dist(members[a], members[b])
        })?;
        start.extend(run.picks().iter().map(|&p| members[p]));
    }
    local_search_from(dataset, start, eps)
}

/// Local search from an explicit starting selection; the swaps preserve its per-color counts.
pub fn local_search_from(dataset: &ColoredDataset, start: Vec<usize>, eps: f64) -> Result<LocalSearchOutcome> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::input(format!("eps must be positive, got {eps}")));
    }
    let n = dataset.len();
    let mut selected = start;
    let k = selected.len();
    let mut in_set = vec![false; n];
    for &x in &selected {
        if x >= n || std::mem::replace(&mut in_set[x], true) {
            return Err(Error::input("starting selection has an invalid or repeated index"));
        }
    }
    // sum_to_set[p] = Σ_{q ∈ S} dist(p, q)
    let mut sum_to_set: Vec<f64> = (0..n)
        .map(|p| selected.iter().map(|&q| dataset.dist(p, q)).sum())
        .collect();
    let objective = |sum_to_set: &[f64], selected: &[usize]| -> f64 {
        selected.iter().map(|&x| sum_to_set[x]).sum::<f64>() / 2.0
    };
    let mut current = objective(&sum_to_set, &selected);
    let mut trace = vec![current];
    let factor = 1.0 + eps / k.max(1) as f64;

    if k >= 2 {
        loop {
            let mut best: Option<(usize, usize, f64)> = None;
            for (slot, &x) in selected.iter().enumerate() {
                let color = dataset.point(x).color;
                for &y in dataset.members(color) {
                    if in_set[y] {
                        continue;
                    }
                    let value = current - sum_to_set[x] + sum_to_set[y] - dataset.dist(x, y);
                    if best.is_none_or(|(_, _, v)| value > v) {
                        best = Some((slot, y, value));
                    }
                }
            }
            let Some((slot, y, value)) = best else { break };
            if value <= current * factor {
                break;
            }
            let x = selected[slot];
            for (p, s) in sum_to_set.iter_mut().enumerate() {
                *s += dataset.dist(p, y) - dataset.dist(p, x);
            }
            selected[slot] = y;
            in_set[x] = false;
            in_set[y] = true;
            current = objective(&sum_to_set, &selected);
            trace.push(current);
        }
    }
    Ok(LocalSearchOutcome {
        selection: Selection::new(dataset, selected)?,
        trace,
    })
}

/// Interleaved farthest-point greedy: each step takes, among colors that
/// still need points, the point farthest from the current selection.
pub fn fair_greedy_min_pairwise(dataset: &ColoredDataset, quota: &Quota) -> Result<Selection> {
    dataset.check_quota(quota)?;
    let n = dataset.len();
    let mut remaining = quota.per_color().to_vec();
    let mut picked = vec![false; n];
    let mut to_set = vec![f64::INFINITY; n];
    let mut selected = Vec::with_capacity(quota.total());

    for _ in 0..quota.total() {
        let mut best: Option<(usize, f64)> = None;
        for p in 0..n {
            if picked[p] || remaining[dataset.point(p).color] == 0 {
                continue;
            }
            if best.is_none_or(|(_, d)| to_set[p] > d) {
                best = Some((p, to_set[p]));
            }
        }
        let (p, _) = best.expect("quota checked feasible");
        picked[p] = true;
        remaining[dataset.point(p).color] -= 1;
        selected.push(p);
        for q in 0..n {
            if !picked[q] {
                to_set[q] = to_set[q].min(dataset.dist(p, q));
            }
        }
    }
    Selection::new(dataset, selected)
}

/// Fair solver for `measure`: local search for sum-pairwise, the ball-based
/// solver for sum-NN and interleaved greedy for min-pairwise.
pub fn solve_fdm(dataset: &ColoredDataset, quota: &Quota, measure: Measure, cfg: &SolverConfig) -> Result<Selection> {
    match measure {
        Measure::SumPairwise => local_search_sum_pairwise(dataset, quota, cfg.eps),
        Measure::SumNn => solve_fdm_sum_nn_with(dataset, quota, &cfg.sum_nn),
        Measure::MinPairwise => fair_greedy_min_pairwise(dataset, quota),
    }
}

/// Unconstrained diversity maximization: colors are ignored.
pub fn solve_dm(dataset: &ColoredDataset, k: usize, measure: Measure, cfg: &SolverConfig) -> Result<Selection> {
    let n = dataset.len();
    if n < k {
        return Err(Error::InfeasibleQuota {
            color: 0,
            requested: k,
            available: n,
        });
    }
    if k == 0 {
        return Ok(Selection::empty(dataset));
    }
    let indices = match measure {
        Measure::MinPairwise => farthest_first(n, k, 0, |a, b| dataset.dist(a, b))?
            .picks()
            .to_vec(),
        Measure::SumPairwise | Measure::SumNn => {
            // Same ids, same order, one color: indices carry over unchanged.
            let merged = merge_colors(dataset);
            let quota = Quota::new(vec![k]);
            let sel = match measure {
                Measure::SumPairwise => local_search_sum_pairwise(&merged, &quota, cfg.eps)?,
                _ => solve_fdm_sum_nn_with(&merged, &quota, &cfg.sum_nn)?,
            };
            sel.indices().to_vec()
        }
    };
    Selection::new(dataset, indices)
}

fn merge_colors(dataset: &ColoredDataset) -> ColoredDataset {
    let points = dataset
        .points()
        .iter()
        .map(|p| Point::new(p.id, p.vec.clone(), 0))
        .collect();
    ColoredDataset::with_dim(points, 1, dataset.dim(), dataset.metric()).expect("recoloring keeps validity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Metric;

    /// Color A at {0, 4, 10}, color B at {1, 9}; ids 0..5 in that order.
    fn d1() -> ColoredDataset {
        let pts = [(0.0, 0), (4.0, 0), (10.0, 0), (1.0, 1), (9.0, 1)];
        let points = pts
            .iter()
            .enumerate()
            .map(|(i, &(x, c))| Point::new(i as u64, vec![x], c))
            .collect();
        ColoredDataset::new(points, 2, Metric::Euclidean).unwrap()
    }

    fn coords(ds: &ColoredDataset, sel: &Selection) -> Vec<f64> {
        sel.indices().iter().map(|&i| ds.point(i).vec[0]).collect()
    }

    #[test]
    fn oracle_on_d1() {
        let ds = d1();
        let q = Quota::new(vec![2, 1]);
        let (sel, v) = brute_force_fdm(&ds, &q, Measure::SumPairwise).unwrap();
        assert_eq!(v, 20.0);
        assert_eq!(coords(&ds, &sel), vec![0.0, 10.0, 1.0]);
        let (sel, v) = brute_force_fdm(&ds, &q, Measure::SumNn).unwrap();
        assert_eq!(v, 13.0);
        assert_eq!(coords(&ds, &sel), vec![0.0, 4.0, 9.0]);
        let (sel, v) = brute_force_fdm(&ds, &q, Measure::MinPairwise).unwrap();
        assert_eq!(v, 4.0);
        assert_eq!(coords(&ds, &sel), vec![0.0, 4.0, 9.0]);
    }

    #[test]
    fn oracle_budget_refusal() {
        let ds = d1();
        let err = brute_force_fdm_with_budget(&ds, &Quota::new(vec![2, 1]), Measure::SumNn, 5).unwrap_err();
        assert!(err.is_budget());
        assert_eq!(candidate_count(&ds, &Quota::new(vec![2, 1])), 6);
    }

    #[test]
    fn local_search_on_d1() {
        let ds = d1();
        let q = Quota::new(vec![2, 1]);
        let sel = local_search_sum_pairwise(&ds, &q, 0.01).unwrap();
        assert!(sel.validate(&q));
        assert!(ds.diversity(&sel, Measure::SumPairwise).unwrap() >= 10.0);
    }

    #[test]
    fn local_search_keeps_an_optimal_start() {
        let ds = d1();
        // {0, 10, 1} is optimal.
        let out = local_search_from(&ds, vec![0, 2, 3], 0.01).unwrap();
        assert_eq!(out.selection.indices(), &[0, 2, 3]);
        assert_eq!(out.trace, vec![20.0]);
    }

    #[test]
    fn local_search_trace_is_increasing() {
        let ds = d1();
        let out = local_search_from(&ds, vec![0, 1, 3], 0.01).unwrap();
        assert!(out.trace.windows(2).all(|w| w[1] > w[0]));
        assert!(out.trace.len() > 1);
    }

    #[test]
    fn local_search_rejects_bad_eps() {
        assert!(local_search_sum_pairwise(&d1(), &Quota::new(vec![2, 1]), 0.0).is_err());
    }

    #[test]
    fn fair_greedy_examples() {
        let ds = d1();
        let q = Quota::new(vec![2, 1]);
        let sel = fair_greedy_min_pairwise(&ds, &q).unwrap();
        assert!(sel.validate(&q));
        assert!(ds.diversity(&sel, Measure::MinPairwise).unwrap() <= 4.0);

        // Only color A requested: plain greedy on A.
        let sel = fair_greedy_min_pairwise(&ds, &Quota::new(vec![2, 0])).unwrap();
        assert_eq!(coords(&ds, &sel), vec![0.0, 10.0]);
    }

    #[test]
    fn fair_greedy_forced_selection() {
        let points = (0..3).map(|c| Point::new(c as u64, vec![c as f64], c)).collect();
        let ds = ColoredDataset::new(points, 3, Metric::Euclidean).unwrap();
        let sel = fair_greedy_min_pairwise(&ds, &Quota::uniform(3, 1)).unwrap();
        assert_eq!(sel.indices(), &[0, 1, 2]);
    }

    #[test]
    fn dm_examples() {
        let points = [0.0, 4.0, 10.0]
            .iter()
            .enumerate()
            .map(|(i, &x)| Point::new(i as u64, vec![x], i % 2))
            .collect();
        let ds = ColoredDataset::new(points, 2, Metric::Euclidean).unwrap();
        let cfg = SolverConfig::default();
        let sel = solve_dm(&ds, 2, Measure::MinPairwise, &cfg).unwrap();
        assert_eq!(coords(&ds, &sel), vec![0.0, 10.0]);
        for measure in Measure::ALL {
            let all = solve_dm(&ds, 3, measure, &cfg).unwrap();
            assert_eq!(all.len(), 3);
        }
        assert!(solve_dm(&ds, 4, Measure::SumNn, &cfg).is_err());
    }

    #[test]
    fn infeasible_quota_is_rejected_everywhere() {
        let ds = d1();
        let q = Quota::new(vec![1, 3]);
        let cfg = SolverConfig::default();
        for measure in Measure::ALL {
            assert!(matches!(
                solve_fdm(&ds, &q, measure, &cfg),
                Err(Error::InfeasibleQuota { .. })
            ));
        }
        assert!(brute_force_fdm(&ds, &q, Measure::SumNn).is_err());
    }
}
