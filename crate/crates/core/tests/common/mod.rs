#![allow(dead_code)]

use fairdiv::{ColoredDataset, Metric, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform points in `[0, 10]^dim`; ids run in color order.
pub fn random_dataset(rng: &mut ChaCha8Rng, sizes: &[usize], dim: usize) -> ColoredDataset {
    let mut points = Vec::new();
    for (color, &n) in sizes.iter().enumerate() {
        for _ in 0..n {
            let vec = (0..dim).map(|_| rng.random_range(0.0..10.0)).collect();
            points.push(Point::new(points.len() as u64, vec, color));
        }
    }
    ColoredDataset::new(points, sizes.len(), Metric::Euclidean).unwrap()
}

pub fn line(coords: &[(f64, usize)], m: usize) -> ColoredDataset {
    let points = coords
        .iter()
        .enumerate()
        .map(|(i, &(x, c))| Point::new(i as u64, vec![x], c))
        .collect();
    ColoredDataset::new(points, m, Metric::Euclidean).unwrap()
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}

/// Size of a maximum matching in a bipartite graph given as left-side adjacency lists.
pub fn max_matching(adj: &[Vec<usize>], right: usize) -> usize {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    (0..adj.len())
        .filter(|&u| augment(u, adj, &mut vec![false; right], &mut owner))
        .count()
}
