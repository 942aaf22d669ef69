//! Per-color core-sets over one dataset or over the union of several partitions.

use crate::coreset_nn;
use crate::coreset_sp;
use crate::dataset::{ColoredDataset, Quota};
use crate::error::{Error, Result};
use crate::gmm::farthest_first;
use crate::metric::Measure;

/// Dataset indices kept by the core-set of every color, ascending.
///
/// Sum-pairwise uses the color's own `k_i`, sum-NN the total `k`, and
/// min-pairwise keeps the first `k` farthest-point picks of each color.
/// Colors with no points contribute nothing.
pub fn coreset_indices(dataset: &ColoredDataset, quota: &Quota, measure: Measure) -> Result<Vec<usize>> {
    if quota.len() != dataset.num_colors() {
        return Err(Error::input(format!(
            "quota has {} entries but the dataset has {} colors",
            quota.len(),
            dataset.num_colors()
        )));
    }
    let k = quota.total();
    let mut keep = Vec::new();
    for color in 0..dataset.num_colors() {
        let members = dataset.members(color);
        let dist = |a: usize, b: usize| dataset.dist(members[a], members[b]);
        let positions = match measure {
            Measure::SumPairwise => coreset_sp::coreset_positions(members.len(), quota.get(color), dist),
            Measure::SumNn => coreset_nn::coreset_positions(members.len(), k, dist),
            Measure::MinPairwise if members.is_empty() || k == 0 => Vec::new(),
            Measure::MinPairwise => {
                let mut picks = farthest_first(members.len(), k, 0, dist)?.picks().to_vec();
                picks.sort_unstable();
                picks
            }
        };
        keep.extend(positions.into_iter().map(|p| members[p]));
    }
    keep.sort_unstable();
    Ok(keep)
}

/// Largest core-set [`coreset_indices`] can return for one partition.
pub fn size_bound(quota: &Quota, measure: Measure) -> usize {
    let k = quota.total();
    match measure {
        Measure::SumPairwise => quota.per_color().iter().map(|&ki| coreset_sp::size_bound(ki)).sum(),
        Measure::SumNn => quota.len() * coreset_nn::size_bound(k),
        Measure::MinPairwise => quota.len() * k,
    }
}

/// Core-set of a single dataset as a new dataset.
pub fn color_abiding_coreset(dataset: &ColoredDataset, quota: &Quota, measure: Measure) -> Result<ColoredDataset> {
    Ok(dataset.subset(&coreset_indices(dataset, quota, measure)?))
}

/// Builds the core-set of every color of every partition with the global
/// quota and returns their union. Partitions must agree on colors, dimension
/// and metric, and point ids must be unique across partitions.
pub fn composable_coreset(partitions: &[ColoredDataset], quota: &Quota, measure: Measure) -> Result<ColoredDataset> {
    let Some(first) = partitions.first() else {
        return Err(Error::input("no partitions given"));
    };
    let mut points = Vec::new();
    for (j, part) in partitions.iter().enumerate() {
        if part.num_colors() != first.num_colors() || part.metric() != first.metric() {
            return Err(Error::input(format!("partition {j} disagrees on colors or metric")));
        }
        if !part.is_empty() && !first.is_empty() && part.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: part.dim(),
            });
        }
        for i in coreset_indices(part, quota, measure)? {
            points.push(part.point(i).clone());
        }
    }
    let dim = partitions.iter().find(|p| !p.is_empty()).map_or(0, |p| p.dim());
    ColoredDataset::with_dim(points, first.num_colors(), dim, first.metric())
}

/// Deals points into `parts` partitions by dataset index modulo `parts`.
pub fn split_round_robin(dataset: &ColoredDataset, parts: usize) -> Vec<ColoredDataset> {
    let parts = parts.max(1);
    (0..parts)
        .map(|j| {
            let idx: Vec<usize> = (j..dataset.len()).step_by(parts).collect();
            dataset.subset(&idx)
        })
        .collect()
}
