//! Seeded synthetic data: a Gaussian mixture per color.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{ColoredDataset, Point};
use crate::error::{Error, Result};
use crate::metric::Metric;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n: usize,
    pub dim: usize,
    pub colors: usize,
    /// Mixture components per color.
    pub clusters: usize,
    /// Standard deviation of every component.
    pub spread: f64,
    /// Component centers are uniform in `[-extent, extent]^dim`.
    pub extent: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n: 1000,
            dim: 8,
            colors: 4,
            clusters: 3,
            spread: 1.0,
            extent: 10.0,
            seed: 0,
        }
    }
}

/// Points `0..n` with ids equal to their index. Colors get `n / colors` points
/// each, the first `n % colors` colors one more.
pub fn gaussian_mixture(spec: &SyntheticSpec, metric: Metric) -> Result<ColoredDataset> {
    if spec.colors == 0 || spec.clusters == 0 || spec.dim == 0 {
        return Err(Error::input("colors, clusters and dim must all be positive"));
    }
    if !(spec.spread >= 0.0 && spec.spread.is_finite()) || !(spec.extent >= 0.0 && spec.extent.is_finite()) {
        return Err(Error::input("spread and extent must be finite and non-negative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, spec.spread).expect("validated spread");
    let centers: Vec<Vec<Vec<f64>>> = (0..spec.colors)
        .map(|_| {
            (0..spec.clusters)
                .map(|_| (0..spec.dim).map(|_| rng.random_range(-spec.extent..=spec.extent)).collect())
                .collect()
        })
        .collect();

    let mut points = Vec::with_capacity(spec.n);
    for id in 0..spec.n {
        let color = id % spec.colors;
        let center = &centers[color][rng.random_range(0..spec.clusters)];
        let vec = center.iter().map(|c| c + noise.sample(&mut rng)).collect();
        points.push(Point::new(id as u64, vec, color));
    }
    ColoredDataset::with_dim(points, spec.colors, spec.dim, metric)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_data() {
        let spec = SyntheticSpec {
            n: 50,
            seed: 9,
            ..SyntheticSpec::default()
        };
        let a = gaussian_mixture(&spec, Metric::Euclidean).unwrap();
        let b = gaussian_mixture(&spec, Metric::Euclidean).unwrap();
        assert_eq!(a.points(), b.points());
        let c = gaussian_mixture(&SyntheticSpec { seed: 10, ..spec }, Metric::Euclidean).unwrap();
        assert_ne!(a.points(), c.points());
    }

    #[test]
    fn colors_are_balanced() {
        let spec = SyntheticSpec {
            n: 10,
            colors: 4,
            ..SyntheticSpec::default()
        };
        let ds = gaussian_mixture(&spec, Metric::Euclidean).unwrap();
        assert_eq!(ds.color_counts(), vec![3, 3, 2, 2]);
        assert_eq!(ds.dim(), 8);
    }
}
