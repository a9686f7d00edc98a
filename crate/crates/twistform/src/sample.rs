//! Seeded sample points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistform_core::atlas::{ChartModel, ChartPoint};
use twistform_core::Scalar;

/// `count` Gaussian-rational points, cycling through the model's charts.
/// Real and imaginary parts are multiples of 1/64 in [1/2, 2], which keeps
/// points off every coordinate hyperplane.
pub fn seeded_points(model: &ChartModel, count: usize, seed: u64) -> Vec<ChartPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let charts = model.charts();
    let dim = model.dim();
    (0..count)
        .map(|i| {
            let coords = (0..dim)
                .map(|_| {
                    let re = rng.random_range(32..=128);
                    let im = rng.random_range(32..=128);
                    Scalar::ratio(re, 64) + Scalar::ratio(im, 64) * Scalar::i()
                })
                .collect();
            ChartPoint::new(charts[i % charts.len()].clone(), coords)
        })
        .collect()
}
