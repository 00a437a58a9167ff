//! Deterministic instance generators shared by the integration suites.
//! Each suite uses its own subset, so unused-item lints don't apply here.
#![allow(dead_code)]

use nnkit_core::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform points in `[0, 100)^dim`.
pub fn uniform(n: usize, dim: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n * dim).map(|_| rng.gen_range(0.0..100.0)).collect();
    Dataset::from_flat(coords, dim).unwrap()
}

/// Two tight groups of points far apart: half near the origin, half near
/// `(offset, …, offset)`. Exercises deep pruning and duplicate-ish spacing.
pub fn two_groups(n: usize, dim: usize, offset: f64, spread: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity(n * dim);
    for i in 0..n {
        let base = if i % 2 == 0 { 0.0 } else { offset };
        for _ in 0..dim {
            coords.push(base + rng.gen_range(0.0..spread));
        }
    }
    Dataset::from_flat(coords, dim).unwrap()
}

/// Query points drawn over a slightly larger box than [`uniform`] so some
/// queries land outside the data's bounding box.
pub fn queries(count: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xdead_beef);
    (0..count)
        .map(|_| (0..dim).map(|_| rng.gen_range(-20.0..120.0)).collect())
        .collect()
}
