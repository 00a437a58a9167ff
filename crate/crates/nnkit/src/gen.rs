//! Deterministic dataset generation. One spec, one byte sequence, every run,
//! every platform: the stream is ChaCha8 keyed by the spec seed.

use nnkit_core::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Name of the generator stream, recorded in report metadata.
pub const RNG_NAME: &str = "chacha8";

/// Added to a dataset seed to derive the matching query-set seed, so the two
/// streams never overlap.
pub const QUERY_SEED_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

/// Seed for the query set paired with a dataset seed.
pub fn query_seed(seed: u64) -> u64 {
    seed.wrapping_add(QUERY_SEED_OFFSET)
}

/// How many points to generate: an explicit count, or a storage budget in
/// MiB at 8 bytes per coordinate (n = floor(mb * 2^20 / (8 * dim))).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeSpec {
    Count(usize),
    Megabytes(f64),
}

/// Source distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GenMode {
    /// Independent uniform draws per axis over [low, high).
    Uniform { bounds: Vec<(f64, f64)> },
    /// Isotropic Gaussians at the given centers; points are dealt to centers
    /// round-robin, so the shares stay within one of equal.
    Blobs { centers: Vec<Vec<f64>>, sigma: f64 },
}

/// A reproducible dataset recipe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub mode: GenMode,
    pub size: SizeSpec,
    pub dim: usize,
    pub seed: u64,
}

impl GenSpec {
    /// The resolved point count (floor when converting from MiB).
    pub fn point_count(&self) -> usize {
        match self.size {
            SizeSpec::Count(n) => n,
            SizeSpec::Megabytes(mb) => {
                (mb * 1_048_576.0 / (8.0 * self.dim as f64)).floor() as usize
            }
        }
    }

    /// The spec for this dataset's query companion: same distribution, same
    /// dimension, disjoint seed.
    pub fn query_companion(&self, query_count: usize) -> GenSpec {
        GenSpec {
            mode: self.mode.clone(),
            size: SizeSpec::Count(query_count),
            dim: self.dim,
            seed: query_seed(self.seed),
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::InvalidSpec(msg));
        if self.dim == 0 {
            return bad("dim must be at least 1".into());
        }
        if let SizeSpec::Megabytes(mb) = self.size {
            if !mb.is_finite() || mb <= 0.0 {
                return bad(format!("size-mb must be positive and finite, got {mb}"));
            }
        }
        match &self.mode {
            GenMode::Uniform { bounds } => {
                if bounds.len() != self.dim {
                    return bad(format!(
                        "uniform mode needs {} bounds, got {}",
                        self.dim,
                        bounds.len()
                    ));
                }
                for &(lo, hi) in bounds {
                    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                        return bad(format!("bad uniform bounds [{lo}, {hi})"));
                    }
                }
            }
            GenMode::Blobs { centers, sigma } => {
                if centers.is_empty() {
                    return bad("blobs mode needs at least one center".into());
                }
                if !sigma.is_finite() || *sigma <= 0.0 {
                    return bad(format!("sigma must be positive and finite, got {sigma}"));
                }
                for c in centers {
                    if c.len() != self.dim {
                        return bad(format!(
                            "blob center has {} coordinates, expected {}",
                            c.len(),
                            self.dim
                        ));
                    }
                    if c.iter().any(|v| !v.is_finite()) {
                        return bad("blob centers must be finite".into());
                    }
                }
            }
        }
        Ok(())
    }
}

/// Generates the dataset described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<Dataset, HarnessError> {
    spec.validate()?;
    let n = spec.point_count();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut coords = Vec::with_capacity(n * spec.dim);
    match &spec.mode {
        GenMode::Uniform { bounds } => {
            for _ in 0..n {
                for &(lo, hi) in bounds {
                    coords.push(rng.gen_range(lo..hi));
                }
            }
        }
        GenMode::Blobs { centers, sigma } => {
            for i in 0..n {
                let center = &centers[i % centers.len()];
                for d in 0..spec.dim {
                    let z: f64 = rng.sample(StandardNormal);
                    coords.push(center[d] + sigma * z);
                }
            }
        }
    }
    Ok(Dataset::from_flat(coords, spec.dim)?)
}

/// Draws blob centers uniformly from `bounds` when the caller gave none.
/// Seeded separately from the point stream so datasets and their centers
/// stay independently reproducible.
pub fn draw_centers(count: usize, bounds: &[(f64, f64)], seed: u64) -> Vec<Vec<f64>> {
    const CENTER_SEED_OFFSET: u64 = 0x517c_c1b7_2722_0a95;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(CENTER_SEED_OFFSET));
    (0..count)
        .map(|_| bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect())
        .collect()
}
