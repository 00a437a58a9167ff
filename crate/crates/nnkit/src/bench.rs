//! The engine benchmark: one timed cell per (engine, k) pair over a shared
//! generated dataset and query set. Query time excludes index construction
//! and is the best of the configured repetitions; the clock is monotonic.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nnkit_core::{brute_knn, Dataset, KdTree, SearchOrder, SearchParams};
use serde::{Deserialize, Serialize};

use crate::gen::{self, GenSpec};
use crate::HarnessError;

/// Query engines the benchmark can time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Engine {
    #[serde(rename = "brute")]
    Brute,
    #[serde(rename = "kdtree-standard")]
    KdTreeStandard,
    #[serde(rename = "kdtree-priority")]
    KdTreePriority,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Brute, Engine::KdTreeStandard, Engine::KdTreePriority];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Brute => "brute",
            Engine::KdTreeStandard => "kdtree-standard",
            Engine::KdTreePriority => "kdtree-priority",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "brute" => Ok(Engine::Brute),
            "kdtree-standard" => Ok(Engine::KdTreeStandard),
            "kdtree-priority" => Ok(Engine::KdTreePriority),
            other => Err(HarnessError::UnknownEngine(other.to_string())),
        }
    }
}

/// One benchmark run: a dataset recipe plus the engine/k grid to time on it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchConfig {
    pub gen: GenSpec,
    pub k_values: Vec<usize>,
    pub epsilon: f64,
    pub bucket_size: usize,
    pub query_count: usize,
    pub engines: Vec<Engine>,
    pub repetitions: usize,
}

/// One (engine, k) measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchCell {
    pub engine: Engine,
    pub k: usize,
    pub epsilon: f64,
    pub n: usize,
    pub d: usize,
    pub bucket_size: usize,
    pub build_seconds: f64,
    pub total_query_seconds: f64,
    pub mean_query_seconds: f64,
    pub leaf_points_examined: u64,
    pub checksum: f64,
}

/// Provenance recorded next to the numbers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchMeta {
    pub timestamp: String,
    pub machine: String,
    pub rng: String,
    pub query_seed: u64,
    pub brute_strategy: String,
    pub clock: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub meta: BenchMeta,
    pub cells: Vec<BenchCell>,
}

/// Runs every (engine, k) cell in config order. Any engine failure aborts
/// the run with an error naming the cell.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport, HarnessError> {
    validate(config)?;
    let data = gen::generate(&config.gen)?;
    if data.is_empty() {
        return Err(HarnessError::InvalidSpec("benchmark dataset is empty".into()));
    }
    if let Some(&k) = config.k_values.iter().find(|&&k| k < 1 || k > data.len()) {
        return Err(HarnessError::InvalidSpec(format!(
            "k = {k} outside 1..={} for this dataset",
            data.len()
        )));
    }
    let queries = gen::generate(&config.gen.query_companion(config.query_count))?;

    let mut cells = Vec::with_capacity(config.engines.len() * config.k_values.len());
    for &engine in &config.engines {
        for &k in &config.k_values {
            let cell = run_cell(&data, &queries, engine, k, config).map_err(|e| {
                HarnessError::Cell { engine, k, source: Box::new(e) }
            })?;
            cells.push(cell);
        }
    }

    Ok(BenchReport {
        config: config.clone(),
        meta: BenchMeta {
            timestamp: chrono::Utc::now().to_rfc3339(),
            machine: format!("{}-{}", std::env::consts::OS, std::env::consts::ARCH),
            rng: gen::RNG_NAME.to_string(),
            query_seed: gen::query_seed(config.gen.seed),
            brute_strategy: "full-row-selection".to_string(),
            clock: "monotonic".to_string(),
        },
        cells,
    })
}

fn validate(config: &BenchConfig) -> Result<(), HarnessError> {
    let bad = |msg: &str| Err(HarnessError::InvalidSpec(msg.into()));
    if config.k_values.is_empty() {
        return bad("k_values must not be empty");
    }
    if config.engines.is_empty() {
        return bad("engines must not be empty");
    }
    if config.query_count < 1 {
        return bad("query_count must be at least 1");
    }
    if config.repetitions < 1 {
        return bad("repetitions must be at least 1");
    }
    if config.bucket_size < 1 {
        return bad("bucket_size must be at least 1");
    }
    if !config.epsilon.is_finite() || config.epsilon < 0.0 {
        return bad("epsilon must be finite and non-negative");
    }
    Ok(())
}

fn run_cell(
    data: &Dataset,
    queries: &Dataset,
    engine: Engine,
    k: usize,
    config: &BenchConfig,
) -> Result<BenchCell, HarnessError> {
    let mut build_seconds = 0.0;
    let tree = match engine {
        Engine::Brute => None,
        Engine::KdTreeStandard | Engine::KdTreePriority => {
            let t0 = Instant::now();
            let tree = KdTree::build(data, config.bucket_size)?;
            build_seconds = t0.elapsed().as_secs_f64();
            Some(tree)
        }
    };
    let params = SearchParams {
        k,
        epsilon: config.epsilon,
        order: match engine {
            Engine::KdTreePriority => SearchOrder::Priority,
            _ => SearchOrder::Standard,
        },
    };

    let mut total_query_seconds = f64::INFINITY;
    let mut checksum = 0.0;
    let mut examined = 0u64;
    for _ in 0..config.repetitions {
        let mut rep_checksum = 0.0;
        let mut rep_examined = 0u64;
        let t0 = Instant::now();
        for q in queries.points() {
            match (&tree, engine) {
                (None, _) => {
                    let hits = brute_knn(data, q, k)?;
                    for h in &hits {
                        rep_checksum += h.dist2.value();
                    }
                    rep_examined += data.len() as u64;
                }
                (Some(tree), _) => {
                    let (hits, stats) = tree.approx_knn_search_counted(q, &params)?;
                    for h in &hits {
                        rep_checksum += h.dist2.value();
                    }
                    rep_examined += stats.leaf_points_examined;
                }
            }
        }
        let elapsed = t0.elapsed().as_secs_f64();
        if elapsed < total_query_seconds {
            total_query_seconds = elapsed;
        }
        // identical every repetition; keep the last
        checksum = rep_checksum;
        examined = rep_examined;
    }

    Ok(BenchCell {
        engine,
        k,
        epsilon: config.epsilon,
        n: data.len(),
        d: data.dim(),
        bucket_size: config.bucket_size,
        build_seconds,
        total_query_seconds,
        mean_query_seconds: total_query_seconds / queries.len() as f64,
        leaf_points_examined: examined,
        checksum,
    })
}
