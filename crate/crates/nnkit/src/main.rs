//! `nnkit`: generate datasets, benchmark engines, query, cluster, inspect.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nnkit_core::{
    build_knn_graph, connected_components, ClusterParams, KdTree, Linkage, SearchOrder,
    SearchParams,
};

use nnkit::bench::{run_benchmark, BenchConfig, Engine};
use nnkit::gen::{draw_centers, generate, GenMode, GenSpec, SizeSpec};
use nnkit::points_io::{read_points, write_points};
use nnkit::report::{sidecar_path, write_report};
use nnkit::HarnessError;

#[derive(Parser)]
#[command(
    name = "nnkit",
    version,
    about = "Nearest-neighbour toolkit: generate, benchmark, query, cluster"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a deterministic dataset and write it as a points file
    Gen(GenCmd),
    /// Time engines over an (engine, k) grid and write CSV + JSON reports
    Bench(BenchCmd),
    /// List the k nearest neighbours for each point of a query file
    Query(QueryCmd),
    /// Cluster points via their approximate kNN graph
    Cluster(ClusterCmd),
    /// Print structural statistics of the k-d tree over a points file
    Stats(StatsCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Uniform,
    Blobs,
}

#[derive(Clone, Copy, ValueEnum)]
enum LinkageArg {
    Unilateral,
    Mutual,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Standard,
    Priority,
}

/// Flags shared by every command that generates points.
#[derive(Args)]
struct GenOpts {
    /// Number of points (exclusive with --size-mb)
    #[arg(long, conflicts_with = "size_mb")]
    n: Option<usize>,
    /// Dataset budget in MiB at 8 bytes per coordinate
    #[arg(long)]
    size_mb: Option<f64>,
    /// Point dimension
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Generator seed (queries derive their own from it)
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Source distribution
    #[arg(long, value_enum, default_value_t = ModeArg::Uniform)]
    mode: ModeArg,
    /// Low bound of every axis (uniform mode and drawn blob centers)
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    /// High bound of every axis
    #[arg(long, default_value_t = 1000.0)]
    hi: f64,
    /// Blob centers as "x,y;x,y"; drawn from the seed when omitted
    #[arg(long)]
    centers: Option<String>,
    /// Blob standard deviation
    #[arg(long, default_value_t = 10.0)]
    sigma: f64,
    /// How many blob centers to draw when --centers is omitted
    #[arg(long, default_value_t = 4)]
    blobs: usize,
}

impl GenOpts {
    fn to_spec(&self) -> Result<GenSpec, HarnessError> {
        let size = match (self.n, self.size_mb) {
            (Some(n), None) => SizeSpec::Count(n),
            (None, Some(mb)) => SizeSpec::Megabytes(mb),
            (None, None) => {
                return Err(HarnessError::InvalidSpec("one of --n or --size-mb is required".into()))
            }
            (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
        };
        let bounds = vec![(self.lo, self.hi); self.dim];
        let mode = match self.mode {
            ModeArg::Uniform => GenMode::Uniform { bounds },
            ModeArg::Blobs => {
                let centers = match &self.centers {
                    Some(text) => parse_centers(text, self.dim)?,
                    None => {
                        if self.blobs == 0 {
                            return Err(HarnessError::InvalidSpec(
                                "--blobs must be at least 1".into(),
                            ));
                        }
                        draw_centers(self.blobs, &bounds, self.seed)
                    }
                };
                GenMode::Blobs { centers, sigma: self.sigma }
            }
        };
        Ok(GenSpec { mode, size, dim: self.dim, seed: self.seed })
    }
}

fn parse_centers(text: &str, dim: usize) -> Result<Vec<Vec<f64>>, HarnessError> {
    let bad = |msg: String| HarnessError::InvalidSpec(msg);
    let mut centers = Vec::new();
    for part in text.split(';') {
        let center: Vec<f64> = part
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad(format!("bad center {part:?}")))?;
        if center.len() != dim {
            return Err(bad(format!(
                "center {part:?} has {} coordinates, expected {dim}",
                center.len()
            )));
        }
        centers.push(center);
    }
    if centers.is_empty() {
        return Err(bad("--centers must name at least one center".into()));
    }
    Ok(centers)
}

#[derive(Args)]
struct GenCmd {
    #[command(flatten)]
    gen: GenOpts,
    /// Output points file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchCmd {
    #[command(flatten)]
    gen: GenOpts,
    /// k values to time, comma separated
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    k: Vec<usize>,
    /// Approximation factor for the tree engines
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Leaf capacity of the tree engines
    #[arg(long, default_value_t = 8)]
    bucket_size: usize,
    /// Engines to time, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = Engine::ALL)]
    engine: Vec<Engine>,
    /// Number of query points
    #[arg(long, default_value_t = 1000)]
    queries: usize,
    /// Query passes; the fastest is reported
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Output CSV path (the JSON sidecar lands next to it)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct QueryCmd {
    /// Reference points file
    points: PathBuf,
    /// Query points file
    queries: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    #[arg(long, default_value = "kdtree-standard")]
    engine: Engine,
    #[arg(long, default_value_t = 8)]
    bucket_size: usize,
    /// Output listing (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClusterCmd {
    /// Points file to cluster
    points: PathBuf,
    /// Neighbours per point in the kNN graph
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Maximum edge length in true distance (unbounded when omitted)
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, value_enum, default_value_t = LinkageArg::Unilateral)]
    linkage: LinkageArg,
    #[arg(long, default_value_t = 8)]
    bucket_size: usize,
    /// Output label CSV (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsCmd {
    /// Points file to index
    points: PathBuf,
    #[arg(long, default_value_t = 8)]
    bucket_size: usize,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Gen(cmd) => {
            let spec = cmd.gen.to_spec()?;
            let data = generate(&spec)?;
            write_points(&data, &cmd.out)?;
            println!("wrote {} points (dim {}) to {}", data.len(), data.dim(), cmd.out.display());
            Ok(())
        }
        Command::Bench(cmd) => {
            let config = BenchConfig {
                gen: cmd.gen.to_spec()?,
                k_values: cmd.k,
                epsilon: cmd.epsilon,
                bucket_size: cmd.bucket_size,
                query_count: cmd.queries,
                engines: cmd.engine,
                repetitions: cmd.reps,
            };
            let report = run_benchmark(&config)?;
            write_report(&report, &cmd.out)?;
            println!(
                "wrote {} cells to {} (sidecar {})",
                report.cells.len(),
                cmd.out.display(),
                sidecar_path(&cmd.out).display()
            );
            Ok(())
        }
        Command::Query(cmd) => run_query(cmd),
        Command::Cluster(cmd) => run_cluster(cmd),
        Command::Stats(cmd) => {
            let data = read_points(&cmd.points)?;
            let tree = KdTree::build(&data, cmd.bucket_size)?;
            let stats = tree.stats();
            println!("n = {}", data.len());
            println!("dim = {}", data.dim());
            println!("bucket_size = {}", stats.bucket_size);
            println!("node_count = {}", stats.node_count);
            println!("leaf_count = {}", stats.leaf_count);
            println!("depth = {}", stats.depth);
            Ok(())
        }
    }
}

fn open_sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, HarnessError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            HarnessError::Io { path: path.display().to_string(), source: e }
        })?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run_query(cmd: QueryCmd) -> Result<(), HarnessError> {
    let data = read_points(&cmd.points)?;
    let queries = read_points(&cmd.queries)?;
    let mut sink = open_sink(&cmd.out)?;
    let werr = |e| HarnessError::Io { path: "<output>".into(), source: e };

    writeln!(sink, "query_index,rank,point_index,dist2,distance").map_err(werr)?;
    let mut emit = |qi: usize, hits: &[nnkit_core::Neighbor]| -> Result<(), HarnessError> {
        for (rank, h) in hits.iter().enumerate() {
            let d2 = h.dist2.value();
            // sqrt happens here and only here: presentation
            writeln!(sink, "{qi},{rank},{},{d2},{}", h.index, d2.sqrt()).map_err(werr)?;
        }
        Ok(())
    };

    match cmd.engine {
        Engine::Brute => {
            let rows = nnkit_core::brute_knn_batch(&data, &queries, cmd.k)?;
            for (qi, row) in rows.iter().enumerate() {
                emit(qi, row)?;
            }
        }
        Engine::KdTreeStandard | Engine::KdTreePriority => {
            let tree = KdTree::build(&data, cmd.bucket_size)?;
            let order = match cmd.engine {
                Engine::KdTreePriority => SearchOrder::Priority,
                _ => SearchOrder::Standard,
            };
            let params = SearchParams { k: cmd.k, epsilon: cmd.epsilon, order };
            for (qi, q) in queries.points().enumerate() {
                let hits = tree.approx_knn_search(q, &params)?;
                emit(qi, &hits)?;
            }
        }
    }
    Ok(())
}

fn run_cluster(cmd: ClusterCmd) -> Result<(), HarnessError> {
    let data = read_points(&cmd.points)?;
    let mut params = ClusterParams::new(cmd.k).with_epsilon(cmd.epsilon).with_linkage(
        match cmd.linkage {
            LinkageArg::Unilateral => Linkage::Unilateral,
            LinkageArg::Mutual => Linkage::Mutual,
        },
    );
    if let Some(t) = cmd.threshold {
        params = params.with_threshold(t);
    }
    let tree = KdTree::build(&data, cmd.bucket_size)?;
    let graph = build_knn_graph(&data, &params, &tree)?;
    let labeling = connected_components(&graph);

    let mut sink = open_sink(&cmd.out)?;
    let werr = |e| HarnessError::Io { path: "<output>".into(), source: e };
    writeln!(sink, "point_index,label").map_err(werr)?;
    for (i, label) in labeling.labels().iter().enumerate() {
        writeln!(sink, "{i},{label}").map_err(werr)?;
    }
    drop(sink);
    eprintln!("clusters: {}", labeling.cluster_count());
    Ok(())
}
