//! `skelinterp`: generate point clouds, compress cluster pairs, run sweeps
//! and compute oracle ranks. Results go to stdout as `key=value` lines,
//! logs go to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skelinterp::bench::{
    aggregate_means, run_sweep, write_records_csv, write_tercile_csvs, SweepConfig,
};
use skelinterp::geometry::{
    distance_ratio, generate_disk_pair, generate_facing_cubes, generate_torus, load_point_cloud,
    partition, save_point_cloud, Cluster, PointCloud, DEFAULT_DISK_SEPARATION, DEFAULT_TORUS_MAJOR,
    DEFAULT_TORUS_MINOR,
};
use skelinterp::initsel::{Strategy, WeightMode};
use skelinterp::kernels::{KernelKind, KernelSpec};
use skelinterp::linalg::{eps_rank, singular_values_truncated};
use skelinterp::si::{adaptive_si, recompress, AdaptiveConfig, Scaling, ToleranceConfig};
use skelinterp::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;
const EXIT_INADMISSIBLE: u8 = 4;
const EXIT_IO: u8 = 5;
const EXIT_TOO_LARGE: u8 = 6;

/// Dense blocks above this many entries are refused.
const DEFAULT_MAX_ELEMENTS: usize = 4_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "skelinterp",
    version,
    about = "Skeletonized interpolation of kernel blocks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a synthetic labelled point cloud.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Compress the block between two clusters.
    Compress(CompressArgs),
    /// Sweep every admissible pair over strategies and tolerances.
    Sweep(SweepArgs),
    /// Frobenius ε*-rank of the assembled block between two clusters.
    Oracle(OracleArgs),
}

#[derive(Subcommand, Debug)]
enum GenerateKind {
    /// Torus surface points partitioned into clusters.
    Torus {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 16)]
        clusters: usize,
        #[arg(long, default_value_t = DEFAULT_TORUS_MAJOR)]
        major: f64,
        #[arg(long, default_value_t = DEFAULT_TORUS_MINOR)]
        minor: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Two facing m×m×m lattice cubes.
    Cubes {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        gap: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Two planar disks.
    Disks {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_DISK_SEPARATION)]
        separation: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct BlockArgs {
    /// Labelled point file.
    cloud: PathBuf,
    #[arg(long)]
    i: usize,
    #[arg(long)]
    j: usize,
    #[arg(long, default_value = "inv_r")]
    kernel: KernelKind,
    #[arg(long)]
    eps_star: f64,
    /// Largest dense block, in entries.
    #[arg(long, default_value_t = DEFAULT_MAX_ELEMENTS)]
    max_elements: usize,
}

#[derive(Args, Debug)]
struct LoopArgs {
    #[arg(long, default_value_t = 1.1)]
    omega: f64,
    /// Defaults to 8 for chebyshev and 1 otherwise.
    #[arg(long)]
    r0_init: Option<usize>,
    #[arg(long)]
    r0_cap: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "identity")]
    weights: WeightMode,
    #[arg(long, default_value = "sqrt")]
    scaling: Scaling,
}

#[derive(Args, Debug)]
struct CompressArgs {
    #[command(flatten)]
    block: BlockArgs,
    #[arg(long, default_value = "mdv")]
    strategy: Strategy,
    #[command(flatten)]
    growth: LoopArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    cloud: PathBuf,
    #[arg(long, default_value = "inv_r")]
    kernel: KernelKind,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "chebyshev,sphere,mdv,random"
    )]
    strategies: Vec<Strategy>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1e-3,1e-4,1e-5,1e-6,1e-7,1e-8,1e-9,1e-10"
    )]
    eps_list: Vec<f64>,
    #[command(flatten)]
    growth: LoopArgs,
    /// Pairs per tercile; 0 keeps every pair.
    #[arg(long, default_value_t = skelinterp::bench::DEFAULT_SAMPLE)]
    sample: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output stem: writes `<out>_near.csv`, `<out>_mid.csv`, `<out>_far.csv`
    /// and `<out>_records.csv`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    block: BlockArgs,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } | Error::Parse { .. } => EXIT_IO,
            Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
            _ => EXIT_USAGE,
        };
        Self::new(code, e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate { kind } => cmd_generate(kind),
        Command::Compress(a) => cmd_compress(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_generate(kind: GenerateKind) -> CmdResult {
    let (cloud, out) = match kind {
        GenerateKind::Torus {
            n,
            clusters,
            major,
            minor,
            out,
        } => {
            let t = generate_torus(n, major, minor)?;
            let labels = partition(&t, clusters)?;
            (t.with_labels(labels)?, out)
        }
        GenerateKind::Cubes { m, gap, out } => {
            let (x, y) = generate_facing_cubes(m, gap)?;
            (x.concat(&y)?, out)
        }
        GenerateKind::Disks { n, separation, out } => {
            let (x, y) = generate_disk_pair(n, separation)?;
            (x.concat(&y)?, out)
        }
    };
    save_point_cloud(&cloud, &out)?;
    let labels = cloud.labels().map_or(0, |l| {
        let mut v = l.to_vec();
        v.sort_unstable();
        v.dedup();
        v.len()
    });
    println!("points={}", cloud.len());
    println!("dim={}", cloud.dim());
    println!("clusters={labels}");
    println!("out={}", out.display());
    Ok(())
}

fn load_clusters(path: &PathBuf) -> Result<(PointCloud, Vec<(usize, Cluster)>), Failure> {
    let cloud = load_point_cloud(path)?;
    let groups = cloud.label_groups()?;
    let clusters = cloud.clusters()?;
    Ok((
        cloud,
        groups.into_iter().map(|(l, _)| l).zip(clusters).collect(),
    ))
}

fn cluster_pair(b: &BlockArgs) -> Result<(Cluster, Cluster, f64), Failure> {
    let (_, clusters) = load_clusters(&b.cloud)?;
    let find = |label: usize| {
        clusters
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| Failure::new(EXIT_USAGE, format!("no cluster labelled {label}")))
    };
    if b.i == b.j {
        return Err(Failure::new(EXIT_USAGE, "--i and --j must differ"));
    }
    let (cx, cy) = (find(b.i)?, find(b.j)?);
    let elements = cx.len().saturating_mul(cy.len());
    if elements > b.max_elements {
        return Err(Failure::new(
            EXIT_TOO_LARGE,
            format!(
                "block {}x{} has {elements} entries, above the cap of {}",
                cx.len(),
                cy.len(),
                b.max_elements
            ),
        ));
    }
    let dr = distance_ratio(&cx, &cy)?;
    Ok((cx, cy, dr))
}

fn adaptive_config(eps_star: f64, g: &LoopArgs) -> AdaptiveConfig {
    AdaptiveConfig {
        tolerance: ToleranceConfig {
            eps_star,
            eps: None,
            omega: g.omega,
            r0_init: g.r0_init,
            r0_cap: g.r0_cap,
        },
        scaling: g.scaling,
        weights: g.weights,
    }
}

fn cmd_compress(a: CompressArgs) -> CmdResult {
    let (cx, cy, dr) = cluster_pair(&a.block)?;
    if dr < 1.0 {
        return Err(Failure::new(
            EXIT_INADMISSIBLE,
            format!("distance ratio {dr} is below 1, the pair is not admissible"),
        ));
    }
    let kernel = KernelSpec::new(a.block.kernel);
    let cfg = adaptive_config(a.block.eps_star, &a.growth);
    cfg.tolerance.validate()?;
    println!("i={}", a.block.i);
    println!("j={}", a.block.j);
    println!("dr={dr}");
    println!("kernel={}", a.block.kernel);
    println!("strategy={}", a.strategy);
    println!("eps_star={}", a.block.eps_star);
    match adaptive_si(&kernel, &cx, &cy, a.strategy, &cfg, a.growth.seed) {
        Ok(out) => {
            let last = out.last();
            let low = recompress(&out.factorization, a.block.eps_star)?;
            let kmat = kernel.assemble(&cx.points, &cy.points)?;
            let rerr = kmat.sub(&low.reconstruct()).fro_norm() / kmat.fro_norm();
            println!("converged=true");
            println!("r0={}", last.r0_achieved);
            println!("r0_requested={}", last.r0_requested);
            println!("r1={}", out.factorization.rank());
            println!("r2={}", low.r2);
            println!("error={:e}", out.error);
            println!("recompressed_error={rerr:e}");
            print_trace(&out.trace);
            Ok(())
        }
        Err(Error::NoConvergence {
            r0_cap,
            last_error,
            trace,
        }) => {
            println!("converged=false");
            println!("r0_cap={r0_cap}");
            if let Some(last) = trace.last() {
                println!("r0={}", last.r0_achieved);
                println!("r1={}", last.r1);
            }
            println!("error={last_error:e}");
            print_trace(&trace);
            Err(Failure::new(
                EXIT_NO_CONVERGENCE,
                format!("no convergence within r0 cap {r0_cap}"),
            ))
        }
        Err(e) => Err(e.into()),
    }
}

fn print_trace(trace: &[skelinterp::si::TraceEntry]) {
    println!("passes={}", trace.len());
    let t: Vec<String> = trace
        .iter()
        .map(|e| {
            format!(
                "{}:{}:{}:{:e}",
                e.r0_requested, e.r0_achieved, e.r1, e.error
            )
        })
        .collect();
    println!("trace={}", t.join(";"));
}

fn cmd_sweep(a: SweepArgs) -> CmdResult {
    let (cloud, clusters) = load_clusters(&a.cloud)?;
    if clusters.len() < 2 {
        return Err(Failure::new(
            EXIT_USAGE,
            "a sweep needs at least two clusters",
        ));
    }
    if a.strategies.is_empty() || a.eps_list.is_empty() {
        return Err(Failure::new(EXIT_USAGE, "empty strategy or tolerance list"));
    }
    let clusters: Vec<Cluster> = clusters.into_iter().map(|(_, c)| c).collect();
    let mut cfg = SweepConfig::new(KernelSpec::new(a.kernel));
    cfg.strategies = a.strategies.clone();
    cfg.eps_list = a.eps_list.clone();
    cfg.omega = a.growth.omega;
    cfg.r0_init = a.growth.r0_init;
    cfg.r0_cap = a.growth.r0_cap;
    cfg.scaling = a.growth.scaling;
    cfg.weights = a.growth.weights;
    cfg.seed = a.growth.seed;
    cfg.sample = (a.sample > 0).then_some(a.sample);
    cfg.jobs = a.jobs;
    log::info!(
        "sweep over {} points in {} clusters",
        cloud.len(),
        clusters.len()
    );
    let records = run_sweep(&clusters, &cfg)?;
    let paths = write_tercile_csvs(&aggregate_means(&records), &a.out)?;
    let mut name = a.out.file_name().unwrap_or_default().to_os_string();
    name.push("_records.csv");
    let rec_path = a.out.with_file_name(name);
    write_records_csv(&records, &rec_path)?;
    let converged = records.iter().filter(|r| r.converged).count();
    println!("records={}", records.len());
    println!("converged={converged}");
    for p in &paths {
        println!("table={}", p.display());
    }
    println!("records_file={}", rec_path.display());
    Ok(())
}

fn cmd_oracle(a: OracleArgs) -> CmdResult {
    let (cx, cy, dr) = cluster_pair(&a.block)?;
    if !(a.block.eps_star >= 0.0) {
        return Err(Failure::new(EXIT_USAGE, "--eps-star must be nonnegative"));
    }
    let kmat = KernelSpec::new(a.block.kernel).assemble(&cx.points, &cy.points)?;
    let sigma = singular_values_truncated(&kmat, 1e-3 * a.block.eps_star)?;
    let rank = eps_rank(&sigma, a.block.eps_star, kmat.fro_norm());
    println!("rows={}", kmat.rows());
    println!("cols={}", kmat.cols());
    println!("dr={dr}");
    println!("fro_norm={:e}", kmat.fro_norm());
    println!("rank={rank}");
    Ok(())
}
