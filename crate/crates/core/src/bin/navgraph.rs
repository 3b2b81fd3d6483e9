use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use navgraph::bench::{build_time_slopes, run_bench_with, write_csv, BenchConfig};
use navgraph::dataset::{load_graph, load_matrix, load_points, save_graph, save_matrix, save_points};
use navgraph::instances::{gen_covering_euclidean, gen_covering_general, gen_planted_cover, gen_points, PointKind};
use navgraph::navbuild::{build_with_index, Algorithm, BuildConfig, Preset};
use navgraph::setcover::{
    check_cover, construct_limited_vote_cover, construct_vote_cover, cvc_stop_early, greedy_set_cover, Attempt,
    CoverSolution, ExplicitInstance, VoteParams, VoteThreshold,
};
use navgraph::verify::{greedy_route, verify_navigable, verify_strength};
use navgraph::{DistanceOracle, Metric, PermutationIndex, Strength};

/// Build and check navigable search graphs.
#[derive(Parser)]
#[command(name = "navgraph", version)]
struct Cli {
    /// Worker threads for building and verifying (default: all cores).
    #[arg(long, global = true, env = "NAVGRAPH_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a graph and write it as an edge list.
    Build(BuildArgs),
    /// Check a graph; prints violating pairs "i j" and exits 1 if any.
    Verify(VerifyArgs),
    /// Greedy-route from one point towards another and print the path.
    Route(RouteArgs),
    /// Generate point sets, distance matrices and set-cover instances.
    Gen(GenArgs),
    /// Solve a set-cover instance file.
    Setcover(SetcoverArgs),
    /// Time builders over sizes and seeds; writes CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    L2,
    L2sq,
    L1,
    /// `--input` is a distance matrix (CSV, or binary with a .bin extension).
    Matrix,
}

#[derive(Args)]
struct Input {
    /// Points as CSV, or a distance matrix with `--metric matrix`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "l2")]
    metric: MetricArg,
    /// Skip one header line of the points CSV.
    #[arg(long)]
    header: bool,
}

impl Input {
    fn load(&self) -> anyhow::Result<DistanceOracle> {
        let ctx = || format!("loading {}", self.input.display());
        let metric = match self.metric {
            MetricArg::Matrix => return load_matrix(&self.input).with_context(ctx),
            MetricArg::L2 => Metric::Euclidean,
            MetricArg::L2sq => Metric::SquaredEuclidean,
            MetricArg::L1 => Metric::Manhattan,
        };
        let points = load_points(&self.input, self.header).with_context(ctx)?;
        DistanceOracle::vector(points, metric).with_context(ctx)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Full,
    Simple,
    Clique,
    Greedy,
    Alpha,
    Tau,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value = "full")]
    algo: AlgoArg,
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Write the build report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value = "analyzed")]
    preset: Preset,
    /// Overrides the preset's vote threshold factor `c` in `⌈c ln n⌉`.
    #[arg(long)]
    vote_factor: Option<f64>,
    /// Audit clique coverage and the voting pools while building (slow).
    #[arg(long)]
    checked: bool,
    /// Write the permutation index, one row per line.
    #[arg(long)]
    dump_index: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Nav,
    Alpha,
    Tau,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "nav")]
    property: Property,
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    /// Print at most this many violations.
    #[arg(long)]
    max_violations: Option<usize>,
}

#[derive(Args)]
struct RouteArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    start: usize,
    #[arg(long)]
    query: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Line,
    Grid,
    Uniform,
    Clusters,
    CoveringGeneral,
    CoveringEuclidean,
    PlantedCover,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Point count.
    #[arg(long, default_value_t = 1024)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 8)]
    clusters: usize,
    /// Set-cover elements (planted and covering kinds).
    #[arg(long, default_value_t = 8)]
    elements: usize,
    /// Set-cover sets (planted and covering kinds).
    #[arg(long, default_value_t = 6)]
    sets: usize,
    /// Planted optimum (planted and covering kinds).
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Solution points of a covering point set.
    #[arg(long, default_value_t = 1)]
    solutions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Points CSV, distance matrix (covering-general; binary if .bin) or
    /// set-cover instance (planted-cover).
    #[arg(long)]
    out: PathBuf,
    /// Covering kinds: also write the underlying set-cover instance.
    #[arg(long)]
    instance_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverAlgo {
    Greedy,
    Vote,
    Limited,
    Lazy,
}

#[derive(Args)]
struct SetcoverArgs {
    /// Instance file: "n m", then one line of element ids per set.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "greedy")]
    algo: CoverAlgo,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop early once voting exceeds this many sets (vote and lazy only);
    /// exits 1 when the budget is exceeded.
    #[arg(long)]
    budget: Option<f64>,
    /// Vote threshold factor `c` in `⌈c (ln m + ln n)⌉`.
    #[arg(long, default_value_t = 100.0)]
    vote_factor: f64,
    /// Write cover statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated: full, simple, clique, greedy, alpha:A, tau:T.
    #[arg(long, value_delimiter = ',', default_value = "full")]
    algos: Vec<Algorithm>,
    #[arg(long, value_delimiter = ',', default_value = "512,1024,2048,4096")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    #[arg(long, default_value = "uniform")]
    kind: PointKind,
    #[arg(long, default_value_t = 8)]
    dim: usize,
    #[arg(long, value_enum, default_value = "l2")]
    metric: MetricArg,
    #[arg(long, default_value = "analyzed")]
    preset: Preset,
    /// Skip verification (rows then report verified=false).
    #[arg(long)]
    no_verify: bool,
    /// Print the log-log slope of build time against n per algorithm.
    #[arg(long)]
    slopes: bool,
    /// CSV destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure of the checked property itself, as opposed to bad input.
#[derive(Debug)]
struct CheckFailed(String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<CheckFailed>() => {
            eprintln!("navgraph: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("navgraph: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.cmd {
        Cmd::Build(a) => cmd_build(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Route(a) => cmd_route(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Setcover(a) => cmd_setcover(a),
        Cmd::Bench(a) => cmd_bench(a),
    }
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn cmd_build(a: BuildArgs) -> anyhow::Result<()> {
    let oracle = a.input.load()?;
    let algo = match a.algo {
        AlgoArg::Full => Algorithm::Full,
        AlgoArg::Simple => Algorithm::Simple,
        AlgoArg::Clique => Algorithm::Clique,
        AlgoArg::Greedy => Algorithm::Greedy,
        AlgoArg::Alpha => Algorithm::Alpha(a.alpha),
        AlgoArg::Tau => Algorithm::Tau(a.tau),
    };
    let cfg = BuildConfig {
        seed: a.seed,
        preset: a.preset,
        vote_factor: a.vote_factor,
        checked: a.checked,
        checked_voting: a.checked,
        ..BuildConfig::default()
    };
    let start = std::time::Instant::now();
    let idx = PermutationIndex::build(&oracle);
    if let Some(path) = &a.dump_index {
        idx.dump(create(path)?)?;
    }
    let mut built = build_with_index(&idx, &oracle, algo, &cfg)?;
    built.report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    save_graph(&built.graph, &a.out)?;
    if let Some(path) = &a.report {
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, &built.report)?;
        writeln!(w)?;
        w.flush()?;
    }
    let r = &built.report;
    eprintln!(
        "{}: n={} edges={} avg_degree={:.2} max_degree={} in {:.1} ms",
        r.algorithm, r.n, r.edges, r.avg_degree, r.max_degree, r.wall_ms
    );
    if r.clique_violations > 0 {
        bail!(CheckFailed(format!("{} clique audits failed", r.clique_violations)));
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<()> {
    let oracle = a.input.load()?;
    let graph = load_graph(&a.graph, oracle.len()).with_context(|| format!("loading {}", a.graph.display()))?;
    let violations = match a.property {
        Property::Nav => verify_navigable(&oracle, &graph)?,
        Property::Alpha => verify_strength(&oracle, &graph, Strength::Alpha(a.alpha))?,
        Property::Tau => verify_strength(&oracle, &graph, Strength::Tau(a.tau))?,
    };
    let mut out = BufWriter::new(io::stdout().lock());
    for v in violations.iter().take(a.max_violations.unwrap_or(usize::MAX)) {
        writeln!(out, "{} {}", v.source, v.target)?;
    }
    out.flush()?;
    if violations.is_empty() {
        eprintln!("ok: no violations among {} ordered pairs", oracle.len() * oracle.len().saturating_sub(1));
        Ok(())
    } else {
        Err(CheckFailed(format!("{} violating pairs", violations.len())).into())
    }
}

fn cmd_route(a: RouteArgs) -> anyhow::Result<()> {
    let oracle = a.input.load()?;
    let n = oracle.len();
    if a.start >= n || a.query >= n {
        bail!(navgraph::Error::Input(format!("start and query must be below {n}")));
    }
    let graph = load_graph(&a.graph, n).with_context(|| format!("loading {}", a.graph.display()))?;
    let path = greedy_route(&oracle, &graph, a.start, a.query);
    let text: Vec<String> = path.iter().map(usize::to_string).collect();
    println!("{}", text.join(" "));
    if path.last() != Some(&a.query) {
        eprintln!("stopped at local minimum {} before reaching {}", path.last().unwrap(), a.query);
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> anyhow::Result<()> {
    let point_kind = match a.kind {
        GenKind::Line => Some(PointKind::Line),
        GenKind::Grid => Some(PointKind::Grid),
        GenKind::Uniform => Some(PointKind::Uniform),
        GenKind::Clusters => Some(PointKind::GaussianClusters { clusters: a.clusters }),
        _ => None,
    };
    if let Some(kind) = point_kind {
        let points = gen_points(kind, a.n, a.dim, a.seed)?;
        save_points(&points, &a.out)?;
        eprintln!("wrote {} points of dimension {}", points.len(), points.dim());
        return Ok(());
    }
    let planted = gen_planted_cover(a.elements, a.k, a.sets, a.seed)?;
    if let GenKind::PlantedCover = a.kind {
        planted.instance.save(&a.out)?;
        eprintln!("wrote instance with optimum {}", planted.opt());
        return Ok(());
    }
    let cps = match a.kind {
        GenKind::CoveringGeneral => gen_covering_general(&planted.instance, a.solutions, a.seed)?,
        _ => gen_covering_euclidean(&planted.instance, a.solutions, a.seed)?,
    };
    match cps.oracle.points() {
        Some(points) => save_points(points, &a.out)?,
        None => save_matrix(&cps.oracle, &a.out)?,
    }
    if let Some(path) = &a.instance_out {
        planted.instance.save(path)?;
    }
    let l = &cps.layout;
    eprintln!(
        "wrote {} points: solutions {:?}, centroid {}; solution points need {} out-edges",
        l.len(),
        l.solutions,
        l.centroid,
        planted.opt() + 1
    );
    Ok(())
}

fn cmd_setcover(a: SetcoverArgs) -> anyhow::Result<()> {
    let inst = ExplicitInstance::load(&a.input).with_context(|| format!("loading {}", a.input.display()))?;
    let params = VoteParams {
        threshold: VoteThreshold::LogSum(a.vote_factor),
        seed: a.seed,
        lazy: matches!(a.algo, CoverAlgo::Lazy),
        checked: false,
    };
    let sol: CoverSolution = match (a.algo, a.budget) {
        (CoverAlgo::Greedy, _) => greedy_set_cover(&inst, None)?,
        (CoverAlgo::Vote | CoverAlgo::Lazy, Some(b)) => match cvc_stop_early(&inst, None, b, &params)? {
            Attempt::Covered(sol) => sol,
            Attempt::Fail => bail!(CheckFailed(format!("no cover within budget {b}"))),
        },
        (CoverAlgo::Vote, None) => construct_vote_cover(&inst, None, &params)?,
        (CoverAlgo::Limited | CoverAlgo::Lazy, None) => construct_limited_vote_cover(&inst, None, &params)?,
        (CoverAlgo::Limited, Some(_)) => bail!(navgraph::Error::Input(
            "--budget applies to the vote and lazy algorithms".into()
        )),
    };
    if !check_cover(&inst, &sol.chosen) {
        bail!(CheckFailed("the returned sets do not cover the universe".into()));
    }
    let text: Vec<String> = sol.chosen.iter().map(usize::to_string).collect();
    println!("{}", text.join(" "));
    eprintln!("{} sets", sol.len());
    if let Some(path) = &a.stats {
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, &sol.stats)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> anyhow::Result<()> {
    let metric = match a.metric {
        MetricArg::L2 => Metric::Euclidean,
        MetricArg::L2sq => Metric::SquaredEuclidean,
        MetricArg::L1 => Metric::Manhattan,
        MetricArg::Matrix => bail!(navgraph::Error::Input("bench generates vector data".into())),
    };
    let cfg = BenchConfig {
        algos: a.algos,
        sizes: a.sizes,
        seeds: a.seeds,
        kind: a.kind,
        dim: a.dim,
        metric,
        build: BuildConfig {
            preset: a.preset,
            ..BuildConfig::default()
        },
        verify: !a.no_verify,
    };
    let rows = run_bench_with(&cfg, |r| {
        eprintln!("{} n={} seed={}: {:.1} ms, verified={}", r.algo, r.n, r.seed, r.build_ms, r.verified)
    })?;
    match &a.out {
        Some(path) => write_csv(&rows, create(path)?)?,
        None => write_csv(&rows, io::stdout().lock())?,
    }
    if a.slopes {
        for (algo, slope) in build_time_slopes(&rows) {
            match slope {
                Some(s) => eprintln!("slope {algo}: {s:.3}"),
                None => eprintln!("slope {algo}: needs two sizes"),
            }
        }
    }
    if let Some(r) = rows.iter().find(|r| !r.error.is_empty()) {
        bail!(CheckFailed(format!("{} n={} seed={}: {}", r.algo, r.n, r.seed, r.error)));
    }
    if cfg.verify {
        let failed = rows.iter().filter(|r| !r.verified).count();
        if failed > 0 {
            bail!(CheckFailed(format!("{failed} rows failed verification")));
        }
    }
    Ok(())
}
