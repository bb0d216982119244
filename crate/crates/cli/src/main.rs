//! Command-line front end for the library: learn mixed-graph structure
//! from data files, run exact-oracle learners on known graphs, simulate
//! graphs and Gaussian samples, sweep benchmark grids, build or check
//! separation trees, and answer separation queries.
//!
//! Exit codes: 0 on success, 1 on a runtime error (bad file contents,
//! degenerate data, failed validation), 2 on a usage error.

mod bench;

use std::error::Error as StdError;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mvrcg::ci::{CiTester, DiscreteTester, OracleTester};
use mvrcg::decomp::{self, TreeSource, Variant};
use mvrcg::format;
use mvrcg::pc;
use mvrcg::septree::{tree_from_graph, tree_from_hypergraph, tree_from_tester, SeparationTree};
use mvrcg::simulate::{random_mvr_cg, random_sem_weights, sample_gaussian, seeded_rng, SimConfig};
use mvrcg::{GaussianStats64, GaussianTester64, MixedGraph, VertexSet};

type CliResult = Result<(), Box<dyn StdError>>;

#[derive(Parser)]
#[command(name = "mvrcg", version, about = "Structure learning for MVR chain graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a graph from a CSV sample
    Learn(LearnArgs),
    /// Learn from a known graph answering every test exactly
    Oracle(OracleArgs),
    /// Draw a random graph and a Gaussian sample from it
    Simulate(SimulateArgs),
    /// Sweep a simulation grid and write one CSV row per learner run
    Benchmark(BenchmarkArgs),
    /// Build a separation tree from data, a graph, or a hypergraph
    Tree(TreeArgs),
    /// Answer one m-separation query against a graph file
    Msep(MsepArgs),
}

/// How the columns of a data file are read and tested.
#[derive(Clone, Copy, ValueEnum)]
enum DataType {
    /// Real-valued columns, partial-correlation tests
    Gaussian,
    /// Non-negative integer columns, likelihood-ratio tests
    Discrete,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    /// Divide by a separation tree, learn locally, combine
    Decomp,
    /// Level-wise global adjacency search
    Pc,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// Pattern with only the class-invariant arrowheads
    Essential,
    /// One member of the class with the fewest bidirected edges
    Minbd,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Essential => Variant::Essential,
            VariantArg::Minbd => Variant::MinimumBidirected,
        }
    }
}

#[derive(Args)]
struct LearnArgs {
    /// CSV sample, one column per variable
    #[arg(long)]
    data: PathBuf,
    /// Column type and test family
    #[arg(long = "type", value_enum)]
    kind: DataType,
    /// Rejection level for each test, in (0, 1)
    #[arg(long)]
    alpha: f64,
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Output path for the learned graph
    #[arg(long)]
    out: PathBuf,
    /// Optional output path for the separator sets found
    #[arg(long)]
    sepsets: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Graph whose separation statements answer every test
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Output path for the recovered graph
    #[arg(long)]
    out: PathBuf,
    /// Optional output path for the separator sets found
    #[arg(long)]
    sepsets: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of observed variables
    #[arg(long)]
    p: usize,
    /// Expected degree of the generating DAG
    #[arg(long = "N")]
    avg_degree: f64,
    /// Latent fraction: round(k·p) extra variables are hidden
    #[arg(long)]
    k: f64,
    /// Number of sample rows
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// Output path for the true graph over the observed variables
    #[arg(long = "out-graph")]
    out_graph: PathBuf,
    /// Output path for the sampled data
    #[arg(long = "out-data")]
    out_data: PathBuf,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Observed-variable counts, comma-separated
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<usize>,
    /// Expected degrees, comma-separated
    #[arg(long = "N", value_delimiter = ',', required = true)]
    avg_degree: Vec<f64>,
    /// Sample sizes, comma-separated
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Rejection levels, comma-separated
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    /// Replicates per grid cell
    #[arg(long)]
    reps: usize,
    #[arg(long)]
    seed: u64,
    /// Latent fraction shared by every cell
    #[arg(long, default_value_t = 0.3)]
    k: f64,
    /// Which learners to run
    #[arg(long, value_enum, default_value_t = BenchAlgo::Both)]
    algo: BenchAlgo,
    #[arg(long, value_enum, default_value_t = VariantArg::Essential)]
    variant: VariantArg,
    /// Worker threads over replicates; output is identical for any value
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    /// Output path for the results CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchAlgo {
    Decomp,
    Pc,
    Both,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["data", "graph", "hypergraph"])))]
struct TreeArgs {
    /// Build from a CSV sample via pairwise full-conditional tests
    #[arg(long, requires = "kind", requires = "alpha")]
    data: Option<PathBuf>,
    /// Build from a graph file via its exact separation statements
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Build from a hypergraph file covering the variables
    #[arg(long)]
    hypergraph: Option<PathBuf>,
    /// Column type for --data
    #[arg(long = "type", value_enum, requires = "data")]
    kind: Option<DataType>,
    /// Rejection level for --data
    #[arg(long, requires = "data")]
    alpha: Option<f64>,
    /// Output path for the tree
    #[arg(long)]
    out: PathBuf,
    /// Check the tree against this graph; violations fail the run
    #[arg(long = "validate-against")]
    validate_against: Option<PathBuf>,
}

#[derive(Args)]
struct MsepArgs {
    #[arg(long)]
    graph: PathBuf,
    /// First vertex set, comma-separated names
    #[arg(long)]
    x: String,
    /// Second vertex set, comma-separated names
    #[arg(long)]
    y: String,
    /// Conditioning set, comma-separated names (may be empty)
    #[arg(long, default_value = "")]
    z: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Learn(args) => run_learn(&args),
        Command::Oracle(args) => run_oracle(&args),
        Command::Simulate(args) => run_simulate(&args),
        Command::Benchmark(args) => run_benchmark(&args),
        Command::Tree(args) => run_tree(&args),
        Command::Msep(args) => run_msep(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn read_file(path: &Path) -> Result<String, Box<dyn StdError>> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn write_file(path: &Path, text: &str) -> Result<(), Box<dyn StdError>> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()).into())
}

/// Builds the tester a data file calls for.
fn tester_from_file(path: &Path, kind: DataType) -> Result<Box<dyn CiTester>, Box<dyn StdError>> {
    let text = read_file(path)?;
    Ok(match kind {
        DataType::Gaussian => {
            let (names, rows) = format::read_continuous_csv(&text)?;
            Box::new(GaussianTester64::new(GaussianStats64::from_rows(names, &rows)?))
        }
        DataType::Discrete => Box::new(DiscreteTester::new(format::read_discrete_csv(&text)?)),
    })
}

/// Runs the chosen learner and writes the graph (and sepsets, when
/// asked) to disk; warnings go to standard error.
fn learn_and_write(
    tester: &dyn CiTester,
    alpha: f64,
    algo: Algo,
    variant: VariantArg,
    out: &Path,
    sepsets: Option<&Path>,
) -> CliResult {
    let result = match algo {
        Algo::Decomp => decomp::learn(tester, alpha, TreeSource::Tests, variant.into())?,
        Algo::Pc => pc::learn(tester, alpha, variant.into())?,
    };
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    write_file(out, &format::write_graph(&result.graph))?;
    if let Some(path) = sepsets {
        write_file(path, &format::write_sepsets(tester.names(), &result.sepsets))?;
    }
    Ok(())
}

fn run_learn(args: &LearnArgs) -> CliResult {
    let tester = tester_from_file(&args.data, args.kind)?;
    learn_and_write(
        &*tester,
        args.alpha,
        args.algo,
        args.variant,
        &args.out,
        args.sepsets.as_deref(),
    )
}

fn run_oracle(args: &OracleArgs) -> CliResult {
    let g = format::read_graph(&read_file(&args.graph)?)?;
    let tester = OracleTester::new(g)?;
    // The oracle ignores the level; any interior value works.
    learn_and_write(
        &tester,
        0.5,
        args.algo,
        args.variant,
        &args.out,
        args.sepsets.as_deref(),
    )
}

fn run_simulate(args: &SimulateArgs) -> CliResult {
    let cfg = SimConfig::new(args.p, args.avg_degree, args.k)?;
    let mut rng = seeded_rng(args.seed);
    let sim = random_mvr_cg(&cfg, &mut rng)?;
    let weights = random_sem_weights(&sim.dag, &mut rng)?;
    let (stats, rows) = sample_gaussian(&sim, &weights, args.n, &mut rng)?;
    write_file(&args.out_graph, &format::write_graph(&sim.graph))?;
    write_file(&args.out_data, &format::write_continuous_csv(stats.names(), &rows))?;
    Ok(())
}

fn run_benchmark(args: &BenchmarkArgs) -> CliResult {
    let algos: Vec<bench::BenchRun> = match args.algo {
        BenchAlgo::Decomp => vec![bench::BenchRun::Decomp],
        BenchAlgo::Pc => vec![bench::BenchRun::Pc],
        BenchAlgo::Both => vec![bench::BenchRun::Decomp, bench::BenchRun::Pc],
    };
    let grid = bench::Grid {
        ps: args.p.clone(),
        degrees: args.avg_degree.clone(),
        sizes: args.n.clone(),
        alphas: args.alpha.clone(),
        reps: args.reps,
        seed: args.seed,
        k: args.k,
        algos,
        variant: args.variant.into(),
        jobs: args.jobs as usize,
    };
    let csv = bench::run(&grid)?;
    write_file(&args.out, &csv)
}

fn run_tree(args: &TreeArgs) -> CliResult {
    let tree: SeparationTree = if let Some(path) = &args.data {
        let tester = tester_from_file(path, args.kind.unwrap())?;
        tree_from_tester(&*tester, args.alpha.unwrap())?
    } else if let Some(path) = &args.graph {
        tree_from_graph(&format::read_graph(&read_file(path)?)?)?
    } else {
        let path = args.hypergraph.as_ref().unwrap();
        tree_from_hypergraph(&format::read_hypergraph(&read_file(path)?)?)?
    };
    write_file(&args.out, &format::write_tree(&tree))?;
    if let Some(path) = &args.validate_against {
        let g = format::read_graph(&read_file(path)?)?;
        let violations = tree.validate(&g)?;
        if violations.is_empty() {
            println!("valid");
        } else {
            for v in &violations {
                println!("{v}");
            }
            return Err(format!("tree fails validation with {} violation(s)", violations.len()).into());
        }
    }
    Ok(())
}

/// Resolves a comma-separated name list against the graph's vertices.
fn parse_set(g: &MixedGraph, list: &str) -> Result<VertexSet, Box<dyn StdError>> {
    let mut set = VertexSet::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let i = g
            .names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| format!("unknown vertex {name:?}"))?;
        set.insert(i);
    }
    Ok(set)
}

fn run_msep(args: &MsepArgs) -> CliResult {
    let g = format::read_graph(&read_file(&args.graph)?)?;
    let x = parse_set(&g, &args.x)?;
    let y = parse_set(&g, &args.y)?;
    let z = parse_set(&g, &args.z)?;
    if x.is_empty() || y.is_empty() {
        return Err("--x and --y each need at least one vertex".into());
    }
    println!("{}", g.m_separated(&x, &y, &z)?);
    Ok(())
}
