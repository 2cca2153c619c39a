use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use vsep::driver::{derive_bounds, solve, SolveOptions, DEFAULT_BALANCE};
use vsep::harness::{parse_seeds, run_bench, summarize, write_csv};
use vsep::io::{load_graph, parse_partition, write_partition, GraphFormat};
use vsep::oracle::exact_vsp;
use vsep::perturb::DEFAULT_EPSILON;
use vsep::qp::DEFAULT_ETA;
use vsep::{MatchingRule, Partition, VsepError, WeightedGraph};

#[derive(Parser)]
#[command(name = "vsep", version, about = "Multilevel vertex separators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a separator for one graph.
    Solve(SolveArgs),
    /// Run many seeds over a list of graphs and emit CSV rows.
    Bench(BenchArgs),
    /// Exact minimum separator by enumeration (at most 14 vertices).
    Oracle(OracleArgs),
    /// Validate a partition file against a graph.
    Check(CheckArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Graph file (METIS by default; .edges/.txt read as edge lists).
    #[arg(long)]
    graph: PathBuf,
    /// Override the format guessed from the extension: metis or edgelist.
    #[arg(long)]
    format: Option<GraphFormat>,
}

impl GraphArgs {
    fn load(&self) -> vsep::Result<WeightedGraph> {
        load(&self.graph, self.format)
    }
}

fn load(path: &Path, format: Option<GraphFormat>) -> vsep::Result<WeightedGraph> {
    let format = format.unwrap_or_else(|| GraphFormat::from_path(path));
    load_graph(path, format).map_err(|e| match e {
        VsepError::Io(io) => VsepError::Io(io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        )),
        other => other,
    })
}

#[derive(Args)]
struct TuningArgs {
    /// Upper shore weight as a fraction of the total.
    #[arg(long, default_value_t = DEFAULT_BALANCE)]
    balance: f64,
    /// Penalty parameter (default: largest vertex cost per level).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_ETA)]
    eta: f64,
    /// Refine only where the vertex count doubled since the last refinement.
    #[arg(long)]
    refine_stride: bool,
}

impl TuningArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            balance: self.balance,
            gamma: self.gamma,
            epsilon: self.epsilon,
            eta: self.eta,
            refine_stride: self.refine_stride,
            ..SolveOptions::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Matching rule: rm (random) or he (heavy edge).
    #[arg(long, default_value = "he")]
    rule: MatchingRule,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the result and per-level statistics as JSON.
    #[arg(long)]
    json: bool,
    /// Write labels (0 = A, 1 = B, 2 = S), one per line.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// File listing graph paths, one per line (relative to the list).
    #[arg(long, required_unless_present = "graph")]
    graphs: Option<PathBuf>,
    /// Individual graph files; may be repeated.
    #[arg(long)]
    graph: Vec<PathBuf>,
    #[arg(long)]
    format: Option<GraphFormat>,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Seeds as a range `a..b` (inclusive), a list, or a single value.
    #[arg(long, default_value = "1..10")]
    seeds: String,
    /// Matching rules, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "he")]
    rule: Vec<MatchingRule>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Write rows here instead of stdout (`-` means stdout).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = DEFAULT_BALANCE)]
    balance: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Partition file with one label (0, 1, 2) per vertex.
    #[arg(long)]
    partition: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BALANCE)]
    balance: f64,
}

fn exit_code(e: &VsepError) -> u8 {
    match e {
        VsepError::Io(_)
        | VsepError::Parse { .. }
        | VsepError::DuplicateEdge { .. }
        | VsepError::AsymmetricEdge { .. }
        | VsepError::NonPositiveWeight { .. }
        | VsepError::InvalidEdgeWeight { .. }
        | VsepError::VertexOutOfRange { .. } => 1,
        VsepError::InvalidArgument(_) | VsepError::SizeCap { .. } => 2,
        VsepError::Infeasible(_) => 3,
        VsepError::DimensionMismatch { .. }
        | VsepError::PreconditionViolated(_)
        | VsepError::InvalidSeparator { .. } => 4,
    }
}

fn print_partition(part: &Partition) {
    println!(
        "cost_S={} |A|={} |B|={} |S|={} weight_A={} weight_B={} feasible={}",
        part.cost_s,
        part.a.len(),
        part.b.len(),
        part.s.len(),
        part.weight_a,
        part.weight_b,
        part.feasible
    );
}

fn run_solve(args: SolveArgs) -> vsep::Result<u8> {
    let g = args.graph.load()?;
    let opts = SolveOptions {
        rule: args.rule,
        seed: args.seed,
        ..args.tuning.options()
    };
    let (part, stats) = solve(&g, &opts)?;
    if let Some(path) = &args.output {
        std::fs::write(path, write_partition(&part.labels))?;
    }
    if args.json {
        let out = json!({ "partition": part, "stats": stats });
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        );
    } else {
        print_partition(&part);
        println!(
            "levels={} n={} m={} time_ms={:.2}",
            stats.depth(),
            g.n(),
            g.num_edges(),
            stats.total_ms
        );
        for l in &stats.levels {
            let imp = l
                .improvement_pct
                .map_or("-".to_string(), |v| format!("{v:.2}"));
            println!(
                "  level {:>2}: n={} m={} cost_S={} improvement%={imp} time_ms={:.2}",
                l.level, l.n, l.m, l.cost_final, l.time_ms
            );
        }
    }
    Ok(if part.feasible { 0 } else { 3 })
}

fn graph_list(args: &BenchArgs) -> vsep::Result<Vec<PathBuf>> {
    let mut paths = args.graph.clone();
    if let Some(list) = &args.graphs {
        let text = std::fs::read_to_string(list)
            .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", list.display())))?;
        let base = list.parent().unwrap_or(Path::new("."));
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            paths.push(base.join(line));
        }
    }
    Ok(paths)
}

fn run_bench_cmd(args: BenchArgs) -> vsep::Result<u8> {
    let seeds = parse_seeds(&args.seeds)?;
    let mut graphs = Vec::new();
    for path in graph_list(&args)? {
        graphs.push((path.display().to_string(), load(&path, args.format)?));
    }
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let rows = run_bench(&graphs, &seeds, &args.rule, &args.tuning.options(), jobs)?;
    let summaries = summarize(&rows);
    match args.csv.as_ref().filter(|p| p.as_os_str() != "-") {
        Some(path) => {
            write_csv(BufWriter::new(File::create(path)?), &rows)?;
            for s in &summaries {
                println!("{}", s.line());
            }
        }
        None => {
            write_csv(io::stdout().lock(), &rows)?;
            for s in &summaries {
                eprintln!("{}", s.line());
            }
        }
    }
    Ok(if rows.iter().all(|r| r.feasible) {
        0
    } else {
        3
    })
}

fn run_oracle(args: OracleArgs) -> vsep::Result<u8> {
    let g = args.graph.load()?;
    let bounds = derive_bounds(&g, args.balance)?;
    let sol = exact_vsp(&g, bounds)?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&sol.partition).expect("serializable")
        );
    } else {
        print_partition(&sol.partition);
        let s: Vec<String> = sol
            .partition
            .s
            .iter()
            .map(|i| (i + 1).to_string())
            .collect();
        println!("S={{{}}}", s.join(","));
    }
    Ok(0)
}

fn run_check(args: CheckArgs) -> vsep::Result<u8> {
    let g = args.graph.load()?;
    let bounds = derive_bounds(&g, args.balance)?;
    let labels = parse_partition(&std::fs::read_to_string(&args.partition)?, g.n())?;
    match Partition::from_labels(&g, labels, &bounds) {
        Ok(part) => {
            print_partition(&part);
            if part.feasible {
                println!("valid");
                Ok(0)
            } else {
                println!(
                    "invalid: shore weights outside [{}, {}]",
                    bounds.la, bounds.ua
                );
                Ok(3)
            }
        }
        Err(e @ VsepError::InvalidSeparator { .. }) => {
            println!("invalid: {e}");
            Ok(3)
        }
        Err(e) => Err(e),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("VSEP_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Bench(a) => run_bench_cmd(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Check(a) => run_check(a),
    };
    let _ = io::stdout().flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
