use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nurse_cp::bench::{run_bench, stats_table, BenchConfig, BenchSource, RunRecord};
use nurse_cp::cp::{solve_optimize, solve_satisfy, SearchConfig, SearchStatus, VarHeuristic};
use nurse_cp::io::{parse_instance, parse_roster, render_roster, write_instance};
use nurse_cp::nsp::{benchmark_instance, check_roster, compile, fitness, RosterInstance, RosterObjective};
use nurse_cp::pso::SwarmConfig;

const EXIT_UNSAT: u8 = 1;
const EXIT_LIMIT: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_CANT_CREATE: u8 = 73;

#[derive(Parser)]
#[command(name = "nurse-cp", version, about = "Constraint-programming nurse rostering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print the roster
    Solve(SolveArgs),
    /// Check a roster grid against an instance
    Check {
        instance: PathBuf,
        /// Roster grid file, or `-` for standard input
        roster: PathBuf,
    },
    /// Repeated CP and PSO runs with summary statistics
    Bench(BenchArgs),
    /// Generate a benchmark instance file
    Gen(GenArgs),
    /// Summarize RESULT lines read from standard input
    Stats,
}

#[derive(Clone, Copy, ValueEnum)]
enum Heuristic {
    FirstFail,
    InputOrder,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "first-fail")]
    heuristic: Heuristic,
    /// Wall-clock limit in milliseconds
    #[arg(long = "time-limit", value_name = "MS")]
    time_limit: Option<u64>,
    /// Maximum number of search nodes
    #[arg(long = "node-limit", value_name = "N")]
    node_limit: Option<u64>,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long)]
    alpha: Option<f64>,
    /// Seed for randomized first-fail tie-breaking
    #[arg(long)]
    seed: Option<u64>,
    /// Maximize fitness with branch-and-bound instead of stopping at the first roster
    #[arg(long)]
    optimize: bool,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance file used unchanged for every run (default: generated instances)
    instance: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    nurses: usize,
    #[arg(long, default_value_t = 4)]
    shifts: u32,
    #[arg(long, default_value_t = 7)]
    days: usize,
    #[arg(long, default_value_t = 4)]
    runs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "pso-pop", default_value_t = 30)]
    pso_pop: usize,
    #[arg(long = "pso-iters", default_value_t = 2000)]
    pso_iters: usize,
    #[arg(long, default_value_t = 0.1)]
    lambda: f64,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 20)]
    nurses: usize,
    #[arg(long, default_value_t = 4)]
    shifts: u32,
    #[arg(long, default_value_t = 7)]
    days: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output path (default: standard output)
    #[arg(short = 'o', value_name = "PATH")]
    output: Option<PathBuf>,
}

/// Default node budget for bench CP runs; keeps runs deterministic.
const BENCH_NODE_LIMIT: u64 = 200_000;

enum Failure {
    Usage(String),
    Data(String),
    CantCreate(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        let (code, msg) = match self {
            Failure::Usage(m) => (EXIT_USAGE, m),
            Failure::Data(m) => (EXIT_DATA, m),
            Failure::CantCreate(m) => (EXIT_CANT_CREATE, m),
        };
        eprintln!("nurse-cp: {msg}");
        ExitCode::from(code)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Check { instance, roster } => check(&instance, &roster),
        Command::Bench(args) => bench(args),
        Command::Gen(args) => gen(args),
        Command::Stats => stats(),
    };
    result.unwrap_or_else(Failure::report)
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).map_err(|e| Failure::Data(format!("standard input: {e}")))?;
        return Ok(buf);
    }
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<RosterInstance, Failure> {
    let text = read_input(path)?;
    parse_instance(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn search_config(args: &SearchArgs, default_node_limit: Option<u64>) -> Result<SearchConfig, Failure> {
    if args.node_limit == Some(0) {
        return Err(Failure::Usage("--node-limit must be positive".into()));
    }
    Ok(SearchConfig {
        var_heuristic: match args.heuristic {
            Heuristic::FirstFail => VarHeuristic::FirstFail,
            Heuristic::InputOrder => VarHeuristic::InputOrder,
        },
        time_limit: args.time_limit.map(Duration::from_millis),
        node_limit: args.node_limit.or(default_node_limit),
        ..Default::default()
    })
}

fn check_alpha(alpha: Option<f64>) -> Result<(), Failure> {
    match alpha {
        Some(a) if !(0.0..=1.0).contains(&a) => Err(Failure::Usage(format!("--alpha must lie in [0, 1], got {a}"))),
        _ => Ok(()),
    }
}

fn solve(args: SolveArgs) -> Result<ExitCode, Failure> {
    check_alpha(args.alpha)?;
    let mut instance = load_instance(&args.instance)?;
    if let Some(alpha) = args.alpha {
        instance.alpha = alpha;
    }
    let mut config = search_config(&args.search, None)?;
    if let Some(seed) = args.seed {
        config.randomize_ties = true;
        config.seed = seed;
    }
    let compiled = compile(&instance).map_err(|e| Failure::Data(e.to_string()))?;
    let mut model = compiled.model.clone();
    let (solution, stats) = if args.optimize {
        let objective = RosterObjective::new(&instance, &compiled);
        let (best, stats) = solve_optimize(&mut model, &objective, &config);
        (best.map(|(s, _)| s), stats)
    } else {
        solve_satisfy(&mut model, &config)
    };

    let mut out = io::stdout().lock();
    let Some(solution) = solution else {
        return Ok(match stats.status {
            SearchStatus::Unsat => {
                let _ = writeln!(out, "UNSATISFIABLE");
                ExitCode::from(EXIT_UNSAT)
            }
            status => {
                let _ = writeln!(out, "UNKNOWN: {} reached before any roster was found", limit_name(status));
                ExitCode::from(EXIT_LIMIT)
            }
        });
    };
    let schedule = compiled.schedule(&solution);
    let report = fitness(&schedule, &instance).expect("solver output matches instance");
    let status = match (stats.status, args.optimize) {
        (SearchStatus::Sat, true) => "optimal".to_string(),
        (SearchStatus::Sat, false) => "satisfiable".to_string(),
        (s, _) => format!("best found ({} reached)", limit_name(s)),
    };
    let _ = write!(out, "{}", render_roster(&schedule, &instance));
    let _ = writeln!(out);
    let _ = writeln!(out, "status {status}");
    let _ = writeln!(out, "fairness_f {}", report.fairness_f);
    let _ = writeln!(out, "preference_g {}", report.preference_g);
    let _ = writeln!(out, "combined {}", report.combined);
    let _ = writeln!(out, "alpha {}", report.alpha);
    let _ = writeln!(out, "nodes {}", stats.nodes);
    let _ = writeln!(out, "backtracks {}", stats.backtracks);
    if let Some(first) = stats.first_solution_time {
        let _ = writeln!(out, "first_solution_ms {:.3}", first.as_secs_f64() * 1e3);
    }
    let _ = writeln!(out, "wall_ms {:.3}", stats.wall_time_ms());
    Ok(ExitCode::SUCCESS)
}

fn limit_name(status: SearchStatus) -> &'static str {
    match status {
        SearchStatus::TimedOut => "time limit",
        SearchStatus::NodeLimit => "node limit",
        _ => "limit",
    }
}

fn check(instance_path: &Path, roster_path: &Path) -> Result<ExitCode, Failure> {
    let instance = load_instance(instance_path)?;
    let text = read_input(roster_path)?;
    let schedule =
        parse_roster(&text, &instance).map_err(|e| Failure::Data(format!("{}: {e}", roster_path.display())))?;
    let violations = check_roster(&schedule, &instance).expect("parsed roster matches instance");
    let mut out = io::stdout().lock();
    if violations.is_empty() {
        let _ = writeln!(out, "VALID");
        return Ok(ExitCode::SUCCESS);
    }
    for v in &violations {
        let _ = writeln!(out, "{v}");
    }
    Ok(ExitCode::from(EXIT_UNSAT))
}

fn bench(args: BenchArgs) -> Result<ExitCode, Failure> {
    check_alpha(args.alpha)?;
    if args.runs < 2 {
        return Err(Failure::Usage("--runs must be at least 2".into()));
    }
    if args.pso_pop == 0 {
        return Err(Failure::Usage("--pso-pop must be positive".into()));
    }
    if !(args.lambda >= 0.0 && args.lambda.is_finite()) {
        return Err(Failure::Usage("--lambda must be non-negative".into()));
    }
    let source = match &args.instance {
        Some(path) => BenchSource::Fixed(load_instance(path)?),
        None => {
            if args.shifts == 0 || args.days == 0 || args.nurses <= args.shifts as usize {
                return Err(Failure::Usage("need --shifts >= 1, --days >= 1 and --nurses >= shifts + 1".into()));
            }
            BenchSource::Generated { nurses: args.nurses, shifts: args.shifts, days: args.days }
        }
    };
    let default_limit = args.search.time_limit.is_none().then_some(BENCH_NODE_LIMIT);
    let config = BenchConfig {
        source,
        runs: args.runs,
        seed: args.seed,
        alpha: args.alpha,
        search: search_config(&args.search, default_limit)?,
        swarm: SwarmConfig { population: args.pso_pop, iterations: args.pso_iters, lambda: args.lambda, ..Default::default() },
    };
    let result = run_bench(&config).map_err(|e| Failure::Data(e.to_string()))?;
    let table = result.stats_table().map_err(|e| Failure::Data(e.to_string()))?;
    let mut out = io::stdout().lock();
    let _ = write!(out, "{table}");
    for record in result.records() {
        let _ = writeln!(out, "{record}");
    }
    Ok(ExitCode::SUCCESS)
}

fn gen(args: GenArgs) -> Result<ExitCode, Failure> {
    if args.shifts == 0 || args.days == 0 || args.nurses < args.shifts as usize + 1 {
        return Err(Failure::Usage(format!(
            "need at least shifts + 1 nurses, one shift and one day (got {} nurses, {} shifts, {} days)",
            args.nurses, args.shifts, args.days
        )));
    }
    let text = write_instance(&benchmark_instance(args.nurses, args.shifts, args.days, args.seed));
    match args.output {
        Some(path) => fs::write(&path, text).map_err(|e| Failure::CantCreate(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn stats() -> Result<ExitCode, Failure> {
    let text = read_input(Path::new("-"))?;
    let records = text
        .lines()
        .filter(|l| l.starts_with("RESULT"))
        .map(|l| l.parse::<RunRecord>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Data(e.to_string()))?;
    let table = stats_table(&records).map_err(|e| Failure::Data(e.to_string()))?;
    print!("{table}");
    Ok(ExitCode::SUCCESS)
}
