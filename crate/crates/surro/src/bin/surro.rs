//! Command-line front end over the bench harness.
//!
//! Exit codes: 0 success, 2 configuration error, 3 oracle state cap
//! exceeded, 4 internal invariant violation.

use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use surro::bench::config::{parse_matrix_config, parse_rational, DEFAULT_ORACLE_CAP};
use surro::bench::curve::{anytime_curve, CurveAxis};
use surro::bench::oracle::OracleError;
use surro::bench::report::{
    attach_events_csv, curve_csv, events_csv, markdown_scores, read_runs_csv, runs_csv,
    scores_csv, write_file, Timing,
};
use surro::bench::score::{ipc_score, Reference};
use surro::bench::{oracle_table, run_matrix, BenchError, DomainSpec, PruneKind, RunRecord, RunSpec};
use surro::eval::EvaluatorKind;
use surro::heuristics::HeuristicKind;
use surro::search::SearchLimits;
use surro::TieBreak;

#[derive(Parser)]
#[command(name = "surro", about = "Best-first branch-and-bound search bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one search and write runs.csv/events.csv.
    Run(RunArgs),
    /// Run a matrix of searches from a config file.
    Matrix(MatrixArgs),
    /// Enumerate a problem exhaustively and write the optimal-cost table.
    Oracle(OracleArgs),
    /// Score previously written run records.
    Score(ScoreArgs),
    /// Compute anytime quality curves from run records.
    Curve(CurveArgs),
}

#[derive(Args)]
struct DomainArgs {
    /// Domain: cycle | btree | rendezvous | chain | taskfile.
    #[arg(long)]
    domain: String,
    /// Cycle: counter bits.
    #[arg(long)]
    k: Option<u32>,
    /// Cycle: goal residue (default 2^k - 2).
    #[arg(long)]
    goal: Option<u64>,
    /// Cycle: cost of the 0 <-> 2^k-1 crossing (default 2^(k-1)).
    #[arg(long)]
    expensive_cost: Option<u64>,
    /// Btree: high-cost children per node.
    #[arg(long)]
    x: Option<u32>,
    /// Btree: low-cost children per node.
    #[arg(long)]
    y: Option<u32>,
    #[arg(long)]
    high_cost: Option<u64>,
    #[arg(long)]
    low_cost: Option<u64>,
    /// Btree: exact high-action count of a goal path.
    #[arg(long)]
    goal_high: Option<u32>,
    /// Btree: exact low-action count of a goal path.
    #[arg(long)]
    goal_low: Option<u32>,
    #[arg(long)]
    depth_cap: Option<u32>,
    #[arg(long)]
    passengers: Option<u32>,
    #[arg(long)]
    planes: Option<u32>,
    #[arg(long)]
    chain_length: Option<u32>,
    /// Taskfile: path to the task text file.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl DomainArgs {
    fn build(&self) -> Result<DomainSpec, BenchError> {
        let need = |v: Option<u32>, name: &str| -> Result<u32, BenchError> {
            v.ok_or_else(|| BenchError::Config(format!("--domain {} needs --{name}", self.domain)))
        };
        match self.domain.as_str() {
            "cycle" => Ok(DomainSpec::Cycle {
                k: need(self.k, "k")?,
                expensive_cost: self.expensive_cost,
                goal: self.goal,
            }),
            "btree" => Ok(DomainSpec::BTree {
                x: need(self.x, "x")?,
                y: need(self.y, "y")?,
                high_cost: self
                    .high_cost
                    .ok_or_else(|| BenchError::Config("btree needs --high-cost".into()))?,
                low_cost: self
                    .low_cost
                    .ok_or_else(|| BenchError::Config("btree needs --low-cost".into()))?,
                goal_high: need(self.goal_high, "goal-high")?,
                goal_low: need(self.goal_low, "goal-low")?,
                depth_cap: need(self.depth_cap, "depth-cap")?,
            }),
            "rendezvous" => Ok(DomainSpec::Rendezvous {
                passengers: need(self.passengers, "passengers")?,
                planes: self.planes.unwrap_or(1),
            }),
            "chain" => Ok(DomainSpec::Chain {
                chain_length: need(self.chain_length, "chain-length")?,
            }),
            "taskfile" => Ok(DomainSpec::TaskFile {
                path: self
                    .file
                    .as_ref()
                    .ok_or_else(|| BenchError::Config("taskfile needs --file".into()))?
                    .display()
                    .to_string(),
            }),
            other => Err(BenchError::Config(format!("unknown domain `{other}`"))),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    domain: DomainArgs,
    /// Evaluation function: cost | size | cs-size | hybrid | wcost.
    #[arg(long)]
    eval: String,
    /// Weight for wcost (rational, e.g. 3/2).
    #[arg(long)]
    weight: Option<String>,
    /// Tie-break: none | cost | size.
    #[arg(long, default_value = "none")]
    tiebreak: String,
    /// Heuristic: zero | exact | hadd | rp-cost | rp-size-cheap | rp-size-short.
    #[arg(long)]
    heur: String,
    /// Prune heuristic for the bound test: zero | exact.
    #[arg(long, default_value = "zero")]
    prune_heur: String,
    /// Enable the usefulness lookahead on plateau dequeues.
    #[arg(long)]
    lookahead: bool,
    /// Relative plateau threshold (rational; default epsilon).
    #[arg(long)]
    plateau_tau: Option<String>,
    #[arg(long)]
    max_expansions: Option<u64>,
    #[arg(long)]
    max_seconds: Option<u64>,
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Run id used in the CSV output.
    #[arg(long, default_value = "run000")]
    id: String,
    /// State cap for oracle attachment.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: u64,
    /// Zero the wall-clock columns for byte-stable output.
    #[arg(long)]
    omit_timing: bool,
    /// Output directory for runs.csv and events.csv.
    #[arg(long)]
    out: PathBuf,
}

impl RunArgs {
    fn build_spec(&self) -> Result<RunSpec, BenchError> {
        let eval = EvaluatorKind::parse(&self.eval)
            .ok_or_else(|| BenchError::Config(format!("unknown eval `{}`", self.eval)))?;
        let heur = HeuristicKind::parse(&self.heur)
            .ok_or_else(|| BenchError::Config(format!("unknown heur `{}`", self.heur)))?;
        let mut spec = RunSpec::new(self.id.clone(), self.domain.build()?, eval, heur);
        spec.tiebreak = TieBreak::parse(&self.tiebreak)
            .ok_or_else(|| BenchError::Config(format!("unknown tiebreak `{}`", self.tiebreak)))?;
        spec.prune = PruneKind::parse(&self.prune_heur)
            .ok_or_else(|| BenchError::Config(format!("unknown prune-heur `{}`", self.prune_heur)))?;
        if let Some(w) = &self.weight {
            spec.weight = parse_rational(w)
                .ok_or_else(|| BenchError::Config(format!("bad weight `{w}`")))?;
        }
        if let Some(tau) = &self.plateau_tau {
            spec.plateau_tau = Some(
                parse_rational(tau)
                    .ok_or_else(|| BenchError::Config(format!("bad plateau-tau `{tau}`")))?,
            );
        }
        spec.lookahead = self.lookahead;
        spec.limits = SearchLimits {
            max_expansions: self.max_expansions,
            max_wall_ms: self.max_seconds.map(|s| s * 1000),
            max_nodes_in_memory: self.max_nodes,
        };
        Ok(spec)
    }
}

#[derive(Args)]
struct MatrixArgs {
    /// Matrix config file (key = value blocks).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for runs.csv and events.csv.
    #[arg(long)]
    out: PathBuf,
    /// Parallel runs.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Zero the wall-clock columns for byte-stable output.
    #[arg(long)]
    omit_timing: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    domain: DomainArgs,
    /// Enumeration fails beyond this many states (exit code 3).
    #[arg(long)]
    state_cap: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    /// runs.csv files or directories containing them.
    #[arg(long, num_args = 1.., required = true)]
    records: Vec<PathBuf>,
    /// Reference costs: oracle | best.
    #[arg(long, default_value = "oracle")]
    reference: String,
    /// Output scores.csv path.
    #[arg(long)]
    out: PathBuf,
    /// Optional markdown score table path.
    #[arg(long)]
    markdown: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    /// runs.csv files or directories containing them (events.csv is loaded
    /// from alongside each runs.csv).
    #[arg(long, num_args = 1.., required = true)]
    records: Vec<PathBuf>,
    /// Curve axis: expansions | ms.
    #[arg(long, default_value = "expansions")]
    axis: String,
    /// Comma-separated ascending instants, e.g. 100,1000,10000.
    #[arg(long)]
    instants: String,
    /// Reference costs: oracle | best.
    #[arg(long, default_value = "oracle")]
    reference: String,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

fn read_with_context(path: &Path) -> Result<String, BenchError> {
    std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Accepts either a runs.csv path or a directory containing one.
fn load_records(paths: &[PathBuf], with_events: bool) -> Result<Vec<RunRecord>, BenchError> {
    let mut all = Vec::new();
    for given in paths {
        let runs_path = if given.is_dir() {
            given.join("runs.csv")
        } else {
            given.clone()
        };
        let text = read_with_context(&runs_path)?;
        let mut records = read_runs_csv(&text, &runs_path.display().to_string())?;
        if with_events {
            let events_path = runs_path
                .parent()
                .map(|p| p.join("events.csv"))
                .unwrap_or_else(|| PathBuf::from("events.csv"));
            let text = read_with_context(&events_path)?;
            attach_events_csv(&mut records, &text, &events_path.display().to_string())?;
        }
        all.extend(records);
    }
    Ok(all)
}

fn write_run_outputs(
    records: &[RunRecord],
    out: &Path,
    timing: Timing,
) -> Result<(), BenchError> {
    write_file(&out.join("runs.csv"), &runs_csv(records, timing))?;
    write_file(&out.join("events.csv"), &events_csv(records, timing))?;
    Ok(())
}

fn print_run_summary(records: &[RunRecord]) {
    for r in records {
        let status = r
            .status
            .map(|s| s.as_str().to_string())
            .or_else(|| r.error.clone())
            .unwrap_or_default();
        let best = r
            .best
            .map(|(c, s)| format!("cost {c} size {s}"))
            .unwrap_or_else(|| "none".to_string());
        println!(
            "{}: {} [{}] best {} | expansions {} discovery {} oracle {}",
            r.spec.id,
            r.spec.domain.problem_key(),
            status,
            best,
            r.stats.expansions,
            r.stats
                .discovery_expansions
                .map(|d| d.to_string())
                .unwrap_or_else(|| "-".to_string()),
            r.oracle_cost
                .map(|c| c.to_string())
                .unwrap_or_else(|| "-".to_string()),
        );
    }
}

fn dispatch(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Run(args) => {
            let spec = args.build_spec()?;
            let records = run_matrix(&[spec], 1, args.oracle_cap)?;
            if let Some(e) = &records[0].error {
                return Err(BenchError::Config(e.clone()));
            }
            let timing = if args.omit_timing { Timing::Omit } else { Timing::Wall };
            write_run_outputs(&records, &args.out, timing)?;
            print_run_summary(&records);
            Ok(())
        }
        Command::Matrix(args) => {
            let text = read_with_context(&args.config)?;
            let cfg = parse_matrix_config(&text)?;
            let records = run_matrix(&cfg.specs, args.jobs.max(1), cfg.oracle_cap)?;
            let timing = if args.omit_timing { Timing::Omit } else { Timing::Wall };
            write_run_outputs(&records, &args.out, timing)?;
            print_run_summary(&records);
            Ok(())
        }
        Command::Oracle(args) => {
            let domain = args.domain.build()?;
            let table = oracle_table(&domain, args.state_cap)?;
            write_file(&args.out, &table)?;
            println!("{}", table.lines().next().unwrap_or_default());
            Ok(())
        }
        Command::Score(args) => {
            let reference = Reference::parse(&args.reference)
                .ok_or_else(|| BenchError::Config(format!("unknown reference `{}`", args.reference)))?;
            let records = load_records(&args.records, false)?;
            let report =
                ipc_score(&records, reference).map_err(|e| BenchError::Config(e.to_string()))?;
            write_file(&args.out, &scores_csv(&report))?;
            if let Some(md) = &args.markdown {
                write_file(md, &markdown_scores(&report))?;
            }
            for agg in &report.aggregates {
                println!(
                    "{}: score {} coverage {} rank {}",
                    agg.variant,
                    surro::bench::report::decimal(agg.score, 3),
                    agg.coverage,
                    agg.rank
                );
            }
            Ok(())
        }
        Command::Curve(args) => {
            let reference = Reference::parse(&args.reference)
                .ok_or_else(|| BenchError::Config(format!("unknown reference `{}`", args.reference)))?;
            let axis = CurveAxis::parse(&args.axis)
                .ok_or_else(|| BenchError::Config(format!("unknown axis `{}`", args.axis)))?;
            let instants: Vec<u64> = args
                .instants
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| BenchError::Config(format!("bad instant `{s}`")))
                })
                .collect::<Result<_, _>>()?;
            let records = load_records(&args.records, true)?;
            let curve = anytime_curve(&records, reference, axis, &instants)
                .map_err(|e| BenchError::Config(e.to_string()))?;
            write_file(&args.out, &curve_csv(&curve))?;
            println!("curve over {} series written", curve.per_run.len());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match &e {
                BenchError::Config(_) | BenchError::Io { .. } => 2,
                BenchError::OracleCap(OracleError::CapExceeded(_)) => 3,
                BenchError::Invariant(_) => 4,
            };
            ExitCode::from(code)
        }
    }
}
