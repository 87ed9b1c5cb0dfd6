//! Benchmark harness: run specifications, matrix execution, oracle
//! attachment, scoring and report emission.

pub mod config;
pub mod curve;
pub mod oracle;
pub mod report;
pub mod score;

use crate::domains::btree::{branching_trap, BranchingTrapConfig};
use crate::domains::cycle::{cycle_trap, CycleTrapConfig};
use crate::domains::strips::{ground_problem, GroundedProblem, GroundedTask};
use crate::domains::taskfile::parse_task;
use crate::domains::travel::{chain_swap_task, rendezvous_task, ChainSwapConfig, RendezvousConfig};
use crate::eval::{EvaluatorConfig, EvaluatorKind, Rational, TieBreak};
use crate::graph::{Cost, Plan, SearchProblem};
use crate::heuristics::{
    BranchingExact, CycleExact, Heuristic, HeuristicKind, OperatorExclusion, RelaxedPlanHeuristic,
    ZeroHeuristic,
};
use crate::search::{
    best_first_bnb, SearchLimits, SearchOutcome, SearchSettings, SearchStats, SearchStatus,
    SolutionEvent,
};
use num_rational::Ratio;
use oracle::{dijkstra_oracle, OracleError};
use std::collections::HashMap;
use std::time::Instant;
use thiserror::Error;

/// Which problem instance a run searches.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Cycle {
        k: u32,
        expensive_cost: Option<Cost>,
        goal: Option<u64>,
    },
    BTree {
        x: u32,
        y: u32,
        high_cost: Cost,
        low_cost: Cost,
        goal_high: u32,
        goal_low: u32,
        depth_cap: u32,
    },
    Rendezvous {
        passengers: u32,
        planes: u32,
    },
    Chain {
        chain_length: u32,
    },
    TaskFile {
        path: String,
    },
    /// A task provided in memory (not reachable from the CLI).
    Inline {
        task: GroundedTask,
    },
    /// A record read back from CSV; carries identity only and cannot be
    /// re-run.
    Opaque {
        name: String,
        params: String,
    },
}

impl DomainSpec {
    pub fn domain_name(&self) -> &str {
        match self {
            DomainSpec::Cycle { .. } => "cycle",
            DomainSpec::BTree { .. } => "btree",
            DomainSpec::Rendezvous { .. } => "rendezvous",
            DomainSpec::Chain { .. } => "chain",
            DomainSpec::TaskFile { .. } => "taskfile",
            DomainSpec::Inline { .. } => "inline",
            DomainSpec::Opaque { name, .. } => name,
        }
    }

    pub fn params_string(&self) -> String {
        match self {
            DomainSpec::Cycle {
                k,
                expensive_cost,
                goal,
            } => {
                let cfg = self.cycle_config(*k, *expensive_cost, *goal);
                format!(
                    "k={};expensive={};goal={}",
                    cfg.k, cfg.expensive_cost, cfg.goal_residue
                )
            }
            DomainSpec::BTree {
                x,
                y,
                high_cost,
                low_cost,
                goal_high,
                goal_low,
                depth_cap,
            } => format!(
                "x={x};y={y};high={high_cost};low={low_cost};H={goal_high};L={goal_low};cap={depth_cap}"
            ),
            DomainSpec::Rendezvous { passengers, planes } => {
                format!("passengers={passengers};planes={planes}")
            }
            DomainSpec::Chain { chain_length } => format!("m={chain_length}"),
            DomainSpec::TaskFile { path } => format!("file={path}"),
            DomainSpec::Inline { task } => format!("task={}", task.name),
            DomainSpec::Opaque { params, .. } => params.clone(),
        }
    }

    /// Identity of the underlying problem, used to group runs for scoring.
    pub fn problem_key(&self) -> String {
        format!("{}[{}]", self.domain_name(), self.params_string())
    }

    fn cycle_config(&self, k: u32, expensive: Option<Cost>, goal: Option<u64>) -> CycleTrapConfig {
        let mut cfg = CycleTrapConfig::new(k);
        if let Some(c) = expensive {
            cfg = cfg.with_expensive_cost(c);
        }
        if let Some(g) = goal {
            cfg = cfg.with_goal(g);
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PruneKind {
    #[default]
    Zero,
    Exact,
}

impl PruneKind {
    pub fn cli_name(&self) -> &'static str {
        match self {
            PruneKind::Zero => "zero",
            PruneKind::Exact => "exact",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "zero" => PruneKind::Zero,
            "exact" => PruneKind::Exact,
            _ => return None,
        })
    }
}

/// One fully specified search run.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub id: String,
    pub domain: DomainSpec,
    pub eval: EvaluatorKind,
    pub tiebreak: TieBreak,
    pub weight: Rational,
    pub heuristic: HeuristicKind,
    pub prune: PruneKind,
    pub limits: SearchLimits,
    pub lookahead: bool,
    pub plateau_tau: Option<Rational>,
}

impl RunSpec {
    pub fn new(id: impl Into<String>, domain: DomainSpec, eval: EvaluatorKind, heuristic: HeuristicKind) -> Self {
        RunSpec {
            id: id.into(),
            domain,
            eval,
            tiebreak: TieBreak::None,
            weight: Ratio::from_integer(1),
            heuristic,
            prune: PruneKind::Zero,
            limits: SearchLimits::none(),
            lookahead: false,
            plateau_tau: None,
        }
    }

    /// Search-variant label: the evaluation function plus its decorations,
    /// independent of the problem instance.
    pub fn variant_label(&self) -> String {
        let mut label = self.eval.cli_name().to_string();
        if self.eval == EvaluatorKind::WeightedCost && self.weight != Ratio::from_integer(1) {
            label.push_str(&format!("(w={})", self.weight));
        }
        if self.tiebreak != TieBreak::None {
            label.push_str(&format!("+tb-{}", self.tiebreak.cli_name()));
        }
        if self.lookahead {
            label.push_str("+la");
        }
        format!("{label}/{}", self.heuristic.cli_name())
    }
}

/// A run's full instrumentation.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub spec: RunSpec,
    pub status: Option<SearchStatus>,
    pub stats: SearchStats,
    pub events: Vec<SolutionEvent>,
    pub first: Option<(Cost, u64)>,
    pub best: Option<(Cost, u64)>,
    pub best_plan: Option<Plan>,
    pub oracle_cost: Option<Cost>,
    pub wall_ms: u64,
    pub error: Option<String>,
}

impl RunRecord {
    fn failed(spec: &RunSpec, message: String) -> Self {
        RunRecord {
            spec: spec.clone(),
            status: None,
            stats: SearchStats::default(),
            events: Vec::new(),
            first: None,
            best: None,
            best_plan: None,
            oracle_cost: None,
            wall_ms: 0,
            error: Some(message),
        }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("oracle: {0}")]
    OracleCap(#[from] OracleError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invariant violation: {0}")]
    Invariant(String),
}

fn config_err<T>(message: impl Into<String>) -> Result<T, BenchError> {
    Err(BenchError::Config(message.into()))
}

/// Completes the evaluator configuration against the bound problem (the
/// hybrid normalization constant is the instance's maximum edge cost).
fn evaluator_for<P: SearchProblem>(spec: &RunSpec, problem: &P) -> Result<EvaluatorConfig, BenchError> {
    let mut cfg = EvaluatorConfig::new(spec.eval)
        .with_tiebreak(spec.tiebreak)
        .with_weight(spec.weight);
    if spec.eval == EvaluatorKind::WeightedCost && spec.weight < Ratio::from_integer(1) {
        return config_err("weight must be >= 1");
    }
    if spec.eval == EvaluatorKind::Hybrid {
        let (_, max) = problem
            .cost_bounds()
            .ok_or_else(|| BenchError::Config("hybrid needs known cost bounds".into()))?;
        cfg = cfg.with_max_cost(max);
    }
    Ok(cfg)
}

fn settings_for<P: SearchProblem>(spec: &RunSpec, problem: &P) -> Result<SearchSettings, BenchError> {
    let mut settings = SearchSettings::new(evaluator_for(spec, problem)?);
    settings.limits = spec.limits;
    settings.lookahead = spec.lookahead;
    settings.plateau_tau = spec.plateau_tau;
    Ok(settings)
}

fn outcome_to_record(spec: &RunSpec, outcome: SearchOutcome, wall_ms: u64) -> RunRecord {
    RunRecord {
        spec: spec.clone(),
        status: Some(outcome.status),
        stats: outcome.stats,
        first: outcome.events.first().map(|e| (e.cost, e.size)),
        best: outcome
            .incumbent
            .bound_cost
            .map(|c| (c, outcome.incumbent.plan.as_ref().map(|p| p.length).unwrap_or(0))),
        best_plan: outcome.incumbent.plan,
        events: outcome.events,
        oracle_cost: None,
        wall_ms,
        error: None,
    }
}

fn run_abstract<P, H>(
    spec: &RunSpec,
    problem: &P,
    mut exact: impl FnMut() -> H,
) -> Result<RunRecord, BenchError>
where
    P: SearchProblem,
    H: Heuristic<P::State>,
{
    if spec.lookahead {
        return config_err("lookahead requires a relaxed-plan heuristic on a grounded task");
    }
    let settings = settings_for(spec, problem)?;
    let mut h_zero = ZeroHeuristic;
    let mut prune_zero = ZeroHeuristic;
    let mut h_exact = exact();
    let mut prune_exact = exact();
    let h: &mut dyn Heuristic<P::State> = match spec.heuristic {
        HeuristicKind::Zero => &mut h_zero,
        HeuristicKind::Exact => &mut h_exact,
        other => {
            return config_err(format!(
                "heuristic `{}` is not available on {}",
                other.cli_name(),
                spec.domain.domain_name()
            ))
        }
    };
    let prune: &mut dyn Heuristic<P::State> = match spec.prune {
        PruneKind::Zero => &mut prune_zero,
        PruneKind::Exact => &mut prune_exact,
    };
    let start = Instant::now();
    let outcome = best_first_bnb(problem, &settings, h, prune, None, None);
    Ok(outcome_to_record(spec, outcome, start.elapsed().as_millis() as u64))
}

fn run_grounded(spec: &RunSpec, problem: &GroundedProblem) -> Result<RunRecord, BenchError> {
    let settings = settings_for(spec, problem)?;
    let task = problem.task();
    let mut h_zero = ZeroHeuristic;
    let mut prune_zero = ZeroHeuristic;
    let mut h_rp;
    let h: &mut dyn Heuristic<_> = match spec.heuristic {
        HeuristicKind::Zero => &mut h_zero,
        HeuristicKind::Exact => {
            return config_err("exact heuristic is only available on the trap domains")
        }
        kind => {
            h_rp = RelaxedPlanHeuristic::new(task, kind);
            &mut h_rp
        }
    };
    if spec.prune == PruneKind::Exact {
        return config_err("exact prune heuristic is only available on the trap domains");
    }
    let mut exclusion_h;
    let exclusion: Option<&mut dyn OperatorExclusion<_>> = if spec.lookahead {
        if spec.heuristic == HeuristicKind::Zero {
            return config_err("lookahead requires a relaxed-plan heuristic");
        }
        exclusion_h = RelaxedPlanHeuristic::new(task, spec.heuristic);
        Some(&mut exclusion_h)
    } else {
        None
    };
    let start = Instant::now();
    let outcome = best_first_bnb(problem, &settings, h, &mut prune_zero, exclusion, None);
    Ok(outcome_to_record(spec, outcome, start.elapsed().as_millis() as u64))
}

/// Builds the grounded task behind a domain spec, when there is one.
pub fn build_task(domain: &DomainSpec) -> Result<Option<GroundedTask>, BenchError> {
    match domain {
        DomainSpec::Rendezvous { passengers, planes } => {
            let task = rendezvous_task(&RendezvousConfig::new(*passengers, *planes))
                .map_err(|e| BenchError::Config(e.to_string()))?;
            Ok(Some(task))
        }
        DomainSpec::Chain { chain_length } => {
            let task = chain_swap_task(&ChainSwapConfig::new(*chain_length))
                .map_err(|e| BenchError::Config(e.to_string()))?;
            Ok(Some(task))
        }
        DomainSpec::TaskFile { path } => {
            let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
                path: path.clone(),
                source,
            })?;
            let task = parse_task(&text)
                .map_err(|e| BenchError::Config(format!("{path}: {e}")))?;
            Ok(Some(task))
        }
        DomainSpec::Inline { task } => Ok(Some(task.clone())),
        _ => Ok(None),
    }
}

/// Executes one run.
pub fn run_one(spec: &RunSpec) -> Result<RunRecord, BenchError> {
    match &spec.domain {
        DomainSpec::Cycle {
            k,
            expensive_cost,
            goal,
        } => {
            let cfg = spec.domain.cycle_config(*k, *expensive_cost, *goal);
            let trap = cycle_trap(cfg).map_err(|e| BenchError::Config(e.to_string()))?;
            run_abstract(spec, &trap, || CycleExact::new(cfg))
        }
        DomainSpec::BTree {
            x,
            y,
            high_cost,
            low_cost,
            goal_high,
            goal_low,
            depth_cap,
        } => {
            let cfg = BranchingTrapConfig {
                x: *x,
                y: *y,
                high_cost: *high_cost,
                low_cost: *low_cost,
                goal_high: *goal_high,
                goal_low: *goal_low,
                depth_cap: *depth_cap,
            };
            let trap = branching_trap(cfg).map_err(|e| BenchError::Config(e.to_string()))?;
            run_abstract(spec, &trap, || BranchingExact::new(cfg))
        }
        DomainSpec::Opaque { .. } => {
            config_err("records read back from CSV cannot be re-run")
        }
        _ => {
            let task = build_task(&spec.domain)?.expect("grounded domain");
            let problem =
                ground_problem(task).map_err(|e| BenchError::Config(e.to_string()))?;
            run_grounded(spec, &problem)
        }
    }
}

/// Oracle optimum of the problem behind `domain`, or `None` when the state
/// cap is exceeded or there is no solution.
pub fn oracle_optimum(domain: &DomainSpec, state_cap: u64) -> Result<Option<Cost>, BenchError> {
    let result = match domain {
        DomainSpec::Cycle {
            k,
            expensive_cost,
            goal,
        } => {
            let cfg = domain.cycle_config(*k, *expensive_cost, *goal);
            let trap = cycle_trap(cfg).map_err(|e| BenchError::Config(e.to_string()))?;
            dijkstra_oracle(&trap, state_cap).map(|o| o.optimal_goal)
        }
        DomainSpec::BTree {
            x,
            y,
            high_cost,
            low_cost,
            goal_high,
            goal_low,
            depth_cap,
        } => {
            let cfg = BranchingTrapConfig {
                x: *x,
                y: *y,
                high_cost: *high_cost,
                low_cost: *low_cost,
                goal_high: *goal_high,
                goal_low: *goal_low,
                depth_cap: *depth_cap,
            };
            let trap = branching_trap(cfg).map_err(|e| BenchError::Config(e.to_string()))?;
            dijkstra_oracle(&trap, state_cap).map(|o| o.optimal_goal)
        }
        DomainSpec::Opaque { .. } => return Ok(None),
        _ => {
            let task = build_task(domain)?.expect("grounded domain");
            let problem =
                ground_problem(task).map_err(|e| BenchError::Config(e.to_string()))?;
            dijkstra_oracle(&problem, state_cap).map(|o| o.optimal_goal)
        }
    };
    match result {
        Ok(goal) => Ok(goal.map(|e| e.cost)),
        Err(OracleError::CapExceeded(_)) => Ok(None),
    }
}

/// Full oracle table as CSV: one row per reachable state with its optimal
/// cost and the minimum length among optimal-cost paths. Fails when the
/// state cap is exceeded.
pub fn oracle_table(domain: &DomainSpec, state_cap: u64) -> Result<String, BenchError> {
    fn emit<P: SearchProblem>(problem: &P, state_cap: u64) -> Result<String, BenchError> {
        let oracle = dijkstra_oracle(problem, state_cap)?;
        let mut states: Vec<_> = oracle.per_state.iter().collect();
        states.sort_by(|a, b| a.0.cmp(b.0));
        let mut out = String::new();
        match oracle.optimal_goal {
            Some(goal) => out.push_str(&format!(
                "# optimal goal: cost={} size={}\n",
                goal.cost, goal.size
            )),
            None => out.push_str("# optimal goal: unreachable\n"),
        }
        out.push_str("state,cost,size\n");
        for (state, entry) in states {
            out.push_str(&format!(
                "{},{},{}\n",
                problem.state_label(state),
                entry.cost,
                entry.size
            ));
        }
        Ok(out)
    }
    match domain {
        DomainSpec::Cycle {
            k,
            expensive_cost,
            goal,
        } => {
            let cfg = domain.cycle_config(*k, *expensive_cost, *goal);
            let trap = cycle_trap(cfg).map_err(|e| BenchError::Config(e.to_string()))?;
            emit(&trap, state_cap)
        }
        DomainSpec::BTree {
            x,
            y,
            high_cost,
            low_cost,
            goal_high,
            goal_low,
            depth_cap,
        } => {
            let cfg = BranchingTrapConfig {
                x: *x,
                y: *y,
                high_cost: *high_cost,
                low_cost: *low_cost,
                goal_high: *goal_high,
                goal_low: *goal_low,
                depth_cap: *depth_cap,
            };
            let trap = branching_trap(cfg).map_err(|e| BenchError::Config(e.to_string()))?;
            emit(&trap, state_cap)
        }
        DomainSpec::Opaque { .. } => {
            config_err("records read back from CSV have no underlying problem")
        }
        _ => {
            let task = build_task(domain)?.expect("grounded domain");
            let problem =
                ground_problem(task).map_err(|e| BenchError::Config(e.to_string()))?;
            emit(&problem, state_cap)
        }
    }
}

/// Executes all runs (optionally in parallel), attaches oracle optima where
/// the cap allows, and preserves spec order in the output. Individual run
/// failures become error records; the matrix keeps going.
pub fn run_matrix(
    specs: &[RunSpec],
    jobs: usize,
    oracle_cap: u64,
) -> Result<Vec<RunRecord>, BenchError> {
    let mut oracle_costs: HashMap<String, Option<Cost>> = HashMap::new();
    for spec in specs {
        let key = spec.domain.problem_key();
        if !oracle_costs.contains_key(&key) {
            let cost = oracle_optimum(&spec.domain, oracle_cap).unwrap_or(None);
            oracle_costs.insert(key, cost);
        }
    }

    let execute = |spec: &RunSpec| -> RunRecord {
        match run_one(spec) {
            Ok(mut record) => {
                record.oracle_cost = oracle_costs[&spec.domain.problem_key()];
                record
            }
            Err(e) => RunRecord::failed(spec, e.to_string()),
        }
    };

    let records: Vec<RunRecord> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| BenchError::Config(e.to_string()))?;
        pool.install(|| {
            use rayon::prelude::*;
            specs.par_iter().map(execute).collect()
        })
    } else {
        specs.iter().map(execute).collect()
    };

    for record in &records {
        if record.status == Some(SearchStatus::ProvedOptimal) {
            if let (Some((best, _)), Some(oracle)) = (record.best, record.oracle_cost) {
                if best != oracle {
                    return Err(BenchError::Invariant(format!(
                        "run {} proved cost {} but the oracle optimum is {}",
                        record.spec.id, best, oracle
                    )));
                }
            }
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_spec(id: &str, eval: EvaluatorKind) -> RunSpec {
        RunSpec::new(
            id,
            DomainSpec::Cycle {
                k: 4,
                expensive_cost: None,
                goal: None,
            },
            eval,
            HeuristicKind::Zero,
        )
    }

    #[test]
    fn cycle_run_proves_nine() {
        let record = run_one(&cycle_spec("r0", EvaluatorKind::Size)).unwrap();
        assert_eq!(record.status, Some(SearchStatus::ProvedOptimal));
        assert_eq!(record.best, Some((9, 2)));
    }

    #[test]
    fn matrix_preserves_order_and_attaches_oracle() {
        let specs = vec![
            cycle_spec("a", EvaluatorKind::Cost),
            cycle_spec("b", EvaluatorKind::Size),
        ];
        let records = run_matrix(&specs, 2, 1000).unwrap();
        assert_eq!(records[0].spec.id, "a");
        assert_eq!(records[1].spec.id, "b");
        assert!(records.iter().all(|r| r.oracle_cost == Some(9)));
    }

    #[test]
    fn same_spec_twice_is_identical() {
        let spec = cycle_spec("x", EvaluatorKind::Cost);
        let records = run_matrix(&[spec.clone(), spec], 1, 1000).unwrap();
        assert_eq!(records[0].stats, records[1].stats);
        assert_eq!(records[0].events, records[1].events);
    }

    #[test]
    fn empty_matrix_is_empty() {
        assert!(run_matrix(&[], 1, 10).unwrap().is_empty());
    }

    #[test]
    fn bad_pairing_is_a_config_error() {
        let mut spec = cycle_spec("bad", EvaluatorKind::Cost);
        spec.heuristic = HeuristicKind::RpCost;
        assert!(matches!(run_one(&spec), Err(BenchError::Config(_))));
        // ... and the matrix records it instead of dying.
        let records = run_matrix(&[spec], 1, 10).unwrap();
        assert!(records[0].error.is_some());
    }
}
