//! Best-first branch-and-bound over implicit graphs.
//!
//! The loop follows the canonical order: dequeue, bound test, goal test,
//! duplicate test, expand, evaluate children, enqueue. The search keeps
//! running after a solution is found and uses the incumbent's cost to prune;
//! every incumbent improvement is reported as a [`SolutionEvent`], so a run
//! interrupted at any point still yields the best solution seen so far.

use crate::eval::{EvaluatorConfig, EvaluatorKind, Priority, Rational};
use crate::graph::{ActionId, Cost, NodeArena, NodeId, Plan, SearchProblem};
use crate::heuristics::{Heuristic, HeuristicValue, OperatorExclusion};
use num_rational::Ratio;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

/// Resource limits; exceeding one ends the run with `BudgetExhausted`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchLimits {
    pub max_expansions: Option<u64>,
    pub max_wall_ms: Option<u64>,
    pub max_nodes_in_memory: Option<u64>,
}

impl SearchLimits {
    pub fn none() -> Self {
        SearchLimits::default()
    }

    pub fn expansions(n: u64) -> Self {
        SearchLimits {
            max_expansions: Some(n),
            ..SearchLimits::default()
        }
    }
}

/// One incumbent improvement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionEvent {
    pub cost: Cost,
    pub size: u64,
    pub expansions_at_event: u64,
    pub wall_ms_at_event: u64,
    pub plan: Plan,
}

/// The best solution found so far; its cost is the running upper bound.
#[derive(Debug, Clone, Default)]
pub struct Incumbent {
    pub plan: Option<Plan>,
    /// `None` means no solution yet (an infinite bound).
    pub bound_cost: Option<Cost>,
}

impl Incumbent {
    pub fn cost(&self) -> Option<Cost> {
        self.bound_cost
    }
}

/// Counters for one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expansions: u64,
    pub generations: u64,
    pub duplicates_pruned: u64,
    pub reopenings: u64,
    pub bound_prunes: u64,
    pub goal_tests: u64,
    pub heuristic_calls: u64,
    pub lookahead_invocations: u64,
    /// Expansion count when the first solution was reported.
    pub discovery_expansions: Option<u64>,
    /// Expansion count at termination, when optimality was proven.
    pub proof_expansions: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    ProvedOptimal,
    BudgetExhausted,
    ExhaustedNoSolution,
}

impl SearchStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchStatus::ProvedOptimal => "PROVED_OPTIMAL",
            SearchStatus::BudgetExhausted => "BUDGET_EXHAUSTED",
            SearchStatus::ExhaustedNoSolution => "EXHAUSTED_NO_SOLUTION",
        }
    }
}

/// Degree of usefulness of an operator at a state: the heuristic loss its
/// removal would cause, minus what it already achieved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Usefulness {
    /// The child is a dead end; never worth the lookahead expansion.
    DeadEndChild,
    Finite(Rational),
    /// Removing the operator makes the goal unreachable: maximally useful.
    Infinite,
}

impl Usefulness {
    pub fn is_positive(&self) -> bool {
        match self {
            Usefulness::DeadEndChild => false,
            Usefulness::Finite(v) => *v > Ratio::from_integer(0),
            Usefulness::Infinite => true,
        }
    }
}

impl Ord for Usefulness {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        use Usefulness::*;
        match (self, other) {
            (DeadEndChild, DeadEndChild) | (Infinite, Infinite) => Equal,
            (DeadEndChild, _) => Less,
            (_, DeadEndChild) => Greater,
            (Infinite, _) => Greater,
            (_, Infinite) => Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Usefulness {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// The usefulness table recorded at one lookahead invocation.
#[derive(Debug, Clone)]
pub struct LookaheadRecord {
    pub state_label: String,
    pub entries: Vec<(ActionId, Usefulness)>,
    pub chosen: Option<ActionId>,
}

/// Everything a run needs besides the problem and heuristics.
#[derive(Debug, Clone)]
pub struct SearchSettings {
    pub evaluator: EvaluatorConfig,
    pub limits: SearchLimits,
    /// Enables the one-step usefulness lookahead on plateau dequeues.
    pub lookahead: bool,
    /// Relative plateau threshold: an incoming edge is flat when its cost is
    /// at most tau * max_cost. `None` picks tau = epsilon (so exactly the
    /// min-cost edges count as flat).
    pub plateau_tau: Option<Rational>,
    /// Branch-and-bound pruning against the incumbent. Disabling it gives
    /// plain best-first search; proofs are then impossible.
    pub incumbent_pruning: bool,
    /// Whether the configured prune heuristic is a guaranteed lower bound.
    pub prune_admissible: bool,
    /// Record usefulness tables in the outcome.
    pub trace_lookahead: bool,
}

impl SearchSettings {
    pub fn new(evaluator: EvaluatorConfig) -> Self {
        SearchSettings {
            evaluator,
            limits: SearchLimits::none(),
            lookahead: false,
            plateau_tau: None,
            incumbent_pruning: true,
            prune_admissible: true,
            trace_lookahead: false,
        }
    }
}

/// Result of one run.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub incumbent: Incumbent,
    pub events: Vec<SolutionEvent>,
    pub stats: SearchStats,
    pub lookahead_trace: Vec<LookaheadRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct OpenEntry {
    priority: Priority,
    node: NodeId,
}

impl Ord for OpenEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.priority
            .cmp(&other.priority)
            .then_with(|| self.node.cmp(&other.node))
    }
}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Outcome of the duplicate test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DuplicateVerdict {
    Fresh,
    Prune,
    Reopen,
}

/// Dominance test on the (g_cost, g_size) pair. A revisit is pruned only
/// when it improves neither component; otherwise the improved component(s)
/// are recorded and the node is re-expanded.
pub fn duplicate_test<S: Clone + Eq + std::hash::Hash>(
    state: &S,
    g_cost: Cost,
    g_size: u64,
    closed: &mut HashMap<S, (Cost, u64)>,
) -> DuplicateVerdict {
    match closed.get_mut(state) {
        None => {
            closed.insert(state.clone(), (g_cost, g_size));
            DuplicateVerdict::Fresh
        }
        Some((best_cost, best_size)) => {
            if g_cost >= *best_cost && g_size >= *best_size {
                DuplicateVerdict::Prune
            } else {
                *best_cost = (*best_cost).min(g_cost);
                *best_size = (*best_size).min(g_size);
                DuplicateVerdict::Reopen
            }
        }
    }
}

/// Prune test against the incumbent: true means discard. Equal-cost
/// rediscoveries are pruned (the comparison is `>=`).
pub fn bound_test(
    g_cost: Cost,
    prune_estimate: &HeuristicValue,
    incumbent_cost: Option<Cost>,
) -> bool {
    let Some(bound) = incumbent_cost else {
        return false;
    };
    match prune_estimate {
        HeuristicValue::Infinite => true,
        HeuristicValue::Finite { cost, .. } => g_cost + cost >= bound,
    }
}

struct Engine<'p, P: SearchProblem> {
    problem: &'p P,
    settings: SearchSettings,
    arena: NodeArena<P::State>,
    open: BinaryHeap<Reverse<OpenEntry>>,
    closed: HashMap<P::State, (Cost, u64)>,
    incumbent: Incumbent,
    events: Vec<SolutionEvent>,
    stats: SearchStats,
    trace: Vec<LookaheadRecord>,
    start: Instant,
    /// max_cost used by the plateau rule; `None` disables it.
    plateau_limit: Option<(Rational, Cost)>,
}

/// Runs best-first branch-and-bound.
///
/// `h` feeds the evaluation function; `prune_h` feeds the bound test and
/// should be admissible (the zero heuristic always is). `exclusion` supplies
/// the operator-removal recomputation for the lookahead and may be `None`
/// when lookahead is off.
pub fn best_first_bnb<P: SearchProblem>(
    problem: &P,
    settings: &SearchSettings,
    h: &mut dyn Heuristic<P::State>,
    prune_h: &mut dyn Heuristic<P::State>,
    mut exclusion: Option<&mut dyn OperatorExclusion<P::State>>,
    mut listener: Option<&mut dyn FnMut(&SolutionEvent)>,
) -> SearchOutcome {
    let plateau_limit = problem.cost_bounds().map(|(min, max)| {
        let tau = settings
            .plateau_tau
            .unwrap_or_else(|| Ratio::new(min as i64, max as i64));
        (tau, max)
    });
    let engine = Engine {
        problem,
        settings: settings.clone(),
        arena: NodeArena::new(),
        open: BinaryHeap::new(),
        closed: HashMap::new(),
        incumbent: Incumbent::default(),
        events: Vec::new(),
        stats: SearchStats::default(),
        trace: Vec::new(),
        start: Instant::now(),
        plateau_limit,
    };
    engine.run(h, prune_h, &mut exclusion, &mut listener)
}

impl<'p, P: SearchProblem> Engine<'p, P> {
    fn run(
        mut self,
        h: &mut dyn Heuristic<P::State>,
        prune_h: &mut dyn Heuristic<P::State>,
        exclusion: &mut Option<&mut dyn OperatorExclusion<P::State>>,
        listener: &mut Option<&mut dyn FnMut(&SolutionEvent)>,
    ) -> SearchOutcome {
        let root = self.arena.root(self.problem.initial());
        self.stats.generations = 1;
        self.enqueue(root, h);

        let mut budget_hit = false;
        let mut ticks: u32 = 0;
        while let Some(Reverse(entry)) = self.open.pop() {
            if self.limits_exceeded(&mut ticks) {
                budget_hit = true;
                break;
            }
            let node = entry.node;
            let (g_cost, g_size) = {
                let n = self.arena.get(node);
                (n.g_cost, n.g_size)
            };

            // Bound test.
            if self.settings.incumbent_pruning && self.incumbent.bound_cost.is_some() {
                let state = self.arena.get(node).state.clone();
                self.stats.heuristic_calls += 1;
                let pv = prune_h.estimate(&state);
                if bound_test(g_cost, &pv, self.incumbent.bound_cost) {
                    self.stats.bound_prunes += 1;
                    continue;
                }
            }

            // Goal test. Goal nodes are never expanded further, whether or
            // not they improve the incumbent.
            self.stats.goal_tests += 1;
            if self.problem.is_goal(&self.arena.get(node).state) {
                self.try_report(node, listener);
                continue;
            }

            // Duplicate test.
            let state = self.arena.get(node).state.clone();
            match duplicate_test(&state, g_cost, g_size, &mut self.closed) {
                DuplicateVerdict::Prune => {
                    self.stats.duplicates_pruned += 1;
                    continue;
                }
                DuplicateVerdict::Reopen => {
                    self.stats.reopenings += 1;
                }
                DuplicateVerdict::Fresh => {}
            }

            // Expand.
            let lookahead_here =
                self.settings.lookahead && exclusion.is_some() && self.plateau(node);
            let edges = self.problem.expand(&state);
            self.stats.expansions += 1;
            let children: Vec<NodeId> = edges
                .iter()
                .map(|e| {
                    self.stats.generations += 1;
                    self.arena.extend(node, e)
                })
                .collect();

            if lookahead_here {
                let excl = exclusion.as_deref_mut().expect("checked above");
                self.lookahead_step(&state, &edges, &children, h, prune_h, excl, listener);
            } else {
                for child in children {
                    self.enqueue(child, h);
                }
            }
        }

        let status = if budget_hit {
            SearchStatus::BudgetExhausted
        } else if self.incumbent.plan.is_some() {
            debug_assert!(self.settings.prune_admissible || !self.settings.incumbent_pruning);
            self.stats.proof_expansions = Some(self.stats.expansions);
            SearchStatus::ProvedOptimal
        } else {
            SearchStatus::ExhaustedNoSolution
        };

        SearchOutcome {
            status,
            incumbent: self.incumbent,
            events: self.events,
            stats: self.stats,
            lookahead_trace: self.trace,
        }
    }

    fn limits_exceeded(&self, ticks: &mut u32) -> bool {
        let limits = &self.settings.limits;
        if let Some(max) = limits.max_expansions {
            if self.stats.expansions >= max {
                return true;
            }
        }
        if let Some(max) = limits.max_nodes_in_memory {
            if self.arena.len() as u64 >= max {
                return true;
            }
        }
        if let Some(max) = limits.max_wall_ms {
            *ticks += 1;
            if *ticks % 256 == 0 && self.start.elapsed().as_millis() as u64 >= max {
                return true;
            }
        }
        false
    }

    fn enqueue(&mut self, node: NodeId, h: &mut dyn Heuristic<P::State>) {
        let (state, g_cost, g_size, seq) = {
            let n = self.arena.get(node);
            (n.state.clone(), n.g_cost, n.g_size, node.seq())
        };
        self.stats.heuristic_calls += 1;
        let hv = h.estimate(&state);
        // Infinite estimates mark dead ends; such nodes are never enqueued.
        if let Some(priority) = self.settings.evaluator.priority(g_cost, g_size, &hv, seq) {
            self.open.push(Reverse(OpenEntry { priority, node }));
        }
    }

    /// Reports `node` if it strictly improves the incumbent.
    fn try_report(
        &mut self,
        node: NodeId,
        listener: &mut Option<&mut dyn FnMut(&SolutionEvent)>,
    ) {
        let g_cost = self.arena.get(node).g_cost;
        let improves = match self.incumbent.bound_cost {
            None => true,
            Some(bound) => g_cost < bound,
        };
        if !improves {
            return;
        }
        let plan = self.arena.reconstruct_plan(node);
        let event = SolutionEvent {
            cost: plan.total_cost,
            size: plan.length,
            expansions_at_event: self.stats.expansions,
            wall_ms_at_event: self.start.elapsed().as_millis() as u64,
            plan: plan.clone(),
        };
        if self.stats.discovery_expansions.is_none() {
            self.stats.discovery_expansions = Some(self.stats.expansions);
        }
        if let Some(l) = listener.as_deref_mut() {
            l(&event);
        }
        self.events.push(event);
        self.incumbent.bound_cost = Some(plan.total_cost);
        self.incumbent.plan = Some(plan);
    }

    /// A dequeued node sits on a plateau when its incoming step left the
    /// evaluator's g-component flat. Integer costs never leave the structural
    /// component flat, so the relative rule carries it: a step is flat when
    /// its cost is at most tau * max_cost (with tau = epsilon by default,
    /// exactly the min-cost edges).
    fn plateau(&self, node: NodeId) -> bool {
        let n = self.arena.get(node);
        if n.parent.is_none() {
            return false;
        }
        let step = n.step_cost;
        let structural_flat = match self.settings.evaluator.kind {
            EvaluatorKind::Cost | EvaluatorKind::WeightedCost => step == 0,
            EvaluatorKind::Size | EvaluatorKind::CsSize | EvaluatorKind::Hybrid => false,
        };
        if structural_flat {
            return true;
        }
        match self.plateau_limit {
            Some((tau, max_cost)) => {
                Ratio::from_integer(step as i64) <= tau * Ratio::from_integer(max_cost as i64)
            }
            None => false,
        }
    }

    /// One-step usefulness lookahead: scores every applicable operator by
    /// how much the heuristic would lose without it, expands the most useful
    /// child immediately when one is strictly useful, and enqueues everything
    /// else (plus the expanded child's own children) normally.
    #[allow(clippy::too_many_arguments)]
    fn lookahead_step(
        &mut self,
        state: &P::State,
        edges: &[crate::graph::OutEdge<P::State>],
        children: &[NodeId],
        h: &mut dyn Heuristic<P::State>,
        prune_h: &mut dyn Heuristic<P::State>,
        exclusion: &mut dyn OperatorExclusion<P::State>,
        listener: &mut Option<&mut dyn FnMut(&SolutionEvent)>,
    ) {
        self.stats.lookahead_invocations += 1;
        let kind = self.settings.evaluator.kind;
        let max_cost = self.settings.evaluator.max_cost;
        let mut entries: Vec<(ActionId, Usefulness)> = Vec::with_capacity(edges.len());
        let mut best: Option<(usize, Usefulness)> = None;
        for (i, edge) in edges.iter().enumerate() {
            self.stats.heuristic_calls += 1;
            let child_value = h.estimate(&edge.target);
            let usefulness = if child_value.is_infinite() {
                Usefulness::DeadEndChild
            } else {
                self.stats.heuristic_calls += 1;
                match exclusion.estimate_without(edge.action, state) {
                    HeuristicValue::Infinite => Usefulness::Infinite,
                    without => Usefulness::Finite(
                        h_term(kind, max_cost, &without) - h_term(kind, max_cost, &child_value),
                    ),
                }
            };
            entries.push((edge.action, usefulness));
            let better = match &best {
                None => true,
                Some((_, b)) => usefulness > *b,
            };
            if better {
                best = Some((i, usefulness));
            }
        }

        let chosen_index = match best {
            Some((i, u)) if u.is_positive() => Some(i),
            _ => None,
        };
        if self.settings.trace_lookahead {
            self.trace.push(LookaheadRecord {
                state_label: self.problem.state_label(state),
                entries,
                chosen: chosen_index.map(|i| edges[i].action),
            });
        }

        for (i, &child) in children.iter().enumerate() {
            if Some(i) == chosen_index {
                self.process_inline(child, h, prune_h, listener);
            } else {
                self.enqueue(child, h);
            }
        }
    }

    /// Runs the dequeue pipeline on a lookahead child without the open list:
    /// bound, goal, duplicate, then expansion with normal enqueueing.
    fn process_inline(
        &mut self,
        node: NodeId,
        h: &mut dyn Heuristic<P::State>,
        prune_h: &mut dyn Heuristic<P::State>,
        listener: &mut Option<&mut dyn FnMut(&SolutionEvent)>,
    ) {
        let (state, g_cost, g_size) = {
            let n = self.arena.get(node);
            (n.state.clone(), n.g_cost, n.g_size)
        };
        if self.settings.incumbent_pruning && self.incumbent.bound_cost.is_some() {
            self.stats.heuristic_calls += 1;
            let pv = prune_h.estimate(&state);
            if bound_test(g_cost, &pv, self.incumbent.bound_cost) {
                self.stats.bound_prunes += 1;
                return;
            }
        }
        self.stats.goal_tests += 1;
        if self.problem.is_goal(&state) {
            self.try_report(node, listener);
            return;
        }
        match duplicate_test(&state, g_cost, g_size, &mut self.closed) {
            DuplicateVerdict::Prune => {
                self.stats.duplicates_pruned += 1;
                return;
            }
            DuplicateVerdict::Reopen => self.stats.reopenings += 1,
            DuplicateVerdict::Fresh => {}
        }
        let edges = self.problem.expand(&state);
        self.stats.expansions += 1;
        let children: Vec<NodeId> = edges
            .iter()
            .map(|e| {
                self.stats.generations += 1;
                self.arena.extend(node, e)
            })
            .collect();
        for child in children {
            self.enqueue(child, h);
        }
    }
}

/// The heuristic term the active evaluator consumes, used to measure
/// usefulness in the evaluator's own units.
fn h_term(kind: EvaluatorKind, max_cost: Option<Cost>, v: &HeuristicValue) -> Rational {
    let (cost, size) = match v {
        HeuristicValue::Infinite => unreachable!("callers handle infinite separately"),
        HeuristicValue::Finite { cost, size } => (*cost, *size),
    };
    match kind {
        EvaluatorKind::Cost | EvaluatorKind::WeightedCost => Ratio::from_integer(cost as i64),
        EvaluatorKind::Size | EvaluatorKind::CsSize => Ratio::from_integer(size as i64),
        EvaluatorKind::Hybrid => {
            let max = max_cost.expect("hybrid requires max_cost");
            Ratio::from_integer(size as i64) + Ratio::new(cost as i64, max as i64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::TieBreak;
    use crate::graph::OutEdge;
    use crate::heuristics::ZeroHeuristic;

    /// Small explicit graph for engine unit tests.
    struct TinyGraph {
        edges: Vec<Vec<(u32, Cost)>>,
        goal: u32,
    }

    impl SearchProblem for TinyGraph {
        type State = u32;

        fn initial(&self) -> u32 {
            0
        }

        fn is_goal(&self, s: &u32) -> bool {
            *s == self.goal
        }

        fn expand(&self, s: &u32) -> Vec<OutEdge<u32>> {
            self.edges[*s as usize]
                .iter()
                .enumerate()
                .map(|(i, &(target, cost))| OutEdge {
                    action: i as ActionId,
                    target,
                    cost,
                })
                .collect()
        }

        fn cost_bounds(&self) -> Option<(Cost, Cost)> {
            let all: Vec<Cost> = self
                .edges
                .iter()
                .flat_map(|v| v.iter().map(|&(_, c)| c))
                .collect();
            Some((*all.iter().min()?, *all.iter().max()?))
        }

        fn action_name(&self, a: ActionId) -> String {
            format!("e{a}")
        }

        fn state_label(&self, s: &u32) -> String {
            s.to_string()
        }
    }

    fn run(
        problem: &TinyGraph,
        kind: EvaluatorKind,
    ) -> SearchOutcome {
        let settings = SearchSettings::new(
            EvaluatorConfig::new(kind).with_tiebreak(TieBreak::None),
        );
        best_first_bnb(
            problem,
            &settings,
            &mut ZeroHeuristic,
            &mut ZeroHeuristic,
            None,
            None,
        )
    }

    #[test]
    fn bound_test_rules() {
        let zero = HeuristicValue::zero();
        assert!(!bound_test(100, &zero, None), "infinite bound never prunes");
        assert!(bound_test(9, &zero, Some(9)), "ties are pruned");
        assert!(!bound_test(
            5,
            &HeuristicValue::Finite { cost: 3, size: 1 },
            Some(9)
        ));
        assert!(bound_test(5, &HeuristicValue::Infinite, Some(9)));
    }

    #[test]
    fn duplicate_dominance() {
        let mut closed = HashMap::new();
        assert_eq!(
            duplicate_test(&7u32, 5, 2, &mut closed),
            DuplicateVerdict::Fresh
        );
        assert_eq!(
            duplicate_test(&7u32, 5, 2, &mut closed),
            DuplicateVerdict::Prune
        );
        // Cheaper but longer: reopen, and both minima are recorded.
        assert_eq!(
            duplicate_test(&7u32, 3, 4, &mut closed),
            DuplicateVerdict::Reopen
        );
        assert_eq!(closed[&7u32], (3, 2));
    }

    #[test]
    fn diamond_reopen_keeps_cost_exact() {
        // 0 -3-> 3(goal via 2);  0 -1-> 1 -1-> 2 ... diamond on state 2:
        // direct edge costs 3 (size 1), two-step path costs 2 (size 2).
        let g = TinyGraph {
            edges: vec![
                vec![(2, 3), (1, 1)],
                vec![(2, 1)],
                vec![(3, 5)],
                vec![],
            ],
            goal: 3,
        };
        // Size order finds the direct (costlier) route to 2 first, then the
        // cheaper two-step route arrives and must reopen.
        let outcome = run(&g, EvaluatorKind::Size);
        assert_eq!(outcome.status, SearchStatus::ProvedOptimal);
        assert_eq!(outcome.incumbent.bound_cost, Some(7));
        assert!(outcome.stats.reopenings >= 1, "cheaper-but-longer reopens");

        let outcome = run(&g, EvaluatorKind::Cost);
        assert_eq!(outcome.incumbent.bound_cost, Some(7));
    }

    #[test]
    fn unsolvable_reports_exhausted() {
        let g = TinyGraph {
            edges: vec![vec![(1, 1)], vec![]],
            goal: 9,
        };
        let outcome = run(&g, EvaluatorKind::Cost);
        assert_eq!(outcome.status, SearchStatus::ExhaustedNoSolution);
        assert!(outcome.incumbent.plan.is_none());
        assert!(outcome.events.is_empty());
    }

    #[test]
    fn budget_reports_exhaustion_status() {
        let g = TinyGraph {
            edges: vec![vec![(1, 1)], vec![(0, 1)]],
            goal: 9,
        };
        let mut settings = SearchSettings::new(EvaluatorConfig::new(EvaluatorKind::Cost));
        settings.limits = SearchLimits::expansions(3);
        let outcome = best_first_bnb(
            &g,
            &settings,
            &mut ZeroHeuristic,
            &mut ZeroHeuristic,
            None,
            None,
        );
        assert_eq!(outcome.status, SearchStatus::BudgetExhausted);
        assert!(outcome.stats.expansions <= 4);
    }

    #[test]
    fn event_costs_strictly_decrease() {
        // Two goals routes: expensive shallow goal, cheap deep goal.
        let g = TinyGraph {
            edges: vec![vec![(3, 10), (1, 1)], vec![(2, 1)], vec![(3, 1)], vec![]],
            goal: 3,
        };
        let outcome = run(&g, EvaluatorKind::Size);
        assert!(outcome.events.len() >= 2);
        for pair in outcome.events.windows(2) {
            assert!(pair[1].cost < pair[0].cost);
        }
        assert_eq!(
            outcome.events.last().unwrap().cost,
            outcome.incumbent.bound_cost.unwrap()
        );
    }

    #[test]
    fn goal_nodes_are_not_expanded() {
        // Goal state 1 has a successor that would reach a cheaper goal if
        // goal nodes were expanded; the engine must not consider it.
        let g = TinyGraph {
            edges: vec![vec![(1, 5)], vec![(2, 1)], vec![]],
            goal: 1,
        };
        let outcome = run(&g, EvaluatorKind::Cost);
        assert_eq!(outcome.status, SearchStatus::ProvedOptimal);
        assert_eq!(outcome.incumbent.bound_cost, Some(5));
        assert_eq!(outcome.stats.expansions, 1, "only the root expands");
    }

    #[test]
    fn deterministic_repeat_runs() {
        let g = TinyGraph {
            edges: vec![
                vec![(1, 2), (2, 2)],
                vec![(3, 2)],
                vec![(3, 2)],
                vec![],
            ],
            goal: 3,
        };
        let a = run(&g, EvaluatorKind::Cost);
        let b = run(&g, EvaluatorKind::Cost);
        assert_eq!(a.stats, b.stats);
        assert_eq!(a.events, b.events);
    }
}
