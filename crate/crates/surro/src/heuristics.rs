//! Heuristic estimators.
//!
//! Every estimator returns a [`HeuristicValue`] carrying both a cost-to-go
//! and a size-to-go, so one instance can serve cost-based, size-based and
//! hybrid evaluation functions. The planning heuristics are built on
//! additive cost propagation over the delete relaxation followed by
//! best-supporter plan extraction: the extracted plan's cost sum is the
//! cost estimate and its action count is the size-of-cheapest-completion
//! estimate. Re-propagating with all costs set to 1 yields the
//! shortest-completion estimate instead.

use crate::domains::btree::{BranchPath, BranchingTrapConfig};
use crate::domains::cycle::CycleTrapConfig;
use crate::domains::strips::{FactSet, GroundedTask};
use crate::graph::{ActionId, Cost};
use std::collections::{BinaryHeap, HashMap};
use thiserror::Error;

/// Estimate of what remains from a state: cheapest completion cost and a
/// completion length. `Infinite` marks a dead end in both measures at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicValue {
    Finite { cost: Cost, size: u64 },
    Infinite,
}

impl HeuristicValue {
    pub fn zero() -> Self {
        HeuristicValue::Finite { cost: 0, size: 0 }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, HeuristicValue::Infinite)
    }

    pub fn cost(&self) -> Option<Cost> {
        match self {
            HeuristicValue::Finite { cost, .. } => Some(*cost),
            HeuristicValue::Infinite => None,
        }
    }

    pub fn size(&self) -> Option<u64> {
        match self {
            HeuristicValue::Finite { size, .. } => Some(*size),
            HeuristicValue::Infinite => None,
        }
    }
}

/// A heuristic instance is bound to one problem and lives for one run.
pub trait Heuristic<S> {
    fn estimate(&mut self, state: &S) -> HeuristicValue;
}

/// The zero heuristic: cost search becomes uniform-cost order, size search
/// becomes breadth-first order.
#[derive(Debug, Default, Clone)]
pub struct ZeroHeuristic;

impl<S> Heuristic<S> for ZeroHeuristic {
    fn estimate(&mut self, _state: &S) -> HeuristicValue {
        HeuristicValue::zero()
    }
}

/// Which estimator a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicKind {
    Zero,
    /// Per-domain closed form; available for the trap domains only.
    Exact,
    /// Additive cost table; cost is the table's goal sum.
    HAddCost,
    /// Relaxed-plan cost sum.
    RpCost,
    /// Size of the cheapest-cost relaxed plan.
    RpSizeCheap,
    /// Size of the shortest relaxed plan (all costs treated as 1).
    RpSizeShort,
}

impl HeuristicKind {
    pub fn cli_name(&self) -> &'static str {
        match self {
            HeuristicKind::Zero => "zero",
            HeuristicKind::Exact => "exact",
            HeuristicKind::HAddCost => "hadd",
            HeuristicKind::RpCost => "rp-cost",
            HeuristicKind::RpSizeCheap => "rp-size-cheap",
            HeuristicKind::RpSizeShort => "rp-size-short",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "zero" => HeuristicKind::Zero,
            "exact" => HeuristicKind::Exact,
            "hadd" => HeuristicKind::HAddCost,
            "rp-cost" => HeuristicKind::RpCost,
            "rp-size-cheap" => HeuristicKind::RpSizeCheap,
            "rp-size-short" => HeuristicKind::RpSizeShort,
            _ => return None,
        })
    }
}

// ---------------------------------------------------------------------------
// Exact estimators for the abstract trap domains
// ---------------------------------------------------------------------------

/// Exact cheapest-completion estimate on the cycle trap, with the size of
/// that cheapest completion.
#[derive(Debug, Clone)]
pub struct CycleExact {
    cfg: CycleTrapConfig,
}

impl CycleExact {
    pub fn new(cfg: CycleTrapConfig) -> Self {
        CycleExact { cfg }
    }
}

impl Heuristic<u64> for CycleExact {
    fn estimate(&mut self, state: &u64) -> HeuristicValue {
        let (cost, size) = self.cfg.exact_to_goal(*state);
        HeuristicValue::Finite { cost, size }
    }
}

/// Exact completion estimate on the branching trap: the remaining high and
/// low counts are forced, and overshooting either count (or the depth cap)
/// is a dead end because the tree never revisits a state.
#[derive(Debug, Clone)]
pub struct BranchingExact {
    cfg: BranchingTrapConfig,
}

impl BranchingExact {
    pub fn new(cfg: BranchingTrapConfig) -> Self {
        BranchingExact { cfg }
    }
}

impl Heuristic<BranchPath> for BranchingExact {
    fn estimate(&mut self, state: &BranchPath) -> HeuristicValue {
        let highs = state
            .iter()
            .filter(|&&s| (s as u32) < self.cfg.x)
            .count() as u32;
        let lows = state.len() as u32 - highs;
        if highs > self.cfg.goal_high || lows > self.cfg.goal_low {
            return HeuristicValue::Infinite;
        }
        let need_high = self.cfg.goal_high - highs;
        let need_low = self.cfg.goal_low - lows;
        if state.len() as u32 + need_high + need_low > self.cfg.depth_cap {
            return HeuristicValue::Infinite;
        }
        HeuristicValue::Finite {
            cost: need_high as Cost * self.cfg.high_cost + need_low as Cost * self.cfg.low_cost,
            size: (need_high + need_low) as u64,
        }
    }
}

// ---------------------------------------------------------------------------
// Additive cost propagation over the delete relaxation
// ---------------------------------------------------------------------------

/// Fixpoint of additive cost propagation from one state.
#[derive(Debug, Clone)]
pub struct CostTable {
    /// Best achievement cost per fact; `None` is unreachable.
    pub fact_cost: Vec<Option<Cost>>,
    /// The achiever that realizes `fact_cost`, ties broken by lowest index.
    pub best_supporter: Vec<Option<ActionId>>,
    /// Aggregated precondition cost per action (`None` until all
    /// preconditions are reachable).
    pub action_agg: Vec<Option<Cost>>,
}

impl CostTable {
    /// Additive goal estimate: sum of the goal facts' costs.
    pub fn goal_cost(&self, goal: &FactSet) -> Option<Cost> {
        let mut total = 0;
        for f in goal.iter() {
            total += self.fact_cost[f as usize]?;
        }
        Some(total)
    }
}

/// Precomputed achiever index, shared by all propagations over one task.
#[derive(Debug, Clone)]
struct PropagationIndex {
    /// For each fact, the actions having it as a precondition.
    consumers: Vec<Vec<u32>>,
    /// Actions with empty preconditions.
    no_pre: Vec<u32>,
}

impl PropagationIndex {
    fn build(task: &GroundedTask) -> Self {
        let mut consumers = vec![Vec::new(); task.fact_count()];
        let mut no_pre = Vec::new();
        for (i, a) in task.actions.iter().enumerate() {
            if a.pre.is_empty() {
                no_pre.push(i as u32);
            } else {
                for f in a.pre.iter() {
                    consumers[f as usize].push(i as u32);
                }
            }
        }
        PropagationIndex { consumers, no_pre }
    }
}

fn propagate(
    task: &GroundedTask,
    index: &PropagationIndex,
    state: &FactSet,
    unit_costs: bool,
    excluded: Option<ActionId>,
) -> CostTable {
    let nf = task.fact_count();
    let na = task.actions.len();
    let mut fact_cost: Vec<Option<Cost>> = vec![None; nf];
    let mut best_supporter: Vec<Option<ActionId>> = vec![None; nf];
    let mut action_agg: Vec<Option<Cost>> = vec![None; na];
    let mut remaining: Vec<usize> = task.actions.iter().map(|a| a.pre.len()).collect();
    let mut partial_agg: Vec<Cost> = vec![0; na];
    let mut heap: BinaryHeap<std::cmp::Reverse<(Cost, u32)>> = BinaryHeap::new();

    let apply_cost = |a: u32| -> Cost {
        if unit_costs {
            1
        } else {
            task.actions[a as usize].cost
        }
    };

    // relax one fact
    macro_rules! relax {
        ($fact:expr, $cost:expr, $supporter:expr) => {{
            let f = $fact as usize;
            let improves = match fact_cost[f] {
                None => true,
                Some(c) => $cost < c,
            };
            if improves {
                fact_cost[f] = Some($cost);
                best_supporter[f] = $supporter;
                heap.push(std::cmp::Reverse(($cost, $fact)));
            } else if fact_cost[f] == Some($cost) {
                // Equal cost: keep the lowest-index supporter.
                if let (Some(new), Some(cur)) = ($supporter, best_supporter[f]) {
                    if new < cur {
                        best_supporter[f] = Some(new);
                    }
                }
            }
        }};
    }

    for f in state.iter() {
        relax!(f, 0, None::<ActionId>);
    }
    for &a in &index.no_pre {
        if Some(a) == excluded {
            continue;
        }
        action_agg[a as usize] = Some(0);
        let reach = apply_cost(a);
        for g in task.actions[a as usize].add.iter() {
            relax!(g, reach, Some(a));
        }
    }

    let mut settled = vec![false; nf];
    while let Some(std::cmp::Reverse((c, f))) = heap.pop() {
        if settled[f as usize] || fact_cost[f as usize] != Some(c) {
            continue;
        }
        settled[f as usize] = true;
        for &a in &index.consumers[f as usize] {
            if Some(a) == excluded {
                continue;
            }
            let ai = a as usize;
            if remaining[ai] == 0 {
                continue;
            }
            remaining[ai] -= 1;
            partial_agg[ai] += c;
            if remaining[ai] == 0 {
                action_agg[ai] = Some(partial_agg[ai]);
                let reach = partial_agg[ai] + apply_cost(a);
                for g in task.actions[ai].add.iter() {
                    relax!(g, reach, Some(a));
                }
            }
        }
    }

    CostTable {
        fact_cost,
        best_supporter,
        action_agg,
    }
}

/// Additive cost table over the delete relaxation of `task` from `state`.
pub fn hadd_propagate(task: &GroundedTask, state: &FactSet) -> CostTable {
    let index = PropagationIndex::build(task);
    propagate(task, &index, state, false, None)
}

/// An action set achieving the goal under the delete relaxation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelaxedPlan {
    /// Members in extraction order (each action at most once).
    pub actions: Vec<ActionId>,
    /// Sum of the members' task costs.
    pub total_cost: Cost,
    /// Member count.
    pub size: u64,
}

impl RelaxedPlan {
    /// Members sorted so every action's preconditions are supported by
    /// earlier members (ascending aggregated precondition cost).
    pub fn execution_order(&self, table: &CostTable) -> Vec<ActionId> {
        let mut ordered = self.actions.clone();
        ordered.sort_by_key(|&a| (table.action_agg[a as usize].unwrap_or(Cost::MAX), a));
        ordered
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("goal fact {0} is unreachable in the delete relaxation")]
    Unreachable(u32),
}

/// Backchains from the goal facts through best supporters, marking each
/// selected action once. Facts already true in `state` need no supporter.
pub fn extract_relaxed_plan(
    task: &GroundedTask,
    state: &FactSet,
    table: &CostTable,
) -> Result<RelaxedPlan, ExtractError> {
    let mut selected = vec![false; task.actions.len()];
    let mut order = Vec::new();
    let mut visited = FactSet::empty();
    // Descending push order makes the stack pop facts in ascending order.
    let mut stack: Vec<u32> = table_goal_facts_desc(task);
    while let Some(f) = stack.pop() {
        if state.contains(f) || visited.contains(f) {
            continue;
        }
        visited.insert(f);
        if table.fact_cost[f as usize].is_none() {
            return Err(ExtractError::Unreachable(f));
        }
        let a = table.best_supporter[f as usize]
            .expect("reachable non-state fact must have a supporter");
        if !selected[a as usize] {
            selected[a as usize] = true;
            order.push(a);
            let mut pre: Vec<u32> = task.actions[a as usize].pre.iter().collect();
            pre.reverse();
            stack.extend(pre);
        }
    }
    let total_cost = order
        .iter()
        .map(|&a| task.actions[a as usize].cost)
        .sum();
    let size = order.len() as u64;
    Ok(RelaxedPlan {
        actions: order,
        total_cost,
        size,
    })
}

fn table_goal_facts_desc(task: &GroundedTask) -> Vec<u32> {
    let mut goals: Vec<u32> = task.goal.iter().collect();
    goals.reverse();
    goals
}

/// How a relaxed-plan heuristic turns its extraction into a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RpFlavor {
    /// cost = relaxed-plan cost sum (used by rp-cost and rp-size-cheap).
    PlanCost,
    /// cost = additive table sum over goal facts (h-add proper).
    TableSum,
    /// table built with unit costs; size is the shortest-plan length.
    UnitCosts,
}

/// Relaxed-plan heuristic over a grounded task.
///
/// One instance owns a memo table and belongs to a single run; the task is
/// shared immutably.
pub struct RelaxedPlanHeuristic<'t> {
    task: &'t GroundedTask,
    index: PropagationIndex,
    flavor: RpFlavor,
    memo: HashMap<FactSet, HeuristicValue>,
}

impl<'t> RelaxedPlanHeuristic<'t> {
    pub fn new(task: &'t GroundedTask, kind: HeuristicKind) -> Self {
        let flavor = match kind {
            HeuristicKind::HAddCost => RpFlavor::TableSum,
            HeuristicKind::RpSizeShort => RpFlavor::UnitCosts,
            _ => RpFlavor::PlanCost,
        };
        RelaxedPlanHeuristic {
            task,
            index: PropagationIndex::build(task),
            flavor,
            memo: HashMap::new(),
        }
    }

    fn compute(&self, state: &FactSet, excluded: Option<ActionId>) -> HeuristicValue {
        let unit = self.flavor == RpFlavor::UnitCosts;
        let table = propagate(self.task, &self.index, state, unit, excluded);
        if table.goal_cost(&self.task.goal).is_none() {
            return HeuristicValue::Infinite;
        }
        let plan = extract_relaxed_plan(self.task, state, &table)
            .expect("goal reachable per table");
        let cost = match self.flavor {
            RpFlavor::TableSum => table
                .goal_cost(&self.task.goal)
                .expect("checked reachable"),
            _ => plan.total_cost,
        };
        HeuristicValue::Finite {
            cost,
            size: plan.size,
        }
    }
}

impl Heuristic<FactSet> for RelaxedPlanHeuristic<'_> {
    fn estimate(&mut self, state: &FactSet) -> HeuristicValue {
        if let Some(v) = self.memo.get(state) {
            return *v;
        }
        let v = self.compute(state, None);
        self.memo.insert(*state, v);
        v
    }
}

/// Recomputes a heuristic with one operator removed from the action set.
/// The removal is a fresh propagation every call; nothing incremental.
pub trait OperatorExclusion<S> {
    fn estimate_without(&mut self, excluded: ActionId, state: &S) -> HeuristicValue;
}

impl OperatorExclusion<FactSet> for RelaxedPlanHeuristic<'_> {
    fn estimate_without(&mut self, excluded: ActionId, state: &FactSet) -> HeuristicValue {
        self.compute(state, Some(excluded))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::strips::StripsAction;

    fn chain_task() -> GroundedTask {
        // f0 -(a,3)-> f1 -(b,4)-> f2
        GroundedTask {
            name: "chain".into(),
            facts: vec!["f0".into(), "f1".into(), "f2".into()],
            init: FactSet::from_indices(&[0]),
            goal: FactSet::from_indices(&[2]),
            actions: vec![
                StripsAction {
                    name: "a".into(),
                    cost: 3,
                    pre: FactSet::from_indices(&[0]),
                    add: FactSet::from_indices(&[1]),
                    del: FactSet::empty(),
                },
                StripsAction {
                    name: "b".into(),
                    cost: 4,
                    pre: FactSet::from_indices(&[1]),
                    add: FactSet::from_indices(&[2]),
                    del: FactSet::empty(),
                },
            ],
        }
    }

    /// Two achievers of the goal: a1 is a single expensive action, the
    /// a2 route is cheaper but two actions long.
    fn two_achiever_task() -> GroundedTask {
        GroundedTask {
            name: "two-achievers".into(),
            facts: vec!["p".into(), "g".into()],
            init: FactSet::empty(),
            goal: FactSet::from_indices(&[1]),
            actions: vec![
                StripsAction {
                    name: "a1".into(),
                    cost: 10,
                    pre: FactSet::empty(),
                    add: FactSet::from_indices(&[1]),
                    del: FactSet::empty(),
                },
                StripsAction {
                    name: "a2".into(),
                    cost: 2,
                    pre: FactSet::from_indices(&[0]),
                    add: FactSet::from_indices(&[1]),
                    del: FactSet::empty(),
                },
                StripsAction {
                    name: "get-p".into(),
                    cost: 1,
                    pre: FactSet::empty(),
                    add: FactSet::from_indices(&[0]),
                    del: FactSet::empty(),
                },
            ],
        }
    }

    #[test]
    fn hadd_chain_fixpoint() {
        let task = chain_task();
        let table = hadd_propagate(&task, &task.init);
        assert_eq!(table.fact_cost, vec![Some(0), Some(3), Some(7)]);
        assert_eq!(table.best_supporter[2], Some(1));
        assert_eq!(table.best_supporter[1], Some(0));
        assert_eq!(table.goal_cost(&task.goal), Some(7));
    }

    #[test]
    fn hadd_goal_already_satisfied_costs_zero() {
        let task = chain_task();
        let state = FactSet::from_indices(&[0, 2]);
        let table = hadd_propagate(&task, &state);
        assert_eq!(table.goal_cost(&task.goal), Some(0));
    }

    #[test]
    fn hadd_single_action_cost() {
        let mut task = chain_task();
        task.goal = FactSet::from_indices(&[1]);
        task.actions[0].cost = 5;
        let table = hadd_propagate(&task, &task.init);
        assert_eq!(table.goal_cost(&task.goal), Some(5));
    }

    #[test]
    fn extract_chain_plan() {
        let task = chain_task();
        let table = hadd_propagate(&task, &task.init);
        let plan = extract_relaxed_plan(&task, &task.init, &table).unwrap();
        let mut actions = plan.actions.clone();
        actions.sort();
        assert_eq!(actions, vec![0, 1]);
        assert_eq!(plan.total_cost, 7);
        assert_eq!(plan.size, 2);
        assert_eq!(plan.execution_order(&table), vec![0, 1]);
    }

    #[test]
    fn extract_goal_satisfied_is_empty() {
        let task = chain_task();
        let state = FactSet::from_indices(&[0, 2]);
        let table = hadd_propagate(&task, &state);
        let plan = extract_relaxed_plan(&task, &state, &table).unwrap();
        assert!(plan.actions.is_empty());
        assert_eq!(plan.total_cost, 0);
        assert_eq!(plan.size, 0);
    }

    #[test]
    fn cheapest_and_shortest_relaxed_plans_differ() {
        let task = two_achiever_task();
        // True costs: route through p costs 1 + 2 = 3, beating a1's 10.
        let mut cheap = RelaxedPlanHeuristic::new(&task, HeuristicKind::RpSizeCheap);
        let v = cheap.estimate(&task.init);
        assert_eq!(v, HeuristicValue::Finite { cost: 3, size: 2 });
        // Unit costs: the single action a1 wins.
        let mut short = RelaxedPlanHeuristic::new(&task, HeuristicKind::RpSizeShort);
        let v = short.estimate(&task.init);
        assert_eq!(v.size(), Some(1));
    }

    #[test]
    fn unreachable_goal_is_infinite() {
        let mut task = chain_task();
        task.actions.truncate(1); // f2 now has no achiever
        let mut h = RelaxedPlanHeuristic::new(&task, HeuristicKind::RpCost);
        assert!(h.estimate(&task.init).is_infinite());
    }

    #[test]
    fn exclusion_of_sole_achiever_is_infinite() {
        let task = chain_task();
        let mut h = RelaxedPlanHeuristic::new(&task, HeuristicKind::RpSizeCheap);
        assert!(h.estimate_without(1, &task.init).is_infinite());
    }

    #[test]
    fn exclusion_of_redundant_achiever_is_unchanged() {
        let mut task = two_achiever_task();
        // Make the two goal routes equal in cost: a1 cost 3 vs get-p + a2 = 3.
        task.actions[0].cost = 3;
        let mut h = RelaxedPlanHeuristic::new(&task, HeuristicKind::RpCost);
        let base = h.estimate(&task.init);
        let without_a1 = h.estimate_without(0, &task.init);
        assert_eq!(base.cost(), without_a1.cost());
    }

    #[test]
    fn exclusion_of_inapplicable_never_needed_action_is_unchanged() {
        let mut task = chain_task();
        task.facts.push("junk".into());
        task.actions.push(StripsAction {
            name: "noop".into(),
            cost: 9,
            pre: FactSet::from_indices(&[3]),
            add: FactSet::from_indices(&[3]),
            del: FactSet::empty(),
        });
        let mut h = RelaxedPlanHeuristic::new(&task, HeuristicKind::RpCost);
        let base = h.estimate(&task.init);
        assert_eq!(h.estimate_without(2, &task.init), base);
    }
}
