//! STRIPS-with-costs tasks and their projection onto the implicit-graph
//! contract.
//!
//! States are plain fact sets stored as fixed-width bitsets (at most
//! [`MAX_FACTS`] facts per task), so state keys are `Copy` and equality is
//! exact set equality.

use crate::graph::{ActionId, Cost, OutEdge, SearchProblem};
use thiserror::Error;

/// Hard cap on facts per task; keeps fact sets inline and copyable.
pub const MAX_FACTS: usize = 256;
const BLOCKS: usize = MAX_FACTS / 64;

/// A set of fact indices, the state of a grounded task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FactSet {
    blocks: [u64; BLOCKS],
}

impl FactSet {
    pub fn empty() -> Self {
        FactSet::default()
    }

    pub fn from_indices(indices: &[u32]) -> Self {
        let mut s = FactSet::empty();
        for &i in indices {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, fact: u32) {
        debug_assert!((fact as usize) < MAX_FACTS);
        self.blocks[(fact / 64) as usize] |= 1u64 << (fact % 64);
    }

    pub fn remove(&mut self, fact: u32) {
        self.blocks[(fact / 64) as usize] &= !(1u64 << (fact % 64));
    }

    pub fn contains(&self, fact: u32) -> bool {
        self.blocks[(fact / 64) as usize] & (1u64 << (fact % 64)) != 0
    }

    pub fn is_subset_of(&self, other: &FactSet) -> bool {
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &FactSet) {
        for (a, b) in self.blocks.iter_mut().zip(other.blocks.iter()) {
            *a |= b;
        }
    }

    pub fn subtract(&mut self, other: &FactSet) {
        for (a, b) in self.blocks.iter_mut().zip(other.blocks.iter()) {
            *a &= !b;
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Fact indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut bits = block;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros();
                    bits &= bits - 1;
                    Some(bi as u32 * 64 + tz)
                }
            })
        })
    }
}

/// One grounded action: preconditions, add and delete effects, and a
/// strictly positive cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripsAction {
    pub name: String,
    pub cost: Cost,
    pub pre: FactSet,
    pub add: FactSet,
    pub del: FactSet,
}

/// A STRIPS task with integer action costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundedTask {
    pub name: String,
    pub facts: Vec<String>,
    pub init: FactSet,
    pub goal: FactSet,
    pub actions: Vec<StripsAction>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TaskError {
    #[error("task has {0} facts; at most {MAX_FACTS} are supported")]
    TooManyFacts(usize),
    #[error("fact index {index} out of range in {place}")]
    FactOutOfRange { index: u32, place: String },
    #[error("action `{0}` has cost 0; costs must be >= 1")]
    ZeroCost(String),
    #[error("action `{0}` adds and deletes the same fact")]
    AddDelOverlap(String),
    #[error("duplicate fact name `{0}`")]
    DuplicateFactName(String),
    #[error("duplicate action name `{0}`")]
    DuplicateActionName(String),
    #[error("task has no actions and the goal does not hold initially")]
    Vacuous,
}

impl GroundedTask {
    pub fn fact_count(&self) -> usize {
        self.facts.len()
    }

    pub fn validate(&self) -> Result<(), TaskError> {
        if self.facts.len() > MAX_FACTS {
            return Err(TaskError::TooManyFacts(self.facts.len()));
        }
        let n = self.facts.len() as u32;
        let check = |set: &FactSet, place: &str| -> Result<(), TaskError> {
            for i in set.iter() {
                if i >= n {
                    return Err(TaskError::FactOutOfRange {
                        index: i,
                        place: place.to_string(),
                    });
                }
            }
            Ok(())
        };
        check(&self.init, "init")?;
        check(&self.goal, "goal")?;
        let mut seen_facts = std::collections::HashSet::new();
        for f in &self.facts {
            if !seen_facts.insert(f.as_str()) {
                return Err(TaskError::DuplicateFactName(f.clone()));
            }
        }
        let mut seen_actions = std::collections::HashSet::new();
        for a in &self.actions {
            if !seen_actions.insert(a.name.as_str()) {
                return Err(TaskError::DuplicateActionName(a.name.clone()));
            }
            if a.cost == 0 {
                return Err(TaskError::ZeroCost(a.name.clone()));
            }
            let mut overlap = a.add;
            overlap.subtract(&a.del);
            if overlap != a.add {
                return Err(TaskError::AddDelOverlap(a.name.clone()));
            }
            for (set, place) in [(&a.pre, "pre"), (&a.add, "add"), (&a.del, "del")] {
                check(set, &format!("action `{}` {}", a.name, place))?;
            }
        }
        Ok(())
    }

    /// Successor state of `state` under action `a`; the precondition must
    /// hold.
    pub fn apply(&self, state: &FactSet, action: ActionId) -> FactSet {
        let a = &self.actions[action as usize];
        debug_assert!(a.pre.is_subset_of(state));
        let mut next = *state;
        next.subtract(&a.del);
        next.union_with(&a.add);
        next
    }

    pub fn goal_holds(&self, state: &FactSet) -> bool {
        self.goal.is_subset_of(state)
    }

    /// Runs an action sequence from `init`, checking preconditions at every
    /// step and the goal at the end.
    pub fn validate_plan(&self, actions: &[ActionId]) -> Result<Cost, PlanError> {
        let mut state = self.init;
        let mut total = 0;
        for (step, &id) in actions.iter().enumerate() {
            let a = self
                .actions
                .get(id as usize)
                .ok_or(PlanError::UnknownAction { step, id })?;
            if !a.pre.is_subset_of(&state) {
                return Err(PlanError::PreconditionFailed {
                    step,
                    action: a.name.clone(),
                });
            }
            state = self.apply(&state, id);
            total += a.cost;
        }
        if self.goal_holds(&state) {
            Ok(total)
        } else {
            Err(PlanError::GoalNotReached)
        }
    }

    /// Saturating delete-free execution of an action subset from `state`:
    /// repeatedly applies any applicable member (adds only) until nothing new
    /// appears, then reports whether the goal holds.
    pub fn delete_free_reaches_goal(&self, state: &FactSet, members: &[ActionId]) -> bool {
        let mut facts = *state;
        let mut used = vec![false; members.len()];
        loop {
            let mut progressed = false;
            for (i, &id) in members.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let a = &self.actions[id as usize];
                if a.pre.is_subset_of(&facts) {
                    facts.union_with(&a.add);
                    used[i] = true;
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
        used.iter().all(|&u| u) && self.goal.is_subset_of(&facts)
    }

    pub fn min_max_cost(&self) -> Option<(Cost, Cost)> {
        let min = self.actions.iter().map(|a| a.cost).min()?;
        let max = self.actions.iter().map(|a| a.cost).max()?;
        Some((min, max))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    #[error("step {step}: unknown action id {id}")]
    UnknownAction { step: usize, id: ActionId },
    #[error("step {step}: precondition of `{action}` does not hold")]
    PreconditionFailed { step: usize, action: String },
    #[error("plan executed but the goal does not hold")]
    GoalNotReached,
}

/// A grounded task viewed as an implicit graph over fact sets.
#[derive(Debug, Clone)]
pub struct GroundedProblem {
    task: GroundedTask,
}

/// Wraps a validated task for search.
pub fn ground_problem(task: GroundedTask) -> Result<GroundedProblem, TaskError> {
    task.validate()?;
    Ok(GroundedProblem { task })
}

impl GroundedProblem {
    pub fn task(&self) -> &GroundedTask {
        &self.task
    }
}

impl SearchProblem for GroundedProblem {
    type State = FactSet;

    fn initial(&self) -> FactSet {
        self.task.init
    }

    fn is_goal(&self, state: &FactSet) -> bool {
        self.task.goal_holds(state)
    }

    fn expand(&self, state: &FactSet) -> Vec<OutEdge<FactSet>> {
        self.task
            .actions
            .iter()
            .enumerate()
            .filter(|(_, a)| a.pre.is_subset_of(state))
            .map(|(i, _)| OutEdge {
                action: i as ActionId,
                target: self.task.apply(state, i as ActionId),
                cost: self.task.actions[i].cost,
            })
            .collect()
    }

    fn cost_bounds(&self) -> Option<(Cost, Cost)> {
        self.task.min_max_cost()
    }

    fn action_name(&self, action: ActionId) -> String {
        self.task.actions[action as usize].name.clone()
    }

    fn state_label(&self, state: &FactSet) -> String {
        let names: Vec<&str> = state
            .iter()
            .map(|i| self.task.facts[i as usize].as_str())
            .collect();
        names.join("|")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_task() -> GroundedTask {
        GroundedTask {
            name: "tiny".into(),
            facts: vec!["f0".into(), "f1".into()],
            init: FactSet::from_indices(&[0]),
            goal: FactSet::from_indices(&[1]),
            actions: vec![StripsAction {
                name: "go".into(),
                cost: 2,
                pre: FactSet::from_indices(&[0]),
                add: FactSet::from_indices(&[1]),
                del: FactSet::empty(),
            }],
        }
    }

    #[test]
    fn factset_ops() {
        let mut s = FactSet::from_indices(&[3, 65, 130]);
        assert!(s.contains(65));
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 65, 130]);
        s.remove(65);
        assert!(!s.contains(65));
        assert!(FactSet::from_indices(&[3]).is_subset_of(&s));
    }

    #[test]
    fn empty_precondition_applies_everywhere() {
        let mut task = tiny_task();
        task.actions.push(StripsAction {
            name: "free".into(),
            cost: 1,
            pre: FactSet::empty(),
            add: FactSet::from_indices(&[0]),
            del: FactSet::empty(),
        });
        let problem = ground_problem(task).unwrap();
        let edges = problem.expand(&FactSet::empty());
        assert_eq!(edges.len(), 1);
        assert_eq!(problem.action_name(edges[0].action), "free");
    }

    #[test]
    fn unsatisfied_precondition_is_not_expanded() {
        let problem = ground_problem(tiny_task()).unwrap();
        let edges = problem.expand(&FactSet::empty());
        assert!(edges.is_empty());
    }

    #[test]
    fn validation_rejects_zero_cost_and_overlap() {
        let mut task = tiny_task();
        task.actions[0].cost = 0;
        assert_eq!(task.validate(), Err(TaskError::ZeroCost("go".into())));

        let mut task = tiny_task();
        task.actions[0].del = task.actions[0].add;
        assert_eq!(task.validate(), Err(TaskError::AddDelOverlap("go".into())));
    }

    #[test]
    fn plan_validation() {
        let task = tiny_task();
        assert_eq!(task.validate_plan(&[0]), Ok(2));
        assert_eq!(task.validate_plan(&[]), Err(PlanError::GoalNotReached));
    }
}
