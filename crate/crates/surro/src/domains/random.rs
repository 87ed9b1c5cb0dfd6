//! Seeded random grounded tasks, solvable by construction.
//!
//! The generator first performs a random applicable-action walk from the
//! initial state and takes the goal from the walk's final state, so a plan
//! always exists. Distractor actions are mixed in afterwards and the whole
//! action list is shuffled under the same seed.

use super::strips::{FactSet, GroundedTask, StripsAction};
use crate::graph::Cost;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct RandomTaskParams {
    /// Number of facts; kept small so the reachable space stays enumerable
    /// (at most 2^facts states).
    pub facts: u32,
    /// Length of the seeding walk.
    pub walk_len: u32,
    /// Distractor actions added on top of the walk actions.
    pub extra_actions: u32,
    pub max_cost: Cost,
    pub seed: u64,
}

impl Default for RandomTaskParams {
    fn default() -> Self {
        RandomTaskParams {
            facts: 10,
            walk_len: 6,
            extra_actions: 8,
            max_cost: 9,
            seed: 0,
        }
    }
}

fn random_subset(rng: &mut ChaCha8Rng, pool: &[u32], max_len: usize) -> Vec<u32> {
    if pool.is_empty() || max_len == 0 {
        return Vec::new();
    }
    let len = rng.gen_range(0..=max_len.min(pool.len()));
    let mut picks = pool.to_vec();
    picks.shuffle(rng);
    picks.truncate(len);
    picks.sort_unstable();
    picks.dedup();
    picks
}

pub fn random_task(params: &RandomTaskParams) -> GroundedTask {
    assert!(params.facts >= 2 && params.facts <= 16);
    assert!(params.max_cost >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let nf = params.facts;
    let all_facts: Vec<u32> = (0..nf).collect();

    let mut init = FactSet::empty();
    init.insert(0);
    for f in 1..nf {
        if rng.gen_bool(0.4) {
            init.insert(f);
        }
    }

    let mut actions = Vec::new();
    let mut state = init;
    for step in 0..params.walk_len {
        let held: Vec<u32> = state.iter().collect();
        let absent: Vec<u32> = all_facts
            .iter()
            .copied()
            .filter(|f| !state.contains(*f))
            .collect();
        let pre = random_subset(&mut rng, &held, 2);
        let mut add = random_subset(&mut rng, if absent.is_empty() { &held } else { &absent }, 2);
        if add.is_empty() {
            add = vec![*all_facts.last().unwrap()];
        }
        let del_pool: Vec<u32> = held
            .iter()
            .copied()
            .filter(|f| !add.contains(f))
            .collect();
        let del = random_subset(&mut rng, &del_pool, 1);
        let action = StripsAction {
            name: format!("walk{step}"),
            cost: rng.gen_range(1..=params.max_cost),
            pre: FactSet::from_indices(&pre),
            add: FactSet::from_indices(&add),
            del: FactSet::from_indices(&del),
        };
        let mut next = state;
        next.subtract(&action.del);
        next.union_with(&action.add);
        state = next;
        actions.push(action);
    }

    // The goal holds at the walk's end, so the walk itself is a witness plan.
    let held: Vec<u32> = state.iter().collect();
    let mut goal_facts = random_subset(&mut rng, &held, 3);
    if goal_facts.is_empty() {
        goal_facts = vec![held[rng.gen_range(0..held.len())]];
    }
    let goal = FactSet::from_indices(&goal_facts);

    for i in 0..params.extra_actions {
        let pre = random_subset(&mut rng, &all_facts, 2);
        let mut add = random_subset(&mut rng, &all_facts, 2);
        if add.is_empty() {
            add = vec![rng.gen_range(0..nf)];
        }
        let del_pool: Vec<u32> = all_facts
            .iter()
            .copied()
            .filter(|f| !add.contains(f))
            .collect();
        let del = random_subset(&mut rng, &del_pool, 1);
        actions.push(StripsAction {
            name: format!("noise{i}"),
            cost: rng.gen_range(1..=params.max_cost),
            pre: FactSet::from_indices(&pre),
            add: FactSet::from_indices(&add),
            del: FactSet::from_indices(&del),
        });
    }
    actions.shuffle(&mut rng);

    let task = GroundedTask {
        name: format!("random-{}", params.seed),
        facts: (0..nf).map(|i| format!("f{i}")).collect(),
        init,
        goal,
        actions,
    };
    task.validate().expect("generator produces valid tasks");
    task
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::strips::ground_problem;
    use crate::graph::SearchProblem;

    #[test]
    fn generated_tasks_are_deterministic() {
        let params = RandomTaskParams {
            seed: 17,
            ..RandomTaskParams::default()
        };
        assert_eq!(random_task(&params), random_task(&params));
    }

    #[test]
    fn generated_tasks_are_solvable() {
        // Breadth-first enumeration must find a goal state for every seed.
        for seed in 0..20 {
            let task = random_task(&RandomTaskParams {
                seed,
                ..RandomTaskParams::default()
            });
            let problem = ground_problem(task).unwrap();
            let mut seen = std::collections::HashSet::new();
            let mut frontier = vec![problem.initial()];
            seen.insert(problem.initial());
            let mut solvable = problem.is_goal(&problem.initial());
            while let Some(next) = frontier.pop() {
                if solvable {
                    break;
                }
                for e in problem.expand(&next) {
                    if problem.is_goal(&e.target) {
                        solvable = true;
                        break;
                    }
                    if seen.insert(e.target) {
                        frontier.push(e.target);
                    }
                }
            }
            assert!(solvable, "seed {seed} produced an unsolvable task");
        }
    }
}
