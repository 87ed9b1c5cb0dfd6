//! Exhaustive uniform-cost reachability oracle.
//!
//! Enumerates every reachable state with full duplicate handling and
//! records, per state, the optimal cost and the minimum path length among
//! optimal-cost paths. Search runs are checked against this independently
//! of the engine's own code path.

use crate::graph::{Cost, SearchProblem};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleEntry {
    /// Optimal cost to reach the state.
    pub cost: Cost,
    /// Minimum length among optimal-cost paths to the state.
    pub size: u64,
}

#[derive(Debug, Clone)]
pub struct ReachabilityOracle<S> {
    pub per_state: HashMap<S, OracleEntry>,
    /// Cheapest goal over the reachable space (cost, then size).
    pub optimal_goal: Option<OracleEntry>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("state cap {0} exceeded during oracle enumeration")]
    CapExceeded(u64),
}

/// Dijkstra over the implicit graph with lexicographic (cost, size)
/// relaxation. Fails once more than `state_cap` states have been settled.
pub fn dijkstra_oracle<P: SearchProblem>(
    problem: &P,
    state_cap: u64,
) -> Result<ReachabilityOracle<P::State>, OracleError> {
    let mut best: HashMap<P::State, OracleEntry> = HashMap::new();
    let mut settled: HashMap<P::State, bool> = HashMap::new();
    let mut heap: BinaryHeap<Reverse<(Cost, u64, P::State)>> = BinaryHeap::new();
    let init = problem.initial();
    best.insert(init.clone(), OracleEntry { cost: 0, size: 0 });
    heap.push(Reverse((0, 0, init)));
    let mut settled_count: u64 = 0;
    let mut optimal_goal: Option<OracleEntry> = None;

    while let Some(Reverse((cost, size, state))) = heap.pop() {
        if settled.get(&state).copied().unwrap_or(false) {
            continue;
        }
        settled.insert(state.clone(), true);
        settled_count += 1;
        if settled_count > state_cap {
            return Err(OracleError::CapExceeded(state_cap));
        }
        if problem.is_goal(&state) {
            let entry = OracleEntry { cost, size };
            let better = match optimal_goal {
                None => true,
                Some(cur) => (cost, size) < (cur.cost, cur.size),
            };
            if better {
                optimal_goal = Some(entry);
            }
        }
        for edge in problem.expand(&state) {
            let cand = OracleEntry {
                cost: cost + edge.cost,
                size: size + 1,
            };
            let improves = match best.get(&edge.target) {
                None => true,
                Some(cur) => (cand.cost, cand.size) < (cur.cost, cur.size),
            };
            if improves {
                best.insert(edge.target.clone(), cand);
                heap.push(Reverse((cand.cost, cand.size, edge.target)));
            }
        }
    }

    Ok(ReachabilityOracle {
        per_state: best,
        optimal_goal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::cycle::{cycle_trap, CycleTrapConfig};

    #[test]
    fn cycle_k4_oracle_costs() {
        let trap = cycle_trap(CycleTrapConfig::new(4)).unwrap();
        let oracle = dijkstra_oracle(&trap, 100).unwrap();
        assert_eq!(oracle.per_state.len(), 16);
        assert_eq!(oracle.per_state[&14].cost, 9, "two decrements: 8 + 1");
        assert_eq!(oracle.per_state[&14].size, 2);
        assert_eq!(oracle.per_state[&8].cost, 8, "pure increments");
        assert_eq!(oracle.optimal_goal.unwrap().cost, 9);
    }

    #[test]
    fn cycle_k10_goal_minus_two() {
        let trap = cycle_trap(CycleTrapConfig::new(10)).unwrap();
        let oracle = dijkstra_oracle(&trap, 2000).unwrap();
        assert_eq!(oracle.optimal_goal.unwrap().cost, 513, "2^(k-1) + 1");
    }

    #[test]
    fn cap_exceeded() {
        let trap = cycle_trap(CycleTrapConfig::new(10)).unwrap();
        assert_eq!(
            dijkstra_oracle(&trap, 100).unwrap_err(),
            OracleError::CapExceeded(100)
        );
    }

    #[test]
    fn closed_form_optima_match_oracle_for_all_goals() {
        for k in 2..=8u32 {
            let base = CycleTrapConfig::new(k);
            let oracle =
                dijkstra_oracle(&cycle_trap(base).unwrap(), 1u64 << (k + 1)).unwrap();
            for goal in 0..base.size() {
                let cfg = base.with_goal(goal);
                let (cw, ccw) = cfg.optima();
                let best = if cw.0 < ccw.0 || (cw.0 == ccw.0 && cw.1 <= ccw.1) {
                    cw
                } else {
                    ccw
                };
                let entry = oracle.per_state[&goal];
                assert_eq!((entry.cost, entry.size), best, "k={k} goal={goal}");
            }
        }
    }
}
