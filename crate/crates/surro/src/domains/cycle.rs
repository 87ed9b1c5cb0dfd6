//! The cycle trap: a k-bit counter under increment/decrement, uniform unit
//! costs except for one expensive edge between residues 0 and 2^k - 1.
//!
//! The single unforced decision is the direction to walk the cycle. With
//! the goal just below 0, the cheap solution is the long incrementing walk
//! and the short solution pays the expensive crossing; that asymmetry is
//! what separates cost-ordered from size-ordered search.

use crate::graph::{ActionId, Cost, OutEdge, SearchProblem};
use thiserror::Error;

pub const ACTION_INC: ActionId = 0;
pub const ACTION_DEC: ActionId = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleTrapConfig {
    /// Counter width in bits; the cycle has 2^k states.
    pub k: u32,
    /// Cost of crossing between residue 0 and residue 2^k - 1.
    pub expensive_cost: Cost,
    pub goal_residue: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycleTrapError {
    #[error("k must be in 2..=32, got {0}")]
    BadWidth(u32),
    #[error("expensive cost must be >= 1")]
    ZeroCost,
    #[error("goal residue {goal} out of range for k={k}")]
    GoalOutOfRange { goal: u64, k: u32 },
}

impl CycleTrapConfig {
    /// Default expensive cost 2^(k-1), goal at -2 (that is, 2^k - 2).
    pub fn new(k: u32) -> Self {
        CycleTrapConfig {
            k,
            expensive_cost: 1u64 << (k - 1),
            goal_residue: (1u64 << k) - 2,
        }
    }

    pub fn with_goal(mut self, goal_residue: u64) -> Self {
        self.goal_residue = goal_residue;
        self
    }

    pub fn with_expensive_cost(mut self, cost: Cost) -> Self {
        self.expensive_cost = cost;
        self
    }

    pub fn validate(&self) -> Result<(), CycleTrapError> {
        if !(2..=32).contains(&self.k) {
            return Err(CycleTrapError::BadWidth(self.k));
        }
        if self.expensive_cost == 0 {
            return Err(CycleTrapError::ZeroCost);
        }
        if self.goal_residue >= self.size() {
            return Err(CycleTrapError::GoalOutOfRange {
                goal: self.goal_residue,
                k: self.k,
            });
        }
        Ok(())
    }

    pub fn size(&self) -> u64 {
        1u64 << self.k
    }

    /// Exact cheapest cost from `residue` to the goal, and the length of
    /// that cheapest walk (ties pick the shorter walk).
    pub fn exact_to_goal(&self, residue: u64) -> (Cost, u64) {
        let n = self.size();
        let g = self.goal_residue;
        let up_steps = (g + n - residue) % n;
        let down_steps = (residue + n - g) % n;
        // Walking up crosses the expensive edge (2^k - 1 -> 0) only when the
        // walk wraps, i.e. starts above the goal; symmetrically for down.
        let up_cost = up_steps
            + if up_steps > 0 && residue > g {
                self.expensive_cost - 1
            } else {
                0
            };
        let down_cost = down_steps
            + if down_steps > 0 && residue < g {
                self.expensive_cost - 1
            } else {
                0
            };
        if up_cost < down_cost || (up_cost == down_cost && up_steps <= down_steps) {
            (up_cost, up_steps)
        } else {
            (down_cost, down_steps)
        }
    }

    /// The two direction-pure solutions from residue 0: clockwise (pure
    /// increments) and counterclockwise (pure decrements), as (cost, size).
    pub fn optima(&self) -> ((Cost, u64), (Cost, u64)) {
        let n = self.size();
        let g = self.goal_residue;
        if g == 0 {
            return ((0, 0), (0, 0));
        }
        let clockwise = (g, g);
        let ccw_steps = n - g;
        let counterclockwise = (self.expensive_cost + (ccw_steps - 1), ccw_steps);
        (clockwise, counterclockwise)
    }
}

/// The cycle trap as an implicit graph; states are residues mod 2^k.
#[derive(Debug, Clone, Copy)]
pub struct CycleTrap {
    cfg: CycleTrapConfig,
}

pub fn cycle_trap(cfg: CycleTrapConfig) -> Result<CycleTrap, CycleTrapError> {
    cfg.validate()?;
    Ok(CycleTrap { cfg })
}

impl CycleTrap {
    pub fn config(&self) -> &CycleTrapConfig {
        &self.cfg
    }

    fn edge_cost(&self, from: u64, to: u64) -> Cost {
        let last = self.cfg.size() - 1;
        if (from == last && to == 0) || (from == 0 && to == last) {
            self.cfg.expensive_cost
        } else {
            1
        }
    }
}

impl SearchProblem for CycleTrap {
    type State = u64;

    fn initial(&self) -> u64 {
        0
    }

    fn is_goal(&self, state: &u64) -> bool {
        *state == self.cfg.goal_residue
    }

    fn expand(&self, state: &u64) -> Vec<OutEdge<u64>> {
        let n = self.cfg.size();
        let inc = (*state + 1) % n;
        let dec = (*state + n - 1) % n;
        vec![
            OutEdge {
                action: ACTION_INC,
                target: inc,
                cost: self.edge_cost(*state, inc),
            },
            OutEdge {
                action: ACTION_DEC,
                target: dec,
                cost: self.edge_cost(*state, dec),
            },
        ]
    }

    fn cost_bounds(&self) -> Option<(Cost, Cost)> {
        Some((1.min(self.cfg.expensive_cost), 1.max(self.cfg.expensive_cost)))
    }

    fn action_name(&self, action: ActionId) -> String {
        match action {
            ACTION_INC => "inc".to_string(),
            ACTION_DEC => "dec".to_string(),
            other => format!("action{other}"),
        }
    }

    fn state_label(&self, state: &u64) -> String {
        state.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_goal14_optima() {
        let cfg = CycleTrapConfig::new(4); // goal -2 = 14, expensive 8
        assert_eq!(cfg.goal_residue, 14);
        assert_eq!(cfg.expensive_cost, 8);
        let (cw, ccw) = cfg.optima();
        assert_eq!(cw, (14, 14));
        assert_eq!(ccw, (9, 2));
    }

    #[test]
    fn k4_goal8_optima() {
        let cfg = CycleTrapConfig::new(4).with_goal(8);
        let (cw, ccw) = cfg.optima();
        assert_eq!(cw, (8, 8));
        assert_eq!(ccw, (15, 8));
    }

    #[test]
    fn goal_zero_is_trivial() {
        let cfg = CycleTrapConfig::new(4).with_goal(0);
        assert_eq!(cfg.optima(), ((0, 0), (0, 0)));
        assert_eq!(cfg.exact_to_goal(0), (0, 0));
    }

    #[test]
    fn expansion_costs() {
        let trap = cycle_trap(CycleTrapConfig::new(4)).unwrap();
        let edges = trap.expand(&0);
        assert_eq!(edges.len(), 2);
        assert_eq!(edges[0].target, 1);
        assert_eq!(edges[0].cost, 1);
        assert_eq!(edges[1].target, 15);
        assert_eq!(edges[1].cost, 8, "crossing 0 -> 15 is expensive");
        let edges = trap.expand(&15);
        assert_eq!(edges[0].target, 0);
        assert_eq!(edges[0].cost, 8, "crossing 15 -> 0 is expensive");
        assert_eq!(edges[1].cost, 1);
    }

    #[test]
    fn exact_heuristic_matches_hand_values() {
        let cfg = CycleTrapConfig::new(4); // goal 14
        assert_eq!(cfg.exact_to_goal(0), (9, 2), "dec twice beats 14 incs");
        assert_eq!(cfg.exact_to_goal(13), (1, 1));
        assert_eq!(cfg.exact_to_goal(14), (0, 0));
        // From residue 15 the goal is one decrement away.
        assert_eq!(cfg.exact_to_goal(15), (1, 1));
    }

    #[test]
    fn validation() {
        assert!(cycle_trap(CycleTrapConfig::new(1)).is_err());
        assert!(cycle_trap(CycleTrapConfig::new(4).with_goal(16)).is_err());
        assert!(cycle_trap(CycleTrapConfig::new(4).with_expensive_cost(0)).is_err());
    }
}
