//! The branching trap: a uniform branching tree with x high-cost and y
//! low-cost children per node. States are the label sequences themselves,
//! so no state is ever revisited. Goals are the paths containing exactly
//! the configured number of high and low actions; the depth cap makes the
//! space finite for proof runs.

use crate::graph::{ActionId, Cost, OutEdge, SearchProblem};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchingTrapConfig {
    /// Number of high-cost children per node.
    pub x: u32,
    /// Number of low-cost children per node.
    pub y: u32,
    pub high_cost: Cost,
    pub low_cost: Cost,
    /// Exact count of high-cost actions a goal path contains.
    pub goal_high: u32,
    /// Exact count of low-cost actions a goal path contains.
    pub goal_low: u32,
    pub depth_cap: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BranchingTrapError {
    #[error("need at least one child of each kind")]
    NoBranching,
    #[error("high cost must exceed low cost and low cost must be >= 1")]
    BadCosts,
    #[error("depth cap {cap} cannot reach goals at depth {depth}")]
    CapTooSmall { cap: u32, depth: u32 },
}

impl BranchingTrapConfig {
    pub fn validate(&self) -> Result<(), BranchingTrapError> {
        if self.x < 1 || self.y < 1 {
            return Err(BranchingTrapError::NoBranching);
        }
        if self.low_cost < 1 || self.high_cost <= self.low_cost {
            return Err(BranchingTrapError::BadCosts);
        }
        let depth = self.goal_high + self.goal_low;
        if self.depth_cap < depth {
            return Err(BranchingTrapError::CapTooSmall {
                cap: self.depth_cap,
                depth,
            });
        }
        Ok(())
    }

    pub fn goal_depth(&self) -> u32 {
        self.goal_high + self.goal_low
    }

    pub fn goal_cost(&self) -> Cost {
        self.goal_high as Cost * self.high_cost + self.goal_low as Cost * self.low_cost
    }

    pub fn branching(&self) -> u32 {
        self.x + self.y
    }
}

/// A path in the tree: one symbol per edge, high symbols are `0..x` and low
/// symbols are `x..x+y`. The symbol doubles as the action id.
pub type BranchPath = Vec<u8>;

#[derive(Debug, Clone, Copy)]
pub struct BranchingTrap {
    cfg: BranchingTrapConfig,
}

pub fn branching_trap(cfg: BranchingTrapConfig) -> Result<BranchingTrap, BranchingTrapError> {
    cfg.validate()?;
    Ok(BranchingTrap { cfg })
}

impl BranchingTrap {
    pub fn config(&self) -> &BranchingTrapConfig {
        &self.cfg
    }

    pub fn is_high(&self, symbol: u8) -> bool {
        (symbol as u32) < self.cfg.x
    }

    pub fn counts(&self, path: &BranchPath) -> (u32, u32) {
        let highs = path.iter().filter(|&&s| self.is_high(s)).count() as u32;
        (highs, path.len() as u32 - highs)
    }
}

impl SearchProblem for BranchingTrap {
    type State = BranchPath;

    fn initial(&self) -> BranchPath {
        Vec::new()
    }

    fn is_goal(&self, state: &BranchPath) -> bool {
        let (highs, lows) = self.counts(state);
        highs == self.cfg.goal_high && lows == self.cfg.goal_low
    }

    fn expand(&self, state: &BranchPath) -> Vec<OutEdge<BranchPath>> {
        if state.len() as u32 >= self.cfg.depth_cap {
            return Vec::new();
        }
        (0..self.cfg.branching())
            .map(|s| {
                let mut child = state.clone();
                child.push(s as u8);
                OutEdge {
                    action: s as ActionId,
                    target: child,
                    cost: if (s) < self.cfg.x {
                        self.cfg.high_cost
                    } else {
                        self.cfg.low_cost
                    },
                }
            })
            .collect()
    }

    fn cost_bounds(&self) -> Option<(Cost, Cost)> {
        Some((self.cfg.low_cost, self.cfg.high_cost))
    }

    fn action_name(&self, action: ActionId) -> String {
        if action < self.cfg.x {
            format!("h{}", action + 1)
        } else {
            format!("l{}", action - self.cfg.x + 1)
        }
    }

    fn state_label(&self, state: &BranchPath) -> String {
        if state.is_empty() {
            return "root".to_string();
        }
        state
            .iter()
            .map(|&s| self.action_name(s as ActionId))
            .collect::<Vec<_>>()
            .join(".")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(goal_high: u32, goal_low: u32) -> BranchingTrapConfig {
        BranchingTrapConfig {
            x: 2,
            y: 2,
            high_cost: 4,
            low_cost: 1,
            goal_high,
            goal_low,
            depth_cap: 10,
        }
    }

    /// Exhaustive enumeration of all paths of a given depth.
    fn enumerate_paths(trap: &BranchingTrap, depth: u32) -> Vec<BranchPath> {
        let mut level = vec![trap.initial()];
        for _ in 0..depth {
            level = level
                .iter()
                .flat_map(|p| trap.expand(p).into_iter().map(|e| e.target))
                .collect();
        }
        level
    }

    #[test]
    fn goal_count_matches_binomial() {
        // x = y = 2, one high and four lows: C(5,1) * 2^5 = 160 goals at
        // depth 5.
        let trap = branching_trap(cfg(1, 4)).unwrap();
        let paths = enumerate_paths(&trap, 5);
        assert_eq!(paths.len(), 4usize.pow(5));
        let goals = paths.iter().filter(|p| trap.is_goal(p)).count();
        assert_eq!(goals, 160);
        assert_eq!(trap.config().goal_cost(), 4 + 4);
    }

    #[test]
    fn trivial_goal_at_root() {
        let trap = branching_trap(cfg(0, 0)).unwrap();
        assert!(trap.is_goal(&trap.initial()));
        assert_eq!(trap.config().goal_cost(), 0);
    }

    #[test]
    fn depth_cap_stops_expansion() {
        let mut c = cfg(1, 1);
        c.depth_cap = 2;
        let trap = branching_trap(c).unwrap();
        let deep = vec![0u8, 2];
        assert!(trap.expand(&deep).is_empty());
    }

    #[test]
    fn paths_are_unique_states() {
        let trap = branching_trap(cfg(1, 2)).unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut frontier = vec![trap.initial()];
        for _ in 0..3 {
            let mut next = Vec::new();
            for p in &frontier {
                for e in trap.expand(p) {
                    assert!(seen.insert(e.target.clone()), "revisited a state");
                    next.push(e.target);
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn equal_mix_depth_approaches_twice_the_cost() {
        // Goals mixing highs and lows in equal number: with cost normalized
        // by the high cost, a goal of normalized cost C sits at depth
        // 2 C / (1 + epsilon), which approaches 2 C as epsilon -> 0.
        use num_rational::Ratio;
        for (high, low) in [(2u64, 1u64), (64, 1), (4096, 1)] {
            let c = BranchingTrapConfig {
                x: 2,
                y: 2,
                high_cost: high,
                low_cost: low,
                goal_high: 15,
                goal_low: 15,
                depth_cap: 30,
            };
            let epsilon = Ratio::new(low as i64, high as i64);
            let normalized_cost = Ratio::new(c.goal_cost() as i64, high as i64);
            let depth = Ratio::from_integer(c.goal_depth() as i64);
            // d = 2 C / (1 + eps) exactly, for the equal-proportion mix.
            assert_eq!(
                depth,
                Ratio::from_integer(2) * normalized_cost / (Ratio::from_integer(1) + epsilon)
            );
            // and C -> 15 (half the depth) as epsilon -> 0.
            if high == 4096 {
                assert!(normalized_cost - Ratio::from_integer(15) < Ratio::new(1, 100));
            }
        }
    }

    #[test]
    fn validation() {
        let mut c = cfg(1, 1);
        c.low_cost = 4; // equal to high
        assert_eq!(c.validate(), Err(BranchingTrapError::BadCosts));
        let mut c = cfg(3, 3);
        c.depth_cap = 5;
        assert!(matches!(
            c.validate(),
            Err(BranchingTrapError::CapTooSmall { .. })
        ));
    }
}
