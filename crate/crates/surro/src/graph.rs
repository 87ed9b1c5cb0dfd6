//! Implicit-graph contract and search-node path records.
//!
//! A domain never materializes its state graph. It exposes an initial state,
//! a goal predicate and a child generator, and the search walks the graph
//! through linked path records that carry both accumulated cost (`g_cost`)
//! and accumulated length (`g_size`).

use num_rational::Ratio;
use std::fmt::Debug;
use std::hash::Hash;
use thiserror::Error;

/// Index of an action in the owning domain's action table.
pub type ActionId = u32;

/// Edge costs are strictly positive integers in domain-native units.
pub type Cost = u64;

/// One outgoing edge of the implicit graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutEdge<S> {
    pub action: ActionId,
    pub target: S,
    pub cost: Cost,
}

/// The implicit-graph contract every domain implements.
///
/// `expand` must be deterministic: the same state yields the identical
/// ordered edge list on every call. Costs are validated at domain
/// construction, so edges seen here always satisfy `cost >= 1`.
pub trait SearchProblem {
    type State: Clone + Eq + Hash + Ord + Debug;

    fn initial(&self) -> Self::State;
    fn is_goal(&self, state: &Self::State) -> bool;
    fn expand(&self, state: &Self::State) -> Vec<OutEdge<Self::State>>;

    /// `(min_edge_cost, max_edge_cost)` when the domain knows its cost range.
    fn cost_bounds(&self) -> Option<(Cost, Cost)>;

    fn action_name(&self, action: ActionId) -> String;
    fn state_label(&self, state: &Self::State) -> String;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("domain does not report its edge-cost range")]
    UnknownCostBounds,
    #[error("max_cost must be positive")]
    ZeroMaxCost,
}

/// Identifier of a node inside one run's [`NodeArena`].
///
/// Arena ids are handed out in creation order, so the id doubles as the
/// monotone generation counter used for final tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn seq(self) -> u64 {
        self.0 as u64
    }
}

/// A path record: the state reached, the edge that reached it, a link to the
/// parent record, and the two accumulated path measures.
#[derive(Debug, Clone)]
pub struct SearchNode<S> {
    pub state: S,
    pub incoming_action: Option<ActionId>,
    pub parent: Option<NodeId>,
    pub g_cost: Cost,
    pub g_size: u64,
    /// Edge cost paid by the incoming action (0 for the root); kept so the
    /// engine can detect flat-cost steps without touching the parent.
    pub step_cost: Cost,
}

/// Append-only store of path records for a single run.
#[derive(Debug, Default)]
pub struct NodeArena<S> {
    nodes: Vec<SearchNode<S>>,
}

impl<S: Clone> NodeArena<S> {
    pub fn new() -> Self {
        NodeArena { nodes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, id: NodeId) -> &SearchNode<S> {
        &self.nodes[id.0 as usize]
    }

    /// Creates the trivial path: no parent, no incoming action, both
    /// accumulators zero.
    pub fn root(&mut self, state: S) -> NodeId {
        self.push(SearchNode {
            state,
            incoming_action: None,
            parent: None,
            g_cost: 0,
            g_size: 0,
            step_cost: 0,
        })
    }

    /// Extends `parent` by `edge`: `g_cost` grows by the edge cost and
    /// `g_size` by one.
    pub fn extend(&mut self, parent: NodeId, edge: &OutEdge<S>) -> NodeId {
        let (g_cost, g_size) = {
            let p = self.get(parent);
            (p.g_cost + edge.cost, p.g_size + 1)
        };
        self.push(SearchNode {
            state: edge.target.clone(),
            incoming_action: Some(edge.action),
            parent: Some(parent),
            g_cost,
            g_size,
            step_cost: edge.cost,
        })
    }

    fn push(&mut self, node: SearchNode<S>) -> NodeId {
        let id = NodeId(u32::try_from(self.nodes.len()).expect("node arena overflow"));
        self.nodes.push(node);
        id
    }

    /// Walks parent links back to the root and returns the materialized plan.
    pub fn reconstruct_plan(&self, id: NodeId) -> Plan {
        let mut actions = Vec::new();
        let mut cursor = id;
        loop {
            let node = self.get(cursor);
            match (node.incoming_action, node.parent) {
                (Some(a), Some(p)) => {
                    actions.push(a);
                    cursor = p;
                }
                _ => break,
            }
        }
        actions.reverse();
        let tip = self.get(id);
        Plan {
            actions,
            total_cost: tip.g_cost,
            length: tip.g_size,
        }
    }
}

/// An action sequence from the initial state to a goal state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub actions: Vec<ActionId>,
    pub total_cost: Cost,
    pub length: u64,
}

impl Plan {
    pub fn empty() -> Self {
        Plan {
            actions: Vec::new(),
            total_cost: 0,
            length: 0,
        }
    }
}

/// Minimum edge cost over maximum edge cost, as an exact rational in (0, 1].
pub fn epsilon_of<P: SearchProblem>(problem: &P) -> Result<Ratio<i64>, GraphError> {
    let (min, max) = problem.cost_bounds().ok_or(GraphError::UnknownCostBounds)?;
    if max == 0 {
        return Err(GraphError::ZeroMaxCost);
    }
    Ok(Ratio::new(min as i64, max as i64))
}

/// Brings an integer cost into (0, 1] by dividing by the maximum cost.
pub fn normalize_cost(cost: Cost, max_cost: Cost) -> Result<Ratio<i64>, GraphError> {
    if max_cost == 0 {
        return Err(GraphError::ZeroMaxCost);
    }
    Ok(Ratio::new(cost as i64, max_cost as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(action: ActionId, target: u32, cost: Cost) -> OutEdge<u32> {
        OutEdge { action, target, cost }
    }

    #[test]
    fn extend_accumulates_cost_and_size() {
        let mut arena = NodeArena::new();
        let root = arena.root(0u32);
        assert_eq!(arena.get(root).g_cost, 0);
        assert_eq!(arena.get(root).g_size, 0);

        let n1 = arena.extend(root, &edge(0, 1, 1));
        assert_eq!(arena.get(n1).g_cost, 1);
        assert_eq!(arena.get(n1).g_size, 1);
    }

    #[test]
    fn cheap_step_moves_accumulators_by_cost_and_one() {
        // Extending by a min-cost edge out of a wide cost range moves the
        // pair (g_cost, g_size) by exactly (1, 1): a 10-unit prefix of 10
        // unit edges becomes (11, 11), not (20, 11).
        let mut arena = NodeArena::new();
        let mut n = arena.root(0u32);
        for i in 0..10 {
            n = arena.extend(n, &edge(0, i + 1, 1));
        }
        let tip = arena.extend(n, &edge(1, 99, 1));
        assert_eq!(arena.get(tip).g_cost, arena.get(n).g_cost + 1);
        assert_eq!(arena.get(tip).g_size, arena.get(n).g_size + 1);
    }

    #[test]
    fn chain_of_unit_edges_keeps_cost_equal_to_size() {
        let mut arena = NodeArena::new();
        let mut n = arena.root(0u32);
        for i in 0..5 {
            n = arena.extend(n, &edge(0, i + 1, 1));
        }
        assert_eq!(arena.get(n).g_cost, 5);
        assert_eq!(arena.get(n).g_size, 5);
    }

    #[test]
    fn reconstruct_root_is_empty_plan() {
        let mut arena = NodeArena::new();
        let root = arena.root(0u32);
        let plan = arena.reconstruct_plan(root);
        assert_eq!(plan, Plan::empty());
    }

    #[test]
    fn reconstruct_lists_actions_root_to_tip() {
        let mut arena = NodeArena::new();
        let root = arena.root(0u32);
        let a = arena.extend(root, &edge(3, 1, 8));
        let b = arena.extend(a, &edge(4, 2, 1));
        let plan = arena.reconstruct_plan(b);
        assert_eq!(plan.actions, vec![3, 4]);
        assert_eq!(plan.total_cost, 9);
        assert_eq!(plan.length, 2);
    }

    #[test]
    fn epsilon_and_normalize() {
        assert_eq!(normalize_cost(8, 8).unwrap(), Ratio::new(1, 1));
        assert_eq!(normalize_cost(1, 8).unwrap(), Ratio::new(1, 8));
        assert_eq!(normalize_cost(7000, 10000).unwrap(), Ratio::new(7, 10));
        assert_eq!(normalize_cost(5, 0), Err(GraphError::ZeroMaxCost));
    }
}
