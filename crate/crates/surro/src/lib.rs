//! Best-first branch-and-bound search with interchangeable evaluation
//! functions, built to study how cost-ordered search behaves when edge
//! costs vary widely and what size-based surrogates buy back.
//!
//! The crate has four layers:
//!
//! - [`graph`]: the implicit-graph contract and search-node path records.
//! - [`eval`] and [`heuristics`]: evaluation functions (cost, size,
//!   cost-sensitive size, hybrid, weighted cost) and the estimators that
//!   feed them, including delete-relaxation cost propagation and relaxed
//!   plan extraction.
//! - [`search`]: the anytime branch-and-bound engine with duplicate
//!   dominance handling, resource limits, solution-event reporting and an
//!   optional usefulness lookahead for plateau escapes.
//! - [`domains`] and [`bench`]: trap domains, grounded travel tasks, a task
//!   file format, a reachability oracle, scoring and report emission.
//!
//! The `examples/` directory holds one runnable walkthrough per capability;
//! the `surro` binary wraps the bench layer in a small CLI.

pub mod bench;
pub mod domains;
pub mod eval;
pub mod graph;
pub mod heuristics;
pub mod search;

pub use eval::{EvaluatorConfig, EvaluatorKind, Priority, Rational, TieBreak};
pub use graph::{epsilon_of, normalize_cost, ActionId, Cost, Plan, SearchProblem};
pub use heuristics::{Heuristic, HeuristicKind, HeuristicValue};
pub use search::{
    best_first_bnb, SearchLimits, SearchOutcome, SearchSettings, SearchStats, SearchStatus,
    SolutionEvent,
};
