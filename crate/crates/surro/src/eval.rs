//! Evaluation functions: how a node's accumulated measures and heuristic
//! estimate turn into an open-list priority.
//!
//! Priorities are exact rationals. Integer costs plus rational normalization
//! keep every comparison exact, so expansion counts are reproducible and
//! never depend on floating-point tie noise.

use crate::graph::Cost;
use crate::heuristics::HeuristicValue;
use num_rational::Ratio;
use std::cmp::Ordering;

pub type Rational = Ratio<i64>;

/// Open-list key: lexicographic on (primary, tiebreak, seq). The seq
/// component makes the order total, so fully tied entries dequeue FIFO.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Priority {
    pub primary: Rational,
    pub tiebreak: Rational,
    pub seq: u64,
}

impl Ord for Priority {
    fn cmp(&self, other: &Self) -> Ordering {
        self.primary
            .cmp(&other.primary)
            .then_with(|| self.tiebreak.cmp(&other.tiebreak))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for Priority {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The evaluation-function family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvaluatorKind {
    /// f = g_cost + cost-to-go: cheapest-completion-first.
    Cost,
    /// f = g_size + size-to-go with a shortest-completion estimate.
    Size,
    /// f = g_size + size-to-go with a cheapest-completion-size estimate.
    CsSize,
    /// f = (g_size + size-to-go) + (g_cost + cost-to-go) / max_cost.
    Hybrid,
    /// f = g_cost + weight * cost-to-go.
    WeightedCost,
}

impl EvaluatorKind {
    pub fn cli_name(&self) -> &'static str {
        match self {
            EvaluatorKind::Cost => "cost",
            EvaluatorKind::Size => "size",
            EvaluatorKind::CsSize => "cs-size",
            EvaluatorKind::Hybrid => "hybrid",
            EvaluatorKind::WeightedCost => "wcost",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "cost" => EvaluatorKind::Cost,
            "size" => EvaluatorKind::Size,
            "cs-size" => EvaluatorKind::CsSize,
            "hybrid" => EvaluatorKind::Hybrid,
            "wcost" => EvaluatorKind::WeightedCost,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    None,
    OnCost,
    OnSize,
}

impl TieBreak {
    pub fn cli_name(&self) -> &'static str {
        match self {
            TieBreak::None => "none",
            TieBreak::OnCost => "cost",
            TieBreak::OnSize => "size",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "none" => TieBreak::None,
            "cost" => TieBreak::OnCost,
            "size" => TieBreak::OnSize,
            _ => return None,
        })
    }
}

/// A fully specified evaluation function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvaluatorConfig {
    pub kind: EvaluatorKind,
    pub tiebreak: TieBreak,
    /// Weight for `WeightedCost`; must be >= 1.
    pub weight: Rational,
    /// Normalization constant for `Hybrid`; must be >= the instance's
    /// maximum edge cost.
    pub max_cost: Option<Cost>,
}

impl EvaluatorConfig {
    pub fn new(kind: EvaluatorKind) -> Self {
        EvaluatorConfig {
            kind,
            tiebreak: TieBreak::None,
            weight: Ratio::from_integer(1),
            max_cost: None,
        }
    }

    pub fn with_tiebreak(mut self, tiebreak: TieBreak) -> Self {
        self.tiebreak = tiebreak;
        self
    }

    pub fn with_weight(mut self, weight: Rational) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_max_cost(mut self, max_cost: Cost) -> Self {
        self.max_cost = Some(max_cost);
        self
    }

    /// Priority of a node with accumulators `(g_cost, g_size)` and estimate
    /// `h`. `None` marks a dead end that must never be enqueued.
    pub fn priority(
        &self,
        g_cost: Cost,
        g_size: u64,
        h: &HeuristicValue,
        seq: u64,
    ) -> Option<Priority> {
        let (h_cost, h_size) = match h {
            HeuristicValue::Infinite => return None,
            HeuristicValue::Finite { cost, size } => (*cost, *size),
        };
        let primary = match self.kind {
            EvaluatorKind::Cost => f_cost(g_cost, h_cost),
            EvaluatorKind::Size => f_size(g_size, h_size),
            EvaluatorKind::CsSize => f_cs_size(g_size, h_size),
            EvaluatorKind::Hybrid => {
                let max_cost = self.max_cost.expect("hybrid requires max_cost");
                f_hybrid(g_cost, g_size, h_cost, h_size, max_cost)
            }
            EvaluatorKind::WeightedCost => f_weighted_cost(g_cost, h_cost, self.weight),
        };
        let tiebreak = match self.tiebreak {
            TieBreak::None => Ratio::from_integer(0),
            TieBreak::OnCost => f_cost(g_cost, h_cost),
            TieBreak::OnSize => f_size(g_size, h_size),
        };
        Some(Priority {
            primary,
            tiebreak,
            seq,
        })
    }

    /// The g-component this evaluator accumulates, used for plateau
    /// detection.
    pub fn g_component(&self, g_cost: Cost, g_size: u64) -> Rational {
        match self.kind {
            EvaluatorKind::Cost | EvaluatorKind::WeightedCost => {
                Ratio::from_integer(g_cost as i64)
            }
            EvaluatorKind::Size | EvaluatorKind::CsSize => Ratio::from_integer(g_size as i64),
            EvaluatorKind::Hybrid => {
                let max_cost = self.max_cost.expect("hybrid requires max_cost");
                Ratio::from_integer(g_size as i64)
                    + Ratio::new(g_cost as i64, max_cost as i64)
            }
        }
    }
}

/// Cheapest-completion-first.
pub fn f_cost(g_cost: Cost, h_cost: Cost) -> Rational {
    Ratio::from_integer((g_cost + h_cost) as i64)
}

/// Canonical size-based (search-distance) priority.
pub fn f_size(g_size: u64, h_size: u64) -> Rational {
    Ratio::from_integer((g_size + h_size) as i64)
}

/// Size-based but cost-sensitive: the size estimate tracks the cheapest
/// completion. Same arithmetic as `f_size`; the estimator differs.
pub fn f_cs_size(g_size: u64, h_size: u64) -> Rational {
    f_size(g_size, h_size)
}

/// Size priority plus the cost priority normalized into [0, 1] units.
pub fn f_hybrid(g_cost: Cost, g_size: u64, h_cost: Cost, h_size: u64, max_cost: Cost) -> Rational {
    assert!(max_cost > 0, "hybrid normalization constant must be positive");
    f_size(g_size, h_size) + Ratio::new((g_cost + h_cost) as i64, max_cost as i64)
}

/// g_cost + weight * cost-to-go.
pub fn f_weighted_cost(g_cost: Cost, h_cost: Cost, weight: Rational) -> Rational {
    Ratio::from_integer(g_cost as i64) + weight * Ratio::from_integer(h_cost as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(cost: Cost, size: u64) -> HeuristicValue {
        HeuristicValue::Finite { cost, size }
    }

    #[test]
    fn cost_priority_tracks_g_plus_h() {
        // Root with h_cost 10, then one min-cost step with h unchanged.
        assert_eq!(f_cost(0, 10), Ratio::from_integer(10));
        assert_eq!(f_cost(1, 10), Ratio::from_integer(11));
        // Goal node: h = 0.
        assert_eq!(f_cost(9, 0), Ratio::from_integer(9));
    }

    #[test]
    fn size_priority_tracks_depth_plus_estimate() {
        assert_eq!(f_size(0, 20), Ratio::from_integer(20));
        assert_eq!(f_size(1, 20), Ratio::from_integer(21));
    }

    #[test]
    fn cs_size_counts_completion_length() {
        assert_eq!(f_cs_size(3, 5), Ratio::from_integer(8));
        assert_eq!(f_cs_size(4, 0), Ratio::from_integer(4));
    }

    #[test]
    fn hybrid_is_exact_rational() {
        // size part 8, cost part 14008, max cost 10000.
        let v = f_hybrid(14000, 3, 8, 5, 10000);
        assert_eq!(v, Ratio::new(94008, 10000));
        // Goal node with the zero heuristic.
        let v = f_hybrid(7, 4, 0, 0, 10000);
        assert_eq!(v, Ratio::from_integer(4) + Ratio::new(7, 10000));
    }

    #[test]
    fn hybrid_with_unit_max_cost_doubles_cost_order() {
        // Uniform unit costs and max_cost 1: f = f_s + f_c = 2 f_c.
        let v = f_hybrid(5, 5, 2, 2, 1);
        assert_eq!(v, Ratio::from_integer(14));
    }

    #[test]
    fn dead_end_is_never_enqueued() {
        let cfg = EvaluatorConfig::new(EvaluatorKind::Cost);
        assert!(cfg.priority(3, 3, &HeuristicValue::Infinite, 7).is_none());
    }

    #[test]
    fn tiebreak_orders_equal_primaries() {
        let cfg = EvaluatorConfig::new(EvaluatorKind::Size).with_tiebreak(TieBreak::OnCost);
        // Equal f_size, g_cost 9 vs 14: the cheap one dequeues first.
        let a = cfg.priority(9, 2, &fin(0, 3), 1).unwrap();
        let b = cfg.priority(14, 2, &fin(0, 3), 0).unwrap();
        assert_eq!(a.primary, b.primary);
        assert!(a < b);

        let cfg = EvaluatorConfig::new(EvaluatorKind::Cost).with_tiebreak(TieBreak::OnSize);
        // Equal f_cost, g_size 2 vs 14: the short one first.
        let a = cfg.priority(20, 2, &fin(0, 0), 5).unwrap();
        let b = cfg.priority(20, 14, &fin(0, 0), 4).unwrap();
        assert!(a < b);
    }

    #[test]
    fn no_tiebreak_falls_through_to_seq() {
        let cfg = EvaluatorConfig::new(EvaluatorKind::Cost);
        let a = cfg.priority(5, 1, &fin(0, 0), 10).unwrap();
        let b = cfg.priority(5, 9, &fin(0, 0), 11).unwrap();
        assert_eq!(a.tiebreak, Ratio::from_integer(0));
        assert!(a < b, "FIFO among fully tied entries");
    }

    #[test]
    fn weighted_cost_scales_the_estimate() {
        let w = Ratio::new(3, 2);
        assert_eq!(f_weighted_cost(4, 10, w), Ratio::from_integer(19));
        // Weight 1 collapses to plain cost.
        assert_eq!(
            f_weighted_cost(4, 10, Ratio::from_integer(1)),
            f_cost(4, 10)
        );
    }
}
