//! Anytime quality curves: the competition score each run has banked by a
//! given instant, using the best solution it had reported so far.
//!
//! The default axis is expansion counts, which are machine-independent;
//! wall-clock is available as a secondary axis.

use super::score::{reference_costs, Reference};
use super::RunRecord;
use crate::eval::Rational;
use num_rational::Ratio;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveAxis {
    Expansions,
    Millis,
}

impl CurveAxis {
    pub fn cli_name(&self) -> &'static str {
        match self {
            CurveAxis::Expansions => "expansions",
            CurveAxis::Millis => "ms",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "expansions" => CurveAxis::Expansions,
            "ms" => CurveAxis::Millis,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone)]
pub struct AnytimeCurve {
    pub axis: CurveAxis,
    pub instants: Vec<u64>,
    /// Per run id: quality at each instant. Nondecreasing along a row.
    pub per_run: Vec<(String, Vec<Rational>)>,
    /// Per variant label: quality sums at each instant.
    pub per_variant: Vec<(String, Vec<Rational>)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("instants must be ascending")]
    UnsortedInstants,
    #[error("no records")]
    Empty,
}

/// Quality of a run at an instant: best event at or before the instant,
/// scored against the problem's reference cost; 0 before the first event.
pub fn anytime_curve(
    records: &[RunRecord],
    reference: Reference,
    axis: CurveAxis,
    instants: &[u64],
) -> Result<AnytimeCurve, CurveError> {
    if records.is_empty() {
        return Err(CurveError::Empty);
    }
    if instants.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CurveError::UnsortedInstants);
    }
    let refs = reference_costs(records, reference);
    let mut per_run = Vec::with_capacity(records.len());
    let mut variant_sums: BTreeMap<String, Vec<Rational>> = BTreeMap::new();
    for r in records {
        let reference_cost = refs[&r.spec.domain.problem_key()];
        let row: Vec<Rational> = instants
            .iter()
            .map(|&instant| {
                let best_by_then = r
                    .events
                    .iter()
                    .filter(|e| {
                        let at = match axis {
                            CurveAxis::Expansions => e.expansions_at_event,
                            CurveAxis::Millis => e.wall_ms_at_event,
                        };
                        at <= instant
                    })
                    .map(|e| e.cost)
                    .min();
                match (best_by_then, reference_cost) {
                    (Some(cost), Some(reference)) if cost > 0 => {
                        Ratio::new(reference as i64, cost as i64)
                    }
                    (Some(_zero_cost), Some(_)) => Ratio::from_integer(1),
                    _ => Ratio::from_integer(0),
                }
            })
            .collect();
        let sums = variant_sums
            .entry(r.spec.variant_label())
            .or_insert_with(|| vec![Ratio::from_integer(0); instants.len()]);
        for (s, q) in sums.iter_mut().zip(row.iter()) {
            *s += q;
        }
        per_run.push((r.spec.id.clone(), row));
    }
    Ok(AnytimeCurve {
        axis,
        instants: instants.to_vec(),
        per_run,
        per_variant: variant_sums.into_iter().collect(),
    })
}

/// First instant index where curve `a` overtakes curve `b` and stays at
/// least equal through the end, if any.
pub fn crossover_instant(a: &[Rational], b: &[Rational]) -> Option<usize> {
    let mut candidate = None;
    for (i, (x, y)) in a.iter().zip(b.iter()).enumerate() {
        if x > y && candidate.is_none() {
            candidate = Some(i);
        }
        if x < y {
            candidate = None;
        }
    }
    candidate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{DomainSpec, RunSpec};
    use crate::eval::EvaluatorKind;
    use crate::graph::Plan;
    use crate::heuristics::HeuristicKind;
    use crate::search::{SearchStats, SearchStatus, SolutionEvent};

    fn event(cost: u64, expansions: u64) -> SolutionEvent {
        SolutionEvent {
            cost,
            size: 1,
            expansions_at_event: expansions,
            wall_ms_at_event: expansions,
            plan: Plan::empty(),
        }
    }

    fn record_with_events(id: &str, eval: EvaluatorKind, events: Vec<SolutionEvent>) -> RunRecord {
        let best = events.iter().map(|e| e.cost).min().map(|c| (c, 1));
        RunRecord {
            spec: RunSpec::new(
                id,
                DomainSpec::Cycle {
                    k: 4,
                    expensive_cost: None,
                    goal: None,
                },
                eval,
                HeuristicKind::Zero,
            ),
            status: Some(SearchStatus::ProvedOptimal),
            stats: SearchStats::default(),
            events,
            first: best,
            best,
            best_plan: None,
            oracle_cost: Some(9),
            wall_ms: 0,
            error: None,
        }
    }

    #[test]
    fn zero_before_first_event_and_final_after_proof() {
        let r = record_with_events("r", EvaluatorKind::Cost, vec![event(18, 10), event(9, 50)]);
        let curve = anytime_curve(&[r], Reference::Oracle, CurveAxis::Expansions, &[5, 10, 60])
            .unwrap();
        let row = &curve.per_run[0].1;
        assert_eq!(row[0], Ratio::from_integer(0));
        assert_eq!(row[1], Ratio::new(9, 18));
        assert_eq!(row[2], Ratio::from_integer(1));
        // Nondecreasing along the row.
        assert!(row.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn crossover_detection() {
        let a = vec![
            Ratio::from_integer(0),
            Ratio::new(1, 2),
            Ratio::from_integer(1),
        ];
        let b = vec![
            Ratio::new(1, 4),
            Ratio::new(1, 2),
            Ratio::new(3, 4),
        ];
        assert_eq!(crossover_instant(&a, &b), Some(2));
        assert_eq!(crossover_instant(&b, &a), None);
    }

    #[test]
    fn unsorted_instants_rejected() {
        let r = record_with_events("r", EvaluatorKind::Cost, vec![]);
        assert_eq!(
            anytime_curve(&[r], Reference::Oracle, CurveAxis::Expansions, &[5, 5])
                .unwrap_err(),
            CurveError::UnsortedInstants
        );
    }
}
