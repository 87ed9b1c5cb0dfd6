//! Competition-style quality scoring.
//!
//! Per-problem quality of a run is `reference_cost / achieved_cost`, 0 when
//! the run found nothing (the 2008 competition ratio rule). The aggregate
//! over a problem set is the quality sum; the percentage normalizes by the
//! number of problems.

use super::RunRecord;
use crate::eval::Rational;
use crate::graph::Cost;
use num_rational::Ratio;
use std::collections::BTreeMap;
use thiserror::Error;

/// Where reference costs come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// The exhaustive oracle where its cap allowed, otherwise the best cost
    /// any run achieved on the problem.
    Oracle,
    /// Always the best cost achieved across the runs on the problem.
    BestOfRuns,
}

impl Reference {
    pub fn cli_name(&self) -> &'static str {
        match self {
            Reference::Oracle => "oracle",
            Reference::BestOfRuns => "best",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "oracle" => Reference::Oracle,
            "best" => Reference::BestOfRuns,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub problem: String,
    pub run_id: String,
    pub variant: String,
    pub quality: Rational,
    pub solved: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantAggregate {
    pub variant: String,
    /// Sum of qualities over the problem set.
    pub score: Rational,
    /// Problems solved.
    pub coverage: u64,
    /// score / problem count.
    pub percentage: Rational,
    /// Dense rank by descending score; tied scores share a rank.
    pub rank: u64,
}

#[derive(Debug, Clone)]
pub struct ScoreReport {
    pub reference: Reference,
    pub problem_count: u64,
    pub rows: Vec<ScoreRow>,
    pub aggregates: Vec<VariantAggregate>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScoreError {
    #[error("no records to score")]
    Empty,
    #[error("problem `{0}` has no reference cost (nothing solved it)")]
    NoReference(String),
}

/// Reference cost per problem under the chosen rule.
pub fn reference_costs(
    records: &[RunRecord],
    reference: Reference,
) -> BTreeMap<String, Option<Cost>> {
    let mut best: BTreeMap<String, Option<Cost>> = BTreeMap::new();
    for r in records {
        let key = r.spec.domain.problem_key();
        let entry = best.entry(key).or_insert(None);
        if let Some((cost, _)) = r.best {
            *entry = Some(match *entry {
                None => cost,
                Some(cur) => cur.min(cost),
            });
        }
    }
    if reference == Reference::Oracle {
        for r in records {
            if let Some(oracle) = r.oracle_cost {
                best.insert(r.spec.domain.problem_key(), Some(oracle));
            }
        }
    }
    best
}

/// Scores a record set. Records are grouped by problem; a variant's
/// aggregate sums its qualities over every problem it ran on.
pub fn ipc_score(records: &[RunRecord], reference: Reference) -> Result<ScoreReport, ScoreError> {
    if records.is_empty() {
        return Err(ScoreError::Empty);
    }
    let refs = reference_costs(records, reference);
    let mut rows = Vec::with_capacity(records.len());
    for r in records {
        let problem = r.spec.domain.problem_key();
        let quality = match r.best {
            None => Ratio::from_integer(0),
            Some((achieved, _)) => {
                let reference_cost = refs[&problem]
                    .ok_or_else(|| ScoreError::NoReference(problem.clone()))?;
                if achieved == 0 {
                    // A zero-cost optimum can only be matched exactly.
                    Ratio::from_integer(1)
                } else {
                    Ratio::new(reference_cost as i64, achieved as i64)
                }
            }
        };
        rows.push(ScoreRow {
            problem,
            run_id: r.spec.id.clone(),
            variant: r.spec.variant_label(),
            quality,
            solved: r.best.is_some(),
        });
    }

    let problem_count = refs.len() as u64;
    let mut by_variant: BTreeMap<String, (Rational, u64)> = BTreeMap::new();
    for row in &rows {
        let entry = by_variant
            .entry(row.variant.clone())
            .or_insert((Ratio::from_integer(0), 0));
        entry.0 += row.quality;
        if row.solved {
            entry.1 += 1;
        }
    }
    let mut aggregates: Vec<VariantAggregate> = by_variant
        .into_iter()
        .map(|(variant, (score, coverage))| VariantAggregate {
            variant,
            score,
            coverage,
            percentage: score / Ratio::from_integer(problem_count.max(1) as i64),
            rank: 0,
        })
        .collect();
    aggregates.sort_by(|a, b| b.score.cmp(&a.score).then_with(|| a.variant.cmp(&b.variant)));
    let mut rank = 0;
    let mut last_score: Option<Rational> = None;
    for agg in aggregates.iter_mut() {
        if last_score != Some(agg.score) {
            rank += 1;
            last_score = Some(agg.score);
        }
        agg.rank = rank;
    }

    Ok(ScoreReport {
        reference,
        problem_count,
        rows,
        aggregates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{DomainSpec, RunSpec};
    use crate::eval::EvaluatorKind;
    use crate::heuristics::HeuristicKind;
    use crate::search::SearchStats;

    fn record(id: &str, eval: EvaluatorKind, goal: u64, best: Option<Cost>, oracle: Option<Cost>) -> RunRecord {
        let spec = RunSpec::new(
            id,
            DomainSpec::Cycle {
                k: 4,
                expensive_cost: None,
                goal: Some(goal),
            },
            eval,
            HeuristicKind::Zero,
        );
        RunRecord {
            spec,
            status: Some(SearchStatus::BudgetExhausted),
            stats: SearchStats::default(),
            events: Vec::new(),
            first: best.map(|c| (c, 1)),
            best: best.map(|c| (c, 1)),
            best_plan: None,
            oracle_cost: oracle,
            wall_ms: 0,
            error: None,
        }
    }

    #[test]
    fn quality_ratio_rule() {
        let records = vec![
            record("match", EvaluatorKind::Cost, 1, Some(10), Some(10)),
            record("double", EvaluatorKind::Size, 1, Some(20), Some(10)),
            record("unsolved", EvaluatorKind::Hybrid, 1, None, Some(10)),
        ];
        let report = ipc_score(&records, Reference::Oracle).unwrap();
        assert_eq!(report.rows[0].quality, Ratio::from_integer(1));
        assert_eq!(report.rows[1].quality, Ratio::new(1, 2));
        assert_eq!(report.rows[2].quality, Ratio::from_integer(0));
        assert!(!report.rows[2].solved);
    }

    #[test]
    fn best_of_runs_reference_without_oracle() {
        let records = vec![
            record("a", EvaluatorKind::Cost, 2, Some(12), None),
            record("b", EvaluatorKind::Size, 2, Some(9), None),
        ];
        let report = ipc_score(&records, Reference::Oracle).unwrap();
        assert_eq!(report.rows[0].quality, Ratio::new(9, 12));
        assert_eq!(report.rows[1].quality, Ratio::from_integer(1));
    }

    #[test]
    fn dense_ranks_share_on_ties() {
        let records = vec![
            record("a", EvaluatorKind::Cost, 3, Some(10), Some(10)),
            record("b", EvaluatorKind::Size, 3, Some(20), Some(10)),
            record("c", EvaluatorKind::CsSize, 3, Some(20), Some(10)),
            record("d", EvaluatorKind::Hybrid, 3, Some(40), Some(10)),
        ];
        let report = ipc_score(&records, Reference::Oracle).unwrap();
        let ranks: Vec<(String, u64)> = report
            .aggregates
            .iter()
            .map(|a| (a.variant.clone(), a.rank))
            .collect();
        assert_eq!(ranks[0].1, 1);
        assert_eq!(ranks[1].1, 2);
        assert_eq!(ranks[2].1, 2, "tied scores share the rank");
        assert_eq!(ranks[3].1, 3, "next rank is dense, not skipped");
    }
}
