//! Byte-deterministic CSV and markdown emission.
//!
//! Qualities are exact rationals; they are printed as fixed-point decimals
//! through integer arithmetic, so re-emitting the same records always
//! yields identical bytes. Wall-clock columns can be zeroed for stable
//! comparisons across repeated runs.

use super::curve::AnytimeCurve;
use super::score::ScoreReport;
use super::{BenchError, RunRecord};
use crate::eval::Rational;
use std::fmt::Write as _;
use std::path::Path;

/// Controls the wall-clock columns; `Omit` writes 0 so repeated matrices
/// compare byte-identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    Wall,
    Omit,
}

/// Fixed-point decimal rendering of an exact rational (half-up).
pub fn decimal(r: Rational, places: u32) -> String {
    let scale = 10i64.pow(places);
    let rounded = (r * Rational::from_integer(scale) + Rational::new(1, 2))
        .floor()
        .to_integer();
    let sign = if rounded < 0 { "-" } else { "" };
    let abs = rounded.abs();
    format!("{sign}{}.{:0width$}", abs / scale, abs % scale, width = places as usize)
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const RUNS_HEADER: &str = "run_id,domain,params,eval,tiebreak,heur,prune_heur,lookahead,\
expansions,generations,reopenings,duplicates_pruned,bound_prunes,heuristic_calls,\
discovery_expansions,discovery_ms,first_cost,first_size,best_cost,best_size,status,\
oracle_cost,wall_ms";

pub fn runs_csv(records: &[RunRecord], timing: Timing) -> String {
    let mut out = String::new();
    out.push_str(RUNS_HEADER);
    out.push('\n');
    for r in records {
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        let first_ms = r.events.first().map(|e| e.wall_ms_at_event);
        let status = match (&r.status, &r.error) {
            (Some(s), _) => s.as_str().to_string(),
            (None, Some(e)) => format!("ERROR: {e}"),
            (None, None) => "ERROR".to_string(),
        };
        let (wall, discovery_ms) = match timing {
            Timing::Wall => (r.wall_ms, first_ms),
            Timing::Omit => (0, first_ms.map(|_| 0)),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.spec.id),
            r.spec.domain.domain_name(),
            csv_field(&r.spec.domain.params_string()),
            r.spec.eval.cli_name(),
            r.spec.tiebreak.cli_name(),
            r.spec.heuristic.cli_name(),
            r.spec.prune.cli_name(),
            r.spec.lookahead,
            r.stats.expansions,
            r.stats.generations,
            r.stats.reopenings,
            r.stats.duplicates_pruned,
            r.stats.bound_prunes,
            r.stats.heuristic_calls,
            opt(r.stats.discovery_expansions),
            opt(discovery_ms),
            opt(r.first.map(|(c, _)| c)),
            opt(r.first.map(|(_, s)| s)),
            opt(r.best.map(|(c, _)| c)),
            opt(r.best.map(|(_, s)| s)),
            csv_field(&status),
            opt(r.oracle_cost),
            wall,
        );
    }
    out
}

pub const EVENTS_HEADER: &str = "run_id,event_index,expansions_at_event,ms_at_event,cost,size";

pub fn events_csv(records: &[RunRecord], timing: Timing) -> String {
    let mut out = String::new();
    out.push_str(EVENTS_HEADER);
    out.push('\n');
    for r in records {
        for (i, e) in r.events.iter().enumerate() {
            let ms = match timing {
                Timing::Wall => e.wall_ms_at_event,
                Timing::Omit => 0,
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                csv_field(&r.spec.id),
                i,
                e.expansions_at_event,
                ms,
                e.cost,
                e.size
            );
        }
    }
    out
}

pub fn scores_csv(report: &ScoreReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# quality rule: 2008 competition ratio (reference/achieved, 0 unsolved); reference: {}",
        report.reference.cli_name()
    );
    out.push_str("problem_id,run_id,quality,coverage_flag\n");
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_field(&row.problem),
            csv_field(&row.run_id),
            decimal(row.quality, 6),
            u8::from(row.solved)
        );
    }
    for agg in &report.aggregates {
        let _ = writeln!(
            out,
            "aggregate,{},{},{}",
            csv_field(&agg.variant),
            decimal(agg.score, 6),
            agg.coverage
        );
    }
    out
}

pub fn curve_csv(curve: &AnytimeCurve) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# axis: {}", curve.axis.cli_name());
    out.push_str("series,kind");
    for instant in &curve.instants {
        let _ = write!(out, ",{instant}");
    }
    out.push('\n');
    for (id, row) in &curve.per_run {
        let _ = write!(out, "{},run", csv_field(id));
        for q in row {
            let _ = write!(out, ",{}", decimal(*q, 6));
        }
        out.push('\n');
    }
    for (variant, row) in &curve.per_variant {
        let _ = write!(out, "{},variant", csv_field(variant));
        for q in row {
            let _ = write!(out, ",{}", decimal(*q, 6));
        }
        out.push('\n');
    }
    out
}

/// Markdown table in the two-column score/rank layout.
pub fn markdown_scores(report: &ScoreReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Scores over {} problem(s); quality rule: 2008 competition ratio; reference: {}.\n",
        report.problem_count,
        report.reference.cli_name()
    );
    out.push_str("| Mode | Score | Rank |\n|---|---|---|\n");
    for agg in &report.aggregates {
        let percent = agg.percentage * Rational::from_integer(100);
        let _ = writeln!(
            out,
            "| {} | {}% | {} |",
            agg.variant,
            decimal(percent, 1),
            agg.rank
        );
    }
    out
}

fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    field.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' if field.is_empty() => quoted = true,
            ',' if !quoted => fields.push(std::mem::take(&mut field)),
            c => field.push(c),
        }
    }
    fields.push(field);
    fields
}

/// Reads a runs.csv back into records. Only the identity, counters, costs
/// and status survive the round trip; such records can be scored but not
/// re-run.
pub fn read_runs_csv(text: &str, origin: &str) -> Result<Vec<RunRecord>, BenchError> {
    use crate::bench::{DomainSpec, PruneKind, RunSpec};
    use crate::eval::{EvaluatorKind, TieBreak};
    use crate::heuristics::HeuristicKind;
    use crate::search::{SearchStats, SearchStatus};

    let bad = |line: usize, msg: String| BenchError::Config(format!("{origin}: line {line}: {msg}"));
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(bad(1, "empty file".into()));
    };
    if header != RUNS_HEADER {
        return Err(bad(1, "not a runs.csv header".into()));
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let f = split_csv_line(line);
        if f.len() != 23 {
            return Err(bad(line_no, format!("expected 23 fields, got {}", f.len())));
        }
        let int = |s: &String| -> Result<u64, BenchError> {
            s.parse()
                .map_err(|_| bad(line_no, format!("bad integer `{s}`")))
        };
        let opt_int = |s: &String| -> Result<Option<u64>, BenchError> {
            if s.is_empty() {
                Ok(None)
            } else {
                int(s).map(Some)
            }
        };
        let mut spec = RunSpec::new(
            f[0].clone(),
            DomainSpec::Opaque {
                name: f[1].clone(),
                params: f[2].clone(),
            },
            EvaluatorKind::parse(&f[3])
                .ok_or_else(|| bad(line_no, format!("unknown eval `{}`", f[3])))?,
            HeuristicKind::parse(&f[5])
                .ok_or_else(|| bad(line_no, format!("unknown heur `{}`", f[5])))?,
        );
        spec.tiebreak = TieBreak::parse(&f[4])
            .ok_or_else(|| bad(line_no, format!("unknown tiebreak `{}`", f[4])))?;
        spec.prune = PruneKind::parse(&f[6])
            .ok_or_else(|| bad(line_no, format!("unknown prune `{}`", f[6])))?;
        spec.lookahead = f[7]
            .parse()
            .map_err(|_| bad(line_no, "lookahead wants true/false".into()))?;
        let stats = SearchStats {
            expansions: int(&f[8])?,
            generations: int(&f[9])?,
            reopenings: int(&f[10])?,
            duplicates_pruned: int(&f[11])?,
            bound_prunes: int(&f[12])?,
            heuristic_calls: int(&f[13])?,
            discovery_expansions: opt_int(&f[14])?,
            ..SearchStats::default()
        };
        let (status, error) = match f[20].as_str() {
            "PROVED_OPTIMAL" => (Some(SearchStatus::ProvedOptimal), None),
            "BUDGET_EXHAUSTED" => (Some(SearchStatus::BudgetExhausted), None),
            "EXHAUSTED_NO_SOLUTION" => (Some(SearchStatus::ExhaustedNoSolution), None),
            other => (None, Some(other.to_string())),
        };
        let pair = |c: &String, s: &String| -> Result<Option<(u64, u64)>, BenchError> {
            Ok(match (opt_int(c)?, opt_int(s)?) {
                (Some(c), Some(s)) => Some((c, s)),
                _ => None,
            })
        };
        records.push(RunRecord {
            spec,
            status,
            stats,
            events: Vec::new(),
            first: pair(&f[16], &f[17])?,
            best: pair(&f[18], &f[19])?,
            best_plan: None,
            oracle_cost: opt_int(&f[21])?,
            wall_ms: int(&f[22])?,
            error,
        });
    }
    Ok(records)
}

/// Attaches events from an events.csv to records read by [`read_runs_csv`].
pub fn attach_events_csv(
    records: &mut [RunRecord],
    text: &str,
    origin: &str,
) -> Result<(), BenchError> {
    use crate::graph::Plan;
    use crate::search::SolutionEvent;

    let bad = |line: usize, msg: String| BenchError::Config(format!("{origin}: line {line}: {msg}"));
    let mut by_id: std::collections::HashMap<String, &mut RunRecord> = records
        .iter_mut()
        .map(|r| (r.spec.id.clone(), r))
        .collect();
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(bad(1, "empty file".into()));
    };
    if header != EVENTS_HEADER {
        return Err(bad(1, "not an events.csv header".into()));
    }
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let f = split_csv_line(line);
        if f.len() != 6 {
            return Err(bad(line_no, format!("expected 6 fields, got {}", f.len())));
        }
        let int = |s: &String| -> Result<u64, BenchError> {
            s.parse()
                .map_err(|_| bad(line_no, format!("bad integer `{s}`")))
        };
        if let Some(record) = by_id.get_mut(f[0].as_str()) {
            record.events.push(SolutionEvent {
                cost: int(&f[4])?,
                size: int(&f[5])?,
                expansions_at_event: int(&f[2])?,
                wall_ms_at_event: int(&f[3])?,
                plan: Plan::empty(),
            });
        }
    }
    Ok(())
}

pub fn write_file(path: &Path, content: &str) -> Result<(), BenchError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| BenchError::Io {
                path: path.display().to_string(),
                source,
            })?;
        }
    }
    std::fs::write(path, content).map_err(|source| BenchError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(Ratio::new(1, 2), 6), "0.500000");
        assert_eq!(decimal(Ratio::new(2, 3), 6), "0.666667");
        assert_eq!(decimal(Ratio::from_integer(1), 6), "1.000000");
        assert_eq!(decimal(Ratio::new(888, 10), 1), "88.8");
        assert_eq!(decimal(Ratio::from_integer(0), 6), "0.000000");
    }

    #[test]
    fn empty_records_emit_header_only() {
        assert_eq!(runs_csv(&[], Timing::Omit), format!("{RUNS_HEADER}\n"));
        assert_eq!(events_csv(&[], Timing::Omit), format!("{EVENTS_HEADER}\n"));
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }
}
