//! Matrix configuration files: blank-line-separated run blocks of
//! `key = value` lines using the CLI flag vocabulary.
//!
//! ```text
//! # globals apply to every following block
//! oracle-cap = 200000
//!
//! id = cycle-cost
//! domain = cycle
//! k = 12
//! goal = 3072
//! eval = cost
//! heur = zero
//! max-expansions = 100000
//! ```

use super::{BenchError, DomainSpec, PruneKind, RunSpec};
use crate::eval::{EvaluatorKind, Rational, TieBreak};
use crate::heuristics::HeuristicKind;
use crate::search::SearchLimits;
use num_rational::Ratio;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct MatrixConfig {
    pub specs: Vec<RunSpec>,
    pub oracle_cap: u64,
}

pub const DEFAULT_ORACLE_CAP: u64 = 200_000;

/// Parses `a/b` or a plain integer into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().ok()?;
        let den: i64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        Some(Ratio::new(num, den))
    } else {
        s.trim().parse::<i64>().ok().map(Ratio::from_integer)
    }
}

struct Block {
    start_line: usize,
    entries: BTreeMap<String, (String, usize)>,
}

fn config_err<T>(line: usize, message: impl std::fmt::Display) -> Result<T, BenchError> {
    Err(BenchError::Config(format!("line {line}: {message}")))
}

fn split_blocks(text: &str) -> Result<Vec<Block>, BenchError> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut current: Option<Block> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if line.trim().is_empty() {
            if let Some(block) = current.take() {
                blocks.push(block);
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return config_err(line_no, "expected `key = value`");
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let block = current.get_or_insert_with(|| Block {
            start_line: line_no,
            entries: BTreeMap::new(),
        });
        if block.entries.insert(key.clone(), (value, line_no)).is_some() {
            return config_err(line_no, format!("duplicate key `{key}`"));
        }
    }
    if let Some(block) = current.take() {
        blocks.push(block);
    }
    Ok(blocks)
}

fn take(block: &mut Block, key: &str) -> Option<(String, usize)> {
    block.entries.remove(key)
}

fn take_parsed<T: std::str::FromStr>(
    block: &mut Block,
    key: &str,
) -> Result<Option<T>, BenchError> {
    match take(block, key) {
        None => Ok(None),
        Some((value, line)) => value
            .parse::<T>()
            .map(Some)
            .map_err(|_| BenchError::Config(format!("line {line}: bad value for `{key}`: `{value}`"))),
    }
}

fn require<T>(value: Option<T>, block_line: usize, key: &str) -> Result<T, BenchError> {
    value.ok_or_else(|| {
        BenchError::Config(format!("block at line {block_line}: missing `{key}`"))
    })
}

fn build_domain(block: &mut Block) -> Result<DomainSpec, BenchError> {
    let start = block.start_line;
    let (domain, line) = require(take(block, "domain"), start, "domain")?;
    match domain.as_str() {
        "cycle" => Ok(DomainSpec::Cycle {
            k: require(take_parsed(block, "k")?, start, "k")?,
            expensive_cost: take_parsed(block, "expensive-cost")?,
            goal: take_parsed(block, "goal")?,
        }),
        "btree" => Ok(DomainSpec::BTree {
            x: require(take_parsed(block, "x")?, start, "x")?,
            y: require(take_parsed(block, "y")?, start, "y")?,
            high_cost: require(take_parsed(block, "high-cost")?, start, "high-cost")?,
            low_cost: require(take_parsed(block, "low-cost")?, start, "low-cost")?,
            goal_high: require(take_parsed(block, "goal-high")?, start, "goal-high")?,
            goal_low: require(take_parsed(block, "goal-low")?, start, "goal-low")?,
            depth_cap: require(take_parsed(block, "depth-cap")?, start, "depth-cap")?,
        }),
        "rendezvous" => Ok(DomainSpec::Rendezvous {
            passengers: require(take_parsed(block, "passengers")?, start, "passengers")?,
            planes: take_parsed(block, "planes")?.unwrap_or(1),
        }),
        "chain" => Ok(DomainSpec::Chain {
            chain_length: require(take_parsed(block, "chain-length")?, start, "chain-length")?,
        }),
        "taskfile" => Ok(DomainSpec::TaskFile {
            path: require(take(block, "file"), start, "file")?.0,
        }),
        other => config_err(line, format!("unknown domain `{other}`")),
    }
}

fn build_spec(mut block: Block, index: usize) -> Result<RunSpec, BenchError> {
    let start = block.start_line;
    let id = take(&mut block, "id")
        .map(|(v, _)| v)
        .unwrap_or_else(|| format!("run{index:03}"));
    let domain = build_domain(&mut block)?;

    let (eval_raw, eval_line) = require(take(&mut block, "eval"), start, "eval")?;
    let eval = EvaluatorKind::parse(&eval_raw)
        .ok_or_else(|| BenchError::Config(format!("line {eval_line}: unknown eval `{eval_raw}`")))?;
    let (heur_raw, heur_line) = require(take(&mut block, "heur"), start, "heur")?;
    let heuristic = HeuristicKind::parse(&heur_raw)
        .ok_or_else(|| BenchError::Config(format!("line {heur_line}: unknown heur `{heur_raw}`")))?;

    let mut spec = RunSpec::new(id, domain, eval, heuristic);
    if let Some((v, line)) = take(&mut block, "tiebreak") {
        spec.tiebreak = TieBreak::parse(&v)
            .ok_or_else(|| BenchError::Config(format!("line {line}: unknown tiebreak `{v}`")))?;
    }
    if let Some((v, line)) = take(&mut block, "weight") {
        spec.weight = parse_rational(&v)
            .ok_or_else(|| BenchError::Config(format!("line {line}: bad weight `{v}`")))?;
    }
    if let Some((v, line)) = take(&mut block, "prune-heur") {
        spec.prune = PruneKind::parse(&v)
            .ok_or_else(|| BenchError::Config(format!("line {line}: unknown prune-heur `{v}`")))?;
    }
    if let Some((v, line)) = take(&mut block, "lookahead") {
        spec.lookahead = v
            .parse()
            .map_err(|_| BenchError::Config(format!("line {line}: lookahead wants true/false")))?;
    }
    if let Some((v, line)) = take(&mut block, "plateau-tau") {
        spec.plateau_tau = Some(parse_rational(&v).ok_or_else(|| {
            BenchError::Config(format!("line {line}: bad plateau-tau `{v}`"))
        })?);
    }
    let mut limits = SearchLimits::none();
    limits.max_expansions = take_parsed(&mut block, "max-expansions")?;
    limits.max_wall_ms = take_parsed::<u64>(&mut block, "max-seconds")?.map(|s| s * 1000);
    limits.max_nodes_in_memory = take_parsed(&mut block, "max-nodes")?;
    spec.limits = limits;

    if let Some((key, (_, line))) = block.entries.iter().next() {
        return config_err(*line, format!("unknown key `{key}`"));
    }
    Ok(spec)
}

pub fn parse_matrix_config(text: &str) -> Result<MatrixConfig, BenchError> {
    let mut oracle_cap = DEFAULT_ORACLE_CAP;
    let mut specs = Vec::new();
    let mut run_index = 0;
    for mut block in split_blocks(text)? {
        if !block.entries.contains_key("domain") {
            // Globals block.
            if let Some(cap) = take_parsed(&mut block, "oracle-cap")? {
                oracle_cap = cap;
            }
            if let Some((key, (_, line))) = block.entries.iter().next() {
                return config_err(*line, format!("unknown global key `{key}`"));
            }
            continue;
        }
        specs.push(build_spec(block, run_index)?);
        run_index += 1;
    }
    if specs.is_empty() {
        return Err(BenchError::Config("config defines no runs".into()));
    }
    Ok(MatrixConfig { specs, oracle_cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# sample matrix
oracle-cap = 5000

id = c1
domain = cycle
k = 6
eval = cost
heur = zero
max-expansions = 100

domain = cycle   # auto id
k = 6
goal = 10
eval = size
heur = zero
tiebreak = cost
";

    #[test]
    fn parses_blocks_and_globals() {
        let cfg = parse_matrix_config(SAMPLE).unwrap();
        assert_eq!(cfg.oracle_cap, 5000);
        assert_eq!(cfg.specs.len(), 2);
        assert_eq!(cfg.specs[0].id, "c1");
        assert_eq!(cfg.specs[0].limits.max_expansions, Some(100));
        assert_eq!(cfg.specs[1].id, "run001");
        assert_eq!(cfg.specs[1].tiebreak, TieBreak::OnCost);
    }

    #[test]
    fn unknown_key_has_line_number() {
        let text = "domain = cycle\nk = 4\neval = cost\nheur = zero\nfrob = 1\n";
        let err = parse_matrix_config(text).unwrap_err().to_string();
        assert!(err.contains("line 5"), "{err}");
        assert!(err.contains("frob"));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/8"), Some(Ratio::new(1, 8)));
        assert_eq!(parse_rational("3"), Some(Ratio::from_integer(3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
