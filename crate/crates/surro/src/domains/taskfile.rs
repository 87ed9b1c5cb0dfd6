//! Line-oriented text format for grounded tasks.
//!
//! ```text
//! task NAME
//! fact INDEX NAME            # indices contiguous from 0
//! init IDX [IDX ...]
//! goal IDX [IDX ...]
//! action NAME COST
//! pre [IDX ...]
//! add [IDX ...]
//! del [IDX ...]
//! end                        # closes the action block
//! ```
//!
//! `#` starts a comment, tokens are whitespace-separated, directives are
//! lowercase, costs are positive decimal integers. Facts must be declared
//! before they are referenced. Serialization is byte-deterministic: facts
//! ascending, actions in declaration order.

use super::strips::{FactSet, GroundedTask, StripsAction, MAX_FACTS};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct TaskParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, TaskParseError> {
    Err(TaskParseError {
        line,
        message: message.into(),
    })
}

pub fn parse_task(text: &str) -> Result<GroundedTask, TaskParseError> {
    let mut name: Option<String> = None;
    let mut facts: Vec<(u32, String)> = Vec::new();
    let mut init: Option<Vec<u32>> = None;
    let mut goal: Option<Vec<u32>> = None;
    let mut actions: Vec<StripsAction> = Vec::new();

    struct PendingAction {
        start_line: usize,
        name: String,
        cost: u64,
        pre: Option<Vec<u32>>,
        add: Option<Vec<u32>>,
        del: Option<Vec<u32>>,
    }
    let mut pending: Option<PendingAction> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let directive = tokens[0];
        let fact_count = facts.len() as u32;

        let parse_indices = |args: &[&str], line_no: usize| -> Result<Vec<u32>, TaskParseError> {
            let mut out = Vec::with_capacity(args.len());
            for a in args {
                let i: u32 = a
                    .parse()
                    .map_err(|_| TaskParseError {
                        line: line_no,
                        message: format!("expected a fact index, got `{a}`"),
                    })?;
                if i >= fact_count {
                    return err(
                        line_no,
                        format!("fact index {i} out of range (have {fact_count} facts)"),
                    );
                }
                out.push(i);
            }
            Ok(out)
        };

        if let Some(p) = pending.as_mut() {
            match directive {
                "pre" if p.pre.is_none() => p.pre = Some(parse_indices(&tokens[1..], line_no)?),
                "add" if p.add.is_none() => p.add = Some(parse_indices(&tokens[1..], line_no)?),
                "del" if p.del.is_none() => p.del = Some(parse_indices(&tokens[1..], line_no)?),
                "end" => {
                    let p = pending.take().expect("inside action block");
                    let (Some(pre), Some(add), Some(del)) = (p.pre, p.add, p.del) else {
                        return err(
                            line_no,
                            "action block needs pre, add and del lines before end",
                        );
                    };
                    let add = FactSet::from_indices(&add);
                    let del = FactSet::from_indices(&del);
                    let mut overlap = add;
                    overlap.subtract(&del);
                    if overlap != add {
                        return err(
                            p.start_line,
                            format!("action `{}` adds and deletes the same fact", p.name),
                        );
                    }
                    actions.push(StripsAction {
                        name: p.name,
                        cost: p.cost,
                        pre: FactSet::from_indices(&pre),
                        add,
                        del,
                    });
                }
                other => {
                    return err(
                        line_no,
                        format!("unexpected `{other}` inside action block (want pre/add/del/end)"),
                    )
                }
            }
            continue;
        }

        match directive {
            "task" => {
                if name.is_some() {
                    return err(line_no, "duplicate task directive");
                }
                if tokens.len() != 2 {
                    return err(line_no, "task directive wants exactly one name");
                }
                name = Some(tokens[1].to_string());
            }
            "fact" => {
                if tokens.len() != 3 {
                    return err(line_no, "fact directive wants INDEX NAME");
                }
                let i: u32 = tokens[1].parse().map_err(|_| TaskParseError {
                    line: line_no,
                    message: format!("expected a fact index, got `{}`", tokens[1]),
                })?;
                if i as usize != facts.len() {
                    return err(
                        line_no,
                        format!("fact indices must be contiguous from 0; expected {}", facts.len()),
                    );
                }
                if facts.len() >= MAX_FACTS {
                    return err(line_no, format!("at most {MAX_FACTS} facts are supported"));
                }
                if facts.iter().any(|(_, n)| n == tokens[2]) {
                    return err(line_no, format!("duplicate fact name `{}`", tokens[2]));
                }
                facts.push((i, tokens[2].to_string()));
            }
            "init" => {
                if init.is_some() {
                    return err(line_no, "duplicate init directive");
                }
                init = Some(parse_indices(&tokens[1..], line_no)?);
            }
            "goal" => {
                if goal.is_some() {
                    return err(line_no, "duplicate goal directive");
                }
                goal = Some(parse_indices(&tokens[1..], line_no)?);
            }
            "action" => {
                if tokens.len() != 3 {
                    return err(line_no, "action directive wants NAME COST");
                }
                let cost: u64 = tokens[2].parse().map_err(|_| TaskParseError {
                    line: line_no,
                    message: format!("expected an integer cost, got `{}`", tokens[2]),
                })?;
                if cost < 1 {
                    return err(line_no, format!("action `{}` has cost 0; costs must be >= 1", tokens[1]));
                }
                if actions.iter().any(|a| a.name == tokens[1]) {
                    return err(line_no, format!("duplicate action name `{}`", tokens[1]));
                }
                pending = Some(PendingAction {
                    start_line: line_no,
                    name: tokens[1].to_string(),
                    cost,
                    pre: None,
                    add: None,
                    del: None,
                });
            }
            other => return err(line_no, format!("unknown directive `{other}`")),
        }
    }

    if let Some(p) = pending {
        return err(p.start_line, format!("action `{}` is missing its end line", p.name));
    }
    let last_line = text.lines().count().max(1);
    let Some(name) = name else {
        return err(last_line, "missing task directive");
    };
    let task = GroundedTask {
        name,
        facts: facts.into_iter().map(|(_, n)| n).collect(),
        init: FactSet::from_indices(&init.unwrap_or_default()),
        goal: FactSet::from_indices(&goal.unwrap_or_default()),
        actions,
    };
    task.validate().map_err(|e| TaskParseError {
        line: last_line,
        message: e.to_string(),
    })?;
    Ok(task)
}

pub fn serialize_task(task: &GroundedTask) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "task {}", task.name);
    for (i, f) in task.facts.iter().enumerate() {
        let _ = writeln!(out, "fact {i} {f}");
    }
    let fmt_set = |set: &FactSet| -> String {
        set.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let line = |key: &str, body: String| -> String {
        if body.is_empty() {
            format!("{key}\n")
        } else {
            format!("{key} {body}\n")
        }
    };
    out.push_str(&line("init", fmt_set(&task.init)));
    out.push_str(&line("goal", fmt_set(&task.goal)));
    for a in &task.actions {
        let _ = writeln!(out, "action {} {}", a.name, a.cost);
        out.push_str(&line("pre", fmt_set(&a.pre)));
        out.push_str(&line("add", fmt_set(&a.add)));
        out.push_str(&line("del", fmt_set(&a.del)));
        out.push_str("end\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::travel::{rendezvous_task, RendezvousConfig};

    const MINIMAL: &str = "\
task minimal
fact 0 done
init
goal 0
action finish 1
pre
add 0
del
end
";

    #[test]
    fn minimal_task_parses() {
        let task = parse_task(MINIMAL).unwrap();
        assert_eq!(task.name, "minimal");
        assert_eq!(task.facts, vec!["done"]);
        assert!(task.init.is_empty());
        assert_eq!(task.actions.len(), 1);
        assert_eq!(serialize_task(&task), MINIMAL);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = format!("# header\n\n{MINIMAL}# trailing\n");
        assert!(parse_task(&text).is_ok());
    }

    #[test]
    fn zero_cost_is_rejected_with_line_number() {
        let text = MINIMAL.replace("action finish 1", "action finish 0");
        let e = parse_task(&text).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.message.contains("cost"));
    }

    #[test]
    fn unknown_directive_is_rejected() {
        let e = parse_task("task t\nfrob 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("unknown directive"));
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        let e = parse_task("task t\nfact 0 a\ninit 3\ngoal 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("out of range"));
    }

    #[test]
    fn add_del_overlap_is_rejected() {
        let text = MINIMAL.replace("del\nend", "del 0\nend");
        let e = parse_task(&text).unwrap_err();
        assert!(e.message.contains("adds and deletes"));
    }

    #[test]
    fn rendezvous_round_trips() {
        let task = rendezvous_task(&RendezvousConfig::new(2, 1)).unwrap();
        let text = serialize_task(&task);
        let parsed = parse_task(&text).unwrap();
        assert_eq!(parsed, task);
        assert_eq!(serialize_task(&parsed), text);
    }
}
