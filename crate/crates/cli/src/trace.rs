//! Exchange lines of the form `t: (i,j) g_a<->g_b`, with 1-based agents and
//! rounds and 0-based goods.

use std::path::Path;

use ef1reform::{ExchangeStep, ExchangeTrace};

use crate::error::{CliError, Result};

pub fn format_step(t: usize, step: &ExchangeStep) -> String {
    format!(
        "{t}: ({},{}) g{}<->g{}",
        step.agent_a + 1,
        step.agent_b + 1,
        step.good_a,
        step.good_b
    )
}

pub fn format_trace(trace: &[ExchangeStep]) -> Vec<String> {
    trace
        .iter()
        .enumerate()
        .map(|(k, s)| format_step(k + 1, s))
        .collect()
}

fn parse_line(line: &str) -> Option<(usize, ExchangeStep)> {
    let (t, rest) = line.split_once(": (")?;
    let (agents, goods) = rest.split_once(") g")?;
    let (a, b) = agents.split_once(',')?;
    let (ga, gb) = goods.split_once("<->g")?;
    let num = |s: &str| -> Option<usize> {
        (!s.is_empty() && s.bytes().all(|c| c.is_ascii_digit()))
            .then(|| s.parse().ok())
            .flatten()
    };
    let (a, b) = (num(a)?, num(b)?);
    if a == 0 || b == 0 {
        return None;
    }
    Some((num(t)?, ExchangeStep::new(a - 1, b - 1, num(ga)?, num(gb)?)))
}

/// Collects the exchange lines of a report, ignoring every other line. The
/// rounds must count up from 1.
pub fn parse_trace(path: &Path, text: &str) -> Result<ExchangeTrace> {
    let mut trace = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let Some((t, step)) = parse_line(line.trim_end()) else {
            continue;
        };
        if t != trace.len() + 1 {
            return Err(CliError::Trace {
                path: path.to_path_buf(),
                line: k + 1,
                msg: format!("expected exchange {}, found {t}", trace.len() + 1),
            });
        }
        trace.push(step);
    }
    Ok(trace)
}
