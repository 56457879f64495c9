//! Network definition files.
//!
//! ```text
//! # comment
//! states 2
//! controls 2
//! x1' = (x2 | (u1 & d(g)/d(u2)))
//! x2' = (x1 & (u2 | d(g)/d(u1)))
//! u1' = !u2
//! u2' = u1
//! g = (u1 & u2)
//! ```
//!
//! `states`/`controls` headers are optional; without them the counts are
//! taken from the rules present. `g` defaults to `0` and may then not be
//! differentiated.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::NetworkSpec;
use crate::boolfun::{parse_expr_at, BoolExpr, Var};
use crate::error::{Error, Result};

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Target {
    State(usize),
    Control(usize),
    Source,
}

fn parse_target(lhs: &str, line: usize, column: usize) -> Result<Target> {
    let index = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(i) if i > 0 => Ok(i),
            _ => Err(err(line, column, format!("invalid rule target '{lhs}'"))),
        }
    };
    if lhs == "g" {
        return Ok(Target::Source);
    }
    let body = lhs.strip_suffix('\'').ok_or_else(|| {
        err(
            line,
            column,
            format!("rule target '{lhs}' must be primed, e.g. x1'"),
        )
    })?;
    if let Some(i) = body.strip_prefix('x') {
        Ok(Target::State(index(i)?))
    } else if let Some(j) = body.strip_prefix('u') {
        Ok(Target::Control(index(j)?))
    } else {
        Err(err(line, column, format!("invalid rule target '{lhs}'")))
    }
}

/// Parses a network definition. Errors carry 1-based line and column.
pub fn parse_network_file(text: &str) -> Result<NetworkSpec> {
    let mut states: Option<(usize, usize)> = None;
    let mut controls: Option<(usize, usize)> = None;
    let mut rules: BTreeMap<Target, (BoolExpr, usize)> = BTreeMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let content = content.trim_start();
        let col0 = raw[..indent].chars().count() + 1;

        if let Some((lhs, rhs)) = content.split_once('=') {
            let lhs_t = lhs.trim();
            let target = parse_target(lhs_t, line, col0)?;
            let rhs_col = col0 + lhs.chars().count() + 1;
            let expr = parse_expr_at(rhs, line, rhs_col)?;
            if rules.insert(target, (expr, line)).is_some() {
                return Err(err(line, col0, format!("duplicate rule for '{lhs_t}'")));
            }
            continue;
        }

        let mut words = content.split_whitespace();
        let key = words.next().unwrap_or("");
        let value = words.next();
        if words.next().is_some() {
            return Err(err(line, col0, "trailing input after header"));
        }
        let slot = match key {
            "states" => &mut states,
            "controls" => &mut controls,
            other => return Err(err(line, col0, format!("unknown directive '{other}'"))),
        };
        let count = value
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| err(line, col0, format!("'{key}' needs a non-negative count")))?;
        if slot.replace((count, line)).is_some() {
            return Err(err(line, col0, format!("duplicate '{key}' header")));
        }
    }

    let count_of = |pick: fn(&Target) -> Option<usize>| rules.keys().filter_map(pick).count();
    let n = states.map_or_else(
        || count_of(|t| matches!(t, Target::State(_)).then_some(0)),
        |(n, _)| n,
    );
    let m = controls.map_or_else(
        || count_of(|t| matches!(t, Target::Control(_)).then_some(0)),
        |(m, _)| m,
    );
    let header_line = |h: Option<(usize, usize)>| h.map_or(1, |(_, l)| l);

    for (target, (_, line)) in &rules {
        match *target {
            Target::State(i) if i > n => {
                return Err(err(
                    *line,
                    1,
                    format!("rule for x{i} but only {n} states declared"),
                ))
            }
            Target::Control(j) if j > m => {
                return Err(err(
                    *line,
                    1,
                    format!("rule for u{j} but only {m} controls declared"),
                ))
            }
            _ => {}
        }
    }

    let take = |t: Target, what: String, header: Option<(usize, usize)>| {
        rules
            .get(&t)
            .map(|(e, _)| e.clone())
            .ok_or_else(|| err(header_line(header), 1, format!("missing rule for {what}")))
    };
    let f = (1..=n)
        .map(|i| take(Target::State(i), format!("x{i}'"), states))
        .collect::<Result<Vec<_>>>()?;
    let g_update = (1..=m)
        .map(|j| take(Target::Control(j), format!("u{j}'"), controls))
        .collect::<Result<Vec<_>>>()?;
    let (g, g_line) = rules
        .get(&Target::Source)
        .map_or((BoolExpr::Const(false), 0), |(e, l)| (e.clone(), *l));

    NetworkSpec::new(f, g_update, g).map_err(|e| {
        // Attribute the failure to the offending rule where possible.
        let line = locate(&rules, &e).unwrap_or(if g_line > 0 { g_line } else { 1 });
        match e {
            Error::Network(message) => err(line, 1, message),
            other => other,
        }
    })
}

fn locate(rules: &BTreeMap<Target, (BoolExpr, usize)>, e: &Error) -> Option<usize> {
    let Error::Network(msg) = e else { return None };
    rules.iter().find_map(|(t, (_, line))| {
        let tag = match t {
            Target::State(i) => format!("rule for x{i} "),
            Target::Control(j) => format!("rule for u{j} "),
            Target::Source => "derivative source g ".to_string(),
        };
        msg.starts_with(&tag).then_some(*line)
    })
}

/// Pretty-prints a spec in the file format; parsing the output yields an equal spec.
pub fn format_network(spec: &NetworkSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "states {}", spec.n());
    let _ = writeln!(out, "controls {}", spec.m());
    for (i, f) in spec.state_rules().iter().enumerate() {
        let _ = writeln!(out, "{}' = {f}", Var::State(i + 1));
    }
    for (j, g) in spec.control_rules().iter().enumerate() {
        let _ = writeln!(out, "{}' = {g}", Var::Control(j + 1));
    }
    let _ = writeln!(out, "g = {}", spec.derivative_source());
    out
}
