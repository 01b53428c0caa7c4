//! Line-oriented text format.
//!
//! ```text
//! base 2
//! states 3
//! initial 0
//! state 0 output 1 -> 0 1
//! state 1 output 0 -> 2 2
//! state 2 output 1 -> 1 1
//! ```
//!
//! `#` starts a comment running to the end of the line. Blank lines are
//! ignored. State lines may appear in any order but each state exactly once.

use std::fmt::Write;

use super::Dfao;
use crate::exact::{format_rational, parse_rational, Rational};
use crate::{Error, ParseError, Result};

fn header<'a>(lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>, key: &str) -> Result<(usize, usize)> {
    let (no, tokens) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, format!("missing `{key}` line")))?;
    match tokens.as_slice() {
        [k, v] if *k == key => v
            .parse::<usize>()
            .map(|v| (no, v))
            .map_err(|_| ParseError::new(no, format!("`{key}` expects a nonnegative integer, got `{v}`")).into()),
        _ => Err(ParseError::new(no, format!("expected `{key} <n>`")).into()),
    }
}

pub fn parse_dfao(text: &str) -> Result<Dfao> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    });
    let (base_line, base) = header(&mut lines, "base")?;
    if !(2..=u32::MAX as usize).contains(&base) {
        return Err(ParseError::new(base_line, format!("base must be at least 2, got {base}")).into());
    }
    let (states_line, m) = header(&mut lines, "states")?;
    if m == 0 {
        return Err(ParseError::new(states_line, "at least one state is required").into());
    }
    let (init_line, initial) = header(&mut lines, "initial")?;
    if initial >= m {
        return Err(ParseError::new(init_line, format!("initial state {initial} is not below {m}")).into());
    }

    let mut transitions: Vec<Option<Vec<usize>>> = vec![None; m];
    let mut outputs: Vec<Rational> = vec![Rational::default(); m];
    for (no, tokens) in lines {
        let err = |msg: String| -> Error { ParseError::new(no, msg).into() };
        if tokens.len() < 5 || tokens[0] != "state" || tokens[2] != "output" || tokens[4] != "->" {
            return Err(err("expected `state <i> output <p>[/<q>] -> <t_0> ... <t_{k-1}>`".into()));
        }
        let q: usize = tokens[1]
            .parse()
            .map_err(|_| err(format!("bad state index `{}`", tokens[1])))?;
        if q >= m {
            return Err(err(format!("state {q} is not below {m}")));
        }
        if transitions[q].is_some() {
            return Err(err(format!("duplicate definition of state {q}")));
        }
        let out = parse_rational(tokens[3]).ok_or_else(|| err(format!("bad output `{}`", tokens[3])))?;
        if out < Rational::default() {
            return Err(err(format!("negative output {out}")));
        }
        let targets = &tokens[5..];
        if targets.len() != base {
            return Err(err(format!("state {q} lists {} targets, expected {base}", targets.len())));
        }
        let row = targets
            .iter()
            .map(|t| match t.parse::<usize>() {
                Ok(t) if t < m => Ok(t),
                Ok(t) => Err(err(format!("transition to undefined state {t}"))),
                Err(_) => Err(err(format!("bad target `{t}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        transitions[q] = Some(row);
        outputs[q] = out;
    }
    let transitions = transitions
        .into_iter()
        .enumerate()
        .map(|(q, row)| row.ok_or_else(|| Error::from(ParseError::new(0, format!("state {q} is never defined")))))
        .collect::<Result<Vec<_>>>()?;
    Dfao::new(base as u32, initial, transitions, outputs)
}

/// Canonical text: headers, then states in index order. `parse_dfao`
/// inverts it exactly.
pub fn serialize_dfao(d: &Dfao) -> String {
    let mut s = String::new();
    writeln!(s, "base {}", d.base()).unwrap();
    writeln!(s, "states {}", d.state_count()).unwrap();
    writeln!(s, "initial {}", d.initial()).unwrap();
    for q in 0..d.state_count() {
        write!(s, "state {q} output {} ->", format_rational(d.output(q))).unwrap();
        for t in &d.transitions()[q] {
            write!(s, " {t}").unwrap();
        }
        s.push('\n');
    }
    s
}
