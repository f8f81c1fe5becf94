//! Text format for Horn formulas.
//!
//! ```text
//! c optional comment lines
//! p horn <n> <k> <m>
//! 1 0
//! -1 2 0
//! -2 -3 0
//! ```
//!
//! One clause per line; positive integers are positive literals, negative
//! integers negated ones, and each clause ends with `0`.

use std::fmt::Write as _;

use super::types::{HornClause, HornFormula};
use crate::error::{Error, Result};

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

pub fn write_formula(formula: &HornFormula) -> String {
    let mut out = String::with_capacity(16 + formula.len() * 12);
    let _ = writeln!(out, "p horn {} {} {}", formula.n(), formula.k(), formula.len());
    for c in formula.clauses() {
        for l in c.literals() {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_formula(text: &str) -> Result<HornFormula> {
    let mut header: Option<(u32, u32, usize)> = None;
    let mut formula: Option<HornFormula> = None;
    let mut pending: Vec<i64> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return parse_err(line_no, "duplicate header");
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 5 || fields[1] != "horn" {
                return parse_err(line_no, "expected `p horn <n> <k> <m>`");
            }
            let num = |s: &str| s.parse::<u64>().or_else(|_| parse_err(line_no, format!("bad number `{s}`")));
            let (n, k, m) = (num(fields[2])?, num(fields[3])?, num(fields[4])?);
            let (n, k) = match (u32::try_from(n), u32::try_from(k)) {
                (Ok(n), Ok(k)) => (n, k),
                _ => return parse_err(line_no, "n or k too large"),
            };
            formula = Some(HornFormula::empty(n, k).or_else(|e| parse_err(line_no, e.to_string()))?);
            header = Some((n, k, m as usize));
            continue;
        }
        let Some(f) = formula.as_mut() else {
            return parse_err(line_no, "clause before header");
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().or_else(|_| parse_err(line_no, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                let clause = HornClause::from_literals(&pending).or_else(|e| parse_err(line_no, e.to_string()))?;
                f.push(clause).or_else(|e| parse_err(line_no, e.to_string()))?;
                pending.clear();
            } else {
                pending.push(lit);
            }
        }
    }
    if !pending.is_empty() {
        return parse_err(last_line, "clause not terminated by 0");
    }
    let (Some((_, _, m)), Some(f)) = (header, formula) else {
        return parse_err(last_line, "missing header");
    };
    if f.len() != m {
        return parse_err(last_line, format!("header declares {m} clauses, found {}", f.len()));
    }
    Ok(f)
}
