//! Independent checks on PUR: direct evaluation, exhaustive search, and the
//! witness family of one assignment per Hamming weight.

use super::pur::pur;
use super::types::{HornFormula, Variable};
use crate::error::{param, Error, Result};

/// Largest `n` accepted by [`brute_force_sat`].
pub const BRUTE_FORCE_MAX_VARS: u32 = 24;

/// True iff `assignment` satisfies every clause.
pub fn evaluate(assignment: &[bool], formula: &HornFormula) -> Result<bool> {
    if assignment.len() != formula.n() as usize {
        return param(format!("assignment has length {}, formula has n={}", assignment.len(), formula.n()));
    }
    Ok(formula.clauses().iter().all(|c| c.is_satisfied(|v| assignment[v.slot()])))
}

/// Exhaustive satisfiability check over all `2^n` assignments.
pub fn brute_force_sat(formula: &HornFormula) -> Result<bool> {
    let n = formula.n();
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(Error::Capacity(format!("brute force limited to n <= {BRUTE_FORCE_MAX_VARS}, got {n}")));
    }
    // (positive mask, negative mask) per clause; a clause holds under `bits`
    // iff some positive variable is 1 or some negative variable is 0.
    let masks: Vec<(u32, u32)> = formula
        .clauses()
        .iter()
        .map(|c| {
            let pos = c.positive().map_or(0, |p| 1u32 << p.slot());
            let neg = c.negatives().fold(0u32, |m, v| m | 1 << v.slot());
            (pos, neg)
        })
        .collect();
    Ok((0u32..1 << n).any(|bits| masks.iter().all(|&(pos, neg)| bits & pos != 0 || !bits & neg != 0)))
}

/// The assignments `T_0, ..., T_n`, where `T_j` has Hamming weight `j`.
///
/// For `j` up to the length of PUR's trace, `T_j` sets the first `j` traced
/// variables. Beyond that, `T_j` sets the whole trace plus the lowest-indexed
/// variables outside it. The formula is satisfiable iff some `T_j` satisfies
/// it.
pub fn witness_assignments(formula: &HornFormula) -> Result<Vec<Vec<bool>>> {
    let n = formula.n() as usize;
    let trace = pur(formula)?.trace;
    let mut current = vec![false; n];
    let mut out = Vec::with_capacity(n + 1);
    out.push(current.clone());
    for v in &trace {
        current[v.slot()] = true;
        out.push(current.clone());
    }
    for slot in 0..n {
        if out.len() > n {
            break;
        }
        if !current[slot] {
            current[slot] = true;
            out.push(current.clone());
        }
    }
    debug_assert!(out.iter().enumerate().all(|(j, a)| a.iter().filter(|&&b| b).count() == j));
    Ok(out)
}

/// Hamming weight helper for assignment vectors.
pub fn weight(assignment: &[bool]) -> usize {
    assignment.iter().filter(|&&b| b).count()
}

/// Variables set to 1 in an assignment, ascending.
pub fn ones(assignment: &[bool]) -> Vec<Variable> {
    assignment.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| Variable::from_slot(i)).collect()
}
