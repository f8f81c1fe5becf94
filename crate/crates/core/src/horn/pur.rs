//! Positive unit resolution.
//!
//! PUR repeatedly takes a positive unit clause `x`, rejects if `~x` is also a
//! clause, and otherwise sets `x = 1` (deleting clauses that contain `x` and
//! removing `~x` from the rest). It accepts once no positive unit clause is
//! left; the all-zero completion of the assignments made is then a model.
//!
//! Among several positive unit clauses the one with the lowest index in the
//! original clause order is chosen.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::types::{HornFormula, Variable};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PurStatus {
    Sat,
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurOutcome {
    pub status: PurStatus,
    /// Number of variables set to 1.
    pub iterations: usize,
    /// The variables set to 1, in order.
    pub trace: Vec<Variable>,
    /// For satisfiable formulas: trace variables 1, all others 0.
    pub witness: Option<Vec<bool>>,
}

impl PurOutcome {
    pub fn is_sat(&self) -> bool {
        self.status == PurStatus::Sat
    }

    /// PUR invocations, i.e. assignments plus the final accepting or
    /// rejecting check. This is the runtime measure the limit law for the
    /// expected number of iterations refers to.
    pub fn stages(&self) -> usize {
        self.iterations + 1
    }
}

/// Live clause counts at one stage, by residual length and polarity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    /// Number of unassigned variables.
    pub t: u32,
    /// positive[i] = live positive clauses with `i` remaining literals.
    pub positive: Vec<u64>,
    /// negative[i] = live negative clauses with `i` remaining literals.
    pub negative: Vec<u64>,
}

impl StageCounts {
    pub fn p1(&self) -> u64 {
        self.positive.get(1).copied().unwrap_or(0)
    }
    pub fn n1(&self) -> u64 {
        self.negative.get(1).copied().unwrap_or(0)
    }
    pub fn p2(&self) -> u64 {
        self.positive.get(2).copied().unwrap_or(0)
    }
    pub fn n2(&self) -> u64 {
        self.negative.get(2).copied().unwrap_or(0)
    }
}

/// PUR outcome together with per-stage clause counts.
#[derive(Clone, Debug)]
pub struct PurProfile {
    pub outcome: PurOutcome,
    /// stages[j] is the state after `j` assignments (`t = n - j`).
    pub stages: Vec<StageCounts>,
}

struct Engine<'a> {
    formula: &'a HornFormula,
    occ_start: Vec<u32>,
    occ: Vec<u32>,
    remaining: Vec<u32>,
    live: Vec<bool>,
    assigned: Vec<bool>,
    units: BinaryHeap<Reverse<u32>>,
    neg_units: Vec<u32>,
    counts: Option<(Vec<u64>, Vec<u64>)>,
    pos_hits: Vec<u32>,
    neg_hits: Vec<u32>,
}

const NEG_TAG: u32 = 1 << 31;

/// Per-variable occurrence lists in one array; negated occurrences carry
/// `NEG_TAG`.
fn occurrence_index(formula: &HornFormula) -> (Vec<u32>, Vec<u32>) {
    let n = formula.n() as usize;
    let mut start = vec![0u32; n + 2];
    for c in formula.clauses() {
        for v in c.vars() {
            start[v.slot() + 2] += 1;
        }
    }
    for i in 2..n + 2 {
        start[i] += start[i - 1];
    }
    let mut occ = vec![0u32; start[n + 1] as usize];
    for (ci, c) in formula.clauses().iter().enumerate() {
        let p = c.positive();
        for &v in c.vars() {
            let slot = &mut start[v.slot() + 1];
            occ[*slot as usize] = ci as u32 | if Some(v) == p { 0 } else { NEG_TAG };
            *slot += 1;
        }
    }
    start.pop();
    (start, occ)
}

impl<'a> Engine<'a> {
    fn new(formula: &'a HornFormula, track_counts: bool) -> Result<Self> {
        if formula.len() >= NEG_TAG as usize {
            return Err(Error::Capacity(format!("PUR supports fewer than 2^31 clauses, got {}", formula.len())));
        }
        let n = formula.n() as usize;
        let clauses = formula.clauses();
        let (occ_start, occ) = occurrence_index(formula);

        let mut remaining = Vec::with_capacity(clauses.len());
        let mut units = Vec::new();
        let mut neg_units = vec![0u32; n];
        let mut counts = track_counts.then(|| (vec![0u64; formula.k() as usize + 1], vec![0u64; formula.k() as usize + 1]));
        for (ci, c) in clauses.iter().enumerate() {
            let r = (c.len() - c.is_positive() as usize) as u32;
            remaining.push(r);
            if c.is_positive() {
                if r == 0 {
                    units.push(Reverse(ci as u32));
                }
            } else if r == 1 {
                neg_units[c.vars()[0].slot()] += 1;
            }
            if let Some((pos, neg)) = counts.as_mut() {
                if c.is_positive() {
                    pos[c.len()] += 1;
                } else {
                    neg[c.len()] += 1;
                }
            }
        }
        Ok(Engine {
            formula,
            occ_start,
            occ,
            remaining,
            live: vec![true; clauses.len()],
            assigned: vec![false; n],
            units: BinaryHeap::from(units),
            neg_units,
            counts,
            pos_hits: Vec::new(),
            neg_hits: Vec::new(),
        })
    }

    /// Fills `pos_hits` / `neg_hits` with the live clauses containing `x` /
    /// `~x`, in clause order.
    fn lookup(&mut self, x: Variable) {
        self.pos_hits.clear();
        self.neg_hits.clear();
        let s = x.slot();
        for &tagged in &self.occ[self.occ_start[s] as usize..self.occ_start[s + 1] as usize] {
            let ci = tagged & !NEG_TAG;
            if !self.live[ci as usize] {
                continue;
            }
            if tagged & NEG_TAG == 0 {
                self.pos_hits.push(ci);
            } else {
                self.neg_hits.push(ci);
            }
        }
    }

    /// Lowest-index live positive unit clause and its variable.
    fn next_unit(&mut self) -> Option<Variable> {
        while let Some(&Reverse(ci)) = self.units.peek() {
            if self.live[ci as usize] {
                return self.formula.clauses()[ci as usize].positive();
            }
            self.units.pop();
        }
        None
    }

    fn shift_count(&mut self, positive: bool, from: usize, to: Option<usize>) {
        if let Some((pos, neg)) = self.counts.as_mut() {
            let table = if positive { pos } else { neg };
            table[from] -= 1;
            if let Some(to) = to {
                table[to] += 1;
            }
        }
    }

    /// Sets `x = 1`. Emptied negative clauses are only legal when
    /// `allow_empty` (the extended run past a verdict).
    fn assign(&mut self, x: Variable, allow_empty: bool) -> Result<()> {
        let s = x.slot();
        debug_assert!(!self.assigned[s]);
        self.assigned[s] = true;
        self.lookup(x);
        let pos_hits = std::mem::take(&mut self.pos_hits);
        let neg_hits = std::mem::take(&mut self.neg_hits);
        for &ci in &pos_hits {
            let ci = ci as usize;
            self.live[ci] = false;
            let len = self.remaining[ci] as usize + 1;
            self.shift_count(true, len, None);
        }
        for &ci in &neg_hits {
            let ci = ci as usize;
            let old = self.remaining[ci];
            self.remaining[ci] = old - 1;
            let clause = &self.formula.clauses()[ci];
            if clause.is_positive() {
                self.shift_count(true, old as usize + 1, Some(old as usize));
                if old == 1 {
                    self.units.push(Reverse(ci as u32));
                }
                continue;
            }
            match old {
                1 => {
                    if !allow_empty {
                        return Err(Error::Invariant(format!("clause {ci} emptied by setting {x}")));
                    }
                    self.neg_units[s] -= 1;
                    self.live[ci] = false;
                    self.shift_count(false, 1, None);
                }
                2 => {
                    let last = clause
                        .vars()
                        .iter()
                        .find(|v| !self.assigned[v.slot()])
                        .ok_or_else(|| Error::Invariant(format!("clause {ci} lost track of its literals")))?;
                    self.neg_units[last.slot()] += 1;
                    self.shift_count(false, 2, Some(1));
                }
                _ => self.shift_count(false, old as usize, Some(old as usize - 1)),
            }
        }
        self.pos_hits = pos_hits;
        self.neg_hits = neg_hits;
        Ok(())
    }

    fn snapshot(&self, t: u32) -> Option<StageCounts> {
        self.counts.as_ref().map(|(pos, neg)| StageCounts { t, positive: pos.clone(), negative: neg.clone() })
    }

    /// Runs PUR to its verdict.
    fn run(&mut self, mut on_stage: impl FnMut(&Self, u32)) -> Result<PurOutcome> {
        let n = self.formula.n();
        let mut trace = Vec::new();
        on_stage(self, n);
        loop {
            let Some(x) = self.next_unit() else {
                let mut witness = vec![false; n as usize];
                for v in &trace {
                    witness[Variable::slot(*v)] = true;
                }
                return Ok(PurOutcome { status: PurStatus::Sat, iterations: trace.len(), trace, witness: Some(witness) });
            };
            if self.neg_units[x.slot()] > 0 {
                return Ok(PurOutcome { status: PurStatus::Unsat, iterations: trace.len(), trace, witness: None });
            }
            self.assign(x, false)?;
            trace.push(x);
            on_stage(self, n - trace.len() as u32);
        }
    }
}

/// Decides satisfiability of a Horn formula by positive unit resolution.
pub fn pur(formula: &HornFormula) -> Result<PurOutcome> {
    Engine::new(formula, false)?.run(|_, _| {})
}

/// Runs PUR recording clause counts at every stage it reaches.
///
/// With `extend_to = Some(s)` the run continues past the verdict until `s`
/// assignments have been made (or every variable is set): the lowest-index
/// positive unit is still preferred, and when none exists the lowest-index
/// unassigned variable is set instead. Negative unit clauses emptied this way
/// are dropped. This mirrors the state chain, which is defined for all stages.
pub fn pur_profile(formula: &HornFormula, extend_to: Option<usize>) -> Result<PurProfile> {
    let mut engine = Engine::new(formula, true)?;
    let mut stages = Vec::new();
    let outcome = engine.run(|e, t| stages.extend(e.snapshot(t)))?;

    if let Some(target) = extend_to {
        let n = formula.n() as usize;
        let mut made = outcome.trace.len();
        let mut cursor = 0usize;
        while made < target.min(n) {
            let x = match engine.next_unit() {
                Some(x) => x,
                None => {
                    while engine.assigned[cursor] {
                        cursor += 1;
                    }
                    Variable::from_slot(cursor)
                }
            };
            engine.assign(x, true)?;
            made += 1;
            stages.extend(engine.snapshot((n - made) as u32));
        }
    }
    Ok(PurProfile { outcome, stages })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horn::HornClause;

    fn formula(n: u32, clauses: &[&[i64]]) -> HornFormula {
        let k = clauses.iter().map(|c| c.len() as u32).max().unwrap_or(1).max(1);
        HornFormula::new(n, k.min(n), clauses.iter().map(|c| HornClause::from_literals(c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn single_positive_unit() {
        let o = pur(&formula(1, &[&[1]])).unwrap();
        assert_eq!(o.status, PurStatus::Sat);
        assert_eq!(o.iterations, 1);
        assert_eq!(o.witness, Some(vec![true]));
    }

    #[test]
    fn complementary_units() {
        let o = pur(&formula(1, &[&[1], &[-1]])).unwrap();
        assert_eq!(o.status, PurStatus::Unsat);
        assert_eq!(o.iterations, 0);
        assert!(o.witness.is_none());
    }

    #[test]
    fn conflict_after_one_step() {
        let o = pur(&formula(2, &[&[1], &[-1, 2], &[-2, -1]])).unwrap();
        assert_eq!(o.status, PurStatus::Unsat);
        assert_eq!(o.iterations, 1);
        assert_eq!(o.trace, vec![Variable::new(1).unwrap()]);
    }

    #[test]
    fn empty_formula_accepts_immediately() {
        let f = HornFormula::empty(3, 2).unwrap();
        let o = pur(&f).unwrap();
        assert_eq!(o.status, PurStatus::Sat);
        assert_eq!(o.iterations, 0);
        assert_eq!(o.stages(), 1);
        assert_eq!(o.witness, Some(vec![false; 3]));
    }

    #[test]
    fn tie_break_uses_clause_order() {
        let o = pur(&formula(3, &[&[3], &[2], &[-3, -2]])).unwrap();
        assert_eq!(o.trace, vec![Variable::new(3).unwrap()]);
        assert_eq!(o.status, PurStatus::Unsat);
        let o = pur(&formula(3, &[&[2], &[3], &[-3, -1]])).unwrap();
        assert_eq!(o.trace.iter().map(|v| v.index()).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(o.status, PurStatus::Sat);
    }

    #[test]
    fn chain_of_implications() {
        // x1, x1 -> x2, x2 -> x3, (x1 & x3) -> x4
        let o = pur(&formula(5, &[&[1], &[-1, 2], &[-2, 3], &[-1, -3, 4], &[-5]])).unwrap();
        assert!(o.is_sat());
        assert_eq!(o.iterations, 4);
        assert_eq!(o.witness.unwrap(), vec![true, true, true, true, false]);
    }

    #[test]
    fn profile_counts_track_stages() {
        let f = formula(3, &[&[1], &[-1, 2], &[-2, -3], &[-1, -3]]);
        let p = pur_profile(&f, None).unwrap();
        assert_eq!(p.stages.len(), 3);
        let s0 = &p.stages[0];
        assert_eq!((s0.t, s0.p1(), s0.n1(), s0.p2(), s0.n2()), (3, 1, 0, 1, 2));
        let s1 = &p.stages[1];
        assert_eq!((s1.t, s1.p1(), s1.n1(), s1.p2(), s1.n2()), (2, 1, 1, 0, 1));
        let s2 = &p.stages[2];
        assert_eq!((s2.t, s2.p1(), s2.n1(), s2.p2(), s2.n2()), (1, 0, 2, 0, 0));
        assert!(p.outcome.is_sat());
    }

    #[test]
    fn extended_profile_runs_past_verdict() {
        let f = formula(4, &[&[1], &[-1], &[-2, 3]]);
        let p = pur_profile(&f, Some(4)).unwrap();
        assert_eq!(p.outcome.status, PurStatus::Unsat);
        assert_eq!(p.stages.len(), 5);
        assert_eq!(p.stages.last().unwrap().t, 0);
        // after x1 (forced) and x2 (lowest free), x3 becomes a positive unit
        assert_eq!(p.stages[2].p1(), 1);
        assert_eq!(p.stages[4].positive.iter().sum::<u64>() + p.stages[4].negative.iter().sum::<u64>(), 0);
    }
}
