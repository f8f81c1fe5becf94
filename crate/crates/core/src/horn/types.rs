use std::fmt;

use smallvec::SmallVec;

use crate::error::{param, Result};

/// A propositional variable, numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(u32);

impl Variable {
    pub fn new(index: u32) -> Result<Self> {
        if index == 0 {
            return param("variables are numbered from 1");
        }
        Ok(Variable(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// Zero-based position, for indexing assignment vectors.
    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }

    pub(crate) fn from_slot(slot: usize) -> Self {
        Variable(slot as u32 + 1)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

pub(crate) type VarList = SmallVec<[Variable; 4]>;

/// A Horn clause: a nonempty set of distinct variables, at most one of which
/// occurs positively. The rest occur negated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HornClause {
    vars: VarList,
    positive: Option<Variable>,
}

impl HornClause {
    pub fn new(vars: impl IntoIterator<Item = Variable>, positive: Option<Variable>) -> Result<Self> {
        let mut vars: VarList = vars.into_iter().collect();
        vars.sort_unstable();
        Self::from_sorted(vars, positive)
    }

    pub(crate) fn from_sorted(vars: VarList, positive: Option<Variable>) -> Result<Self> {
        if vars.is_empty() {
            return param("empty clause");
        }
        if vars.windows(2).any(|w| w[0] == w[1]) {
            return param("repeated variable in clause");
        }
        if let Some(p) = positive {
            if vars.binary_search(&p).is_err() {
                return param(format!("positive literal {p} is not among the clause variables"));
            }
        }
        Ok(HornClause { vars, positive })
    }

    pub(crate) fn from_sorted_unchecked(vars: VarList, positive: Option<Variable>) -> Self {
        debug_assert!(Self::from_sorted(vars.clone(), positive).is_ok());
        HornClause { vars, positive }
    }

    /// Builds a clause from signed literals (`3` is `x3`, `-3` is `not x3`).
    pub fn from_literals(lits: &[i64]) -> Result<Self> {
        let mut positive = None;
        let mut vars = VarList::new();
        for &l in lits {
            let v = Variable::new(u32::try_from(l.unsigned_abs()).or_else(|_| param("literal out of range"))?)?;
            if l > 0 {
                if positive.is_some() {
                    return param("more than one positive literal");
                }
                positive = Some(v);
            }
            vars.push(v);
        }
        Self::new(vars, positive)
    }

    pub fn positive_unit(v: Variable) -> Self {
        HornClause { vars: smallvec::smallvec![v], positive: Some(v) }
    }

    pub fn negative_unit(v: Variable) -> Self {
        HornClause { vars: smallvec::smallvec![v], positive: None }
    }

    /// All variables, ascending.
    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn positive(&self) -> Option<Variable> {
        self.positive
    }

    pub fn is_positive(&self) -> bool {
        self.positive.is_some()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn negatives(&self) -> impl Iterator<Item = Variable> + '_ {
        let p = self.positive;
        self.vars.iter().copied().filter(move |&v| Some(v) != p)
    }

    /// Signed literals in ascending variable order.
    pub fn literals(&self) -> impl Iterator<Item = i64> + '_ {
        self.vars.iter().map(move |&v| {
            if Some(v) == self.positive {
                v.0 as i64
            } else {
                -(v.0 as i64)
            }
        })
    }

    /// True iff some literal is true under `value`.
    pub fn is_satisfied(&self, value: impl Fn(Variable) -> bool) -> bool {
        self.vars.iter().any(|&v| value(v) == (Some(v) == self.positive))
    }
}

impl fmt::Display for HornClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in self.literals() {
            if !first {
                write!(f, " | ")?;
            }
            first = false;
            if l < 0 {
                write!(f, "~x{}", -l)?;
            } else {
                write!(f, "x{l}")?;
            }
        }
        Ok(())
    }
}

/// An ordered multiset of Horn clauses over `n` variables, each of length at
/// most `k`. Clause order is significant: it drives tie-breaking in PUR.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornFormula {
    n: u32,
    k: u32,
    clauses: Vec<HornClause>,
}

impl HornFormula {
    pub fn empty(n: u32, k: u32) -> Result<Self> {
        if n == 0 {
            return param("formula needs at least one variable");
        }
        if k == 0 || k > n {
            return param(format!("need 1 <= k <= n, got k={k}, n={n}"));
        }
        Ok(HornFormula { n, k, clauses: Vec::new() })
    }

    pub fn new(n: u32, k: u32, clauses: Vec<HornClause>) -> Result<Self> {
        let mut f = Self::empty(n, k)?;
        f.clauses.reserve(clauses.len());
        for c in clauses {
            f.push(c)?;
        }
        Ok(f)
    }

    pub(crate) fn from_trusted(n: u32, k: u32, clauses: Vec<HornClause>) -> Self {
        debug_assert!(clauses.iter().all(|c| c.len() <= k as usize && c.vars().last().unwrap().0 <= n));
        HornFormula { n, k, clauses }
    }

    pub fn push(&mut self, clause: HornClause) -> Result<()> {
        if clause.len() > self.k as usize {
            return param(format!("clause of length {} exceeds k={}", clause.len(), self.k));
        }
        if clause.vars().last().is_some_and(|v| v.0 > self.n) {
            return param(format!("clause {clause} mentions a variable above n={}", self.n));
        }
        self.clauses.push(clause);
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn clauses(&self) -> &[HornClause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Variable {
        Variable::new(i).unwrap()
    }

    #[test]
    fn clause_validation() {
        assert!(HornClause::new([], None).is_err());
        assert!(HornClause::new([v(1), v(1)], None).is_err());
        assert!(HornClause::new([v(1), v(2)], Some(v(3))).is_err());
        assert!(HornClause::from_literals(&[1, 2]).is_err());
        assert!(HornClause::from_literals(&[0]).is_err());
        let c = HornClause::from_literals(&[-3, 1]).unwrap();
        assert_eq!(c.literals().collect::<Vec<_>>(), vec![1, -3]);
        assert_eq!(c.negatives().collect::<Vec<_>>(), vec![v(3)]);
    }

    #[test]
    fn formula_validation() {
        assert!(HornFormula::empty(0, 1).is_err());
        assert!(HornFormula::empty(2, 3).is_err());
        let mut f = HornFormula::empty(2, 1).unwrap();
        assert!(f.push(HornClause::from_literals(&[1, -2]).unwrap()).is_err());
        assert!(f.push(HornClause::from_literals(&[3]).unwrap()).is_err());
        assert!(f.push(HornClause::from_literals(&[-2]).unwrap()).is_ok());
    }

    #[test]
    fn clause_satisfaction() {
        let c = HornClause::from_literals(&[1, -2]).unwrap();
        assert!(c.is_satisfied(|x| x == v(1)));
        assert!(!c.is_satisfied(|x| x == v(2)));
        assert!(c.is_satisfied(|_| false));
    }
}
