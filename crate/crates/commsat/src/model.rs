//! Core formula types: literals, clauses, formulas, assignments.
//!
//! Variables are 1-based (`1..=n`), matching DIMACS. A clause is a
//! disjunction of literals; the generator always emits clauses of exactly
//! three distinct variables, but the types here accept general widths so the
//! solvers and the DIMACS reader can handle hand-written inputs too.

use crate::{Error, Result};
use rand::Rng;
use std::fmt;

/// A possibly negated variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: u32,
    positive: bool,
}

impl Literal {
    /// Panics if `var == 0`; variables are 1-based.
    pub fn new(var: u32, positive: bool) -> Self {
        assert!(var >= 1, "variables are 1-based");
        Literal { var, positive }
    }

    pub fn positive(var: u32) -> Self {
        Literal::new(var, true)
    }

    pub fn negative(var: u32) -> Self {
        Literal::new(var, false)
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Self {
        Literal { var: self.var, positive: !self.positive }
    }

    /// DIMACS integer form: `3` for x3, `-3` for ¬x3.
    pub fn to_dimacs(self) -> i32 {
        let v = self.var as i32;
        if self.positive {
            v
        } else {
            -v
        }
    }

    /// Inverse of [`to_dimacs`](Self::to_dimacs); `0` is not a literal.
    pub fn from_dimacs(code: i32) -> Option<Self> {
        if code == 0 {
            return None;
        }
        Some(Literal { var: code.unsigned_abs(), positive: code > 0 })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    /// General constructor; any width, duplicates allowed. Used by the
    /// DIMACS reader and by solver tests that need unit or binary clauses.
    pub fn new(lits: Vec<Literal>) -> Self {
        Clause { lits }
    }

    /// Checked constructor for generated clauses: exactly three literals over
    /// distinct variables.
    pub fn three(lits: [Literal; 3]) -> Result<Self> {
        let [a, b, c] = lits;
        if a.var() == b.var() || a.var() == c.var() || b.var() == c.var() {
            return Err(Error::InvalidParameters(format!(
                "clause variables must be distinct, got ({}, {}, {})",
                a, b, c
            )));
        }
        Ok(Clause { lits: lits.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Literal> {
        self.lits.iter()
    }

    /// True when the clause has exactly three distinct variables.
    pub fn is_three_distinct(&self) -> bool {
        if self.lits.len() != 3 {
            return false;
        }
        let (a, b, c) = (self.lits[0].var(), self.lits[1].var(), self.lits[2].var());
        a != b && a != c && b != c
    }

    /// Order-independent key, used to detect duplicate clauses.
    pub fn normalized_key(&self) -> Vec<i32> {
        let mut key: Vec<i32> = self.lits.iter().map(|l| l.to_dimacs()).collect();
        key.sort_unstable_by_key(|&code| (code.unsigned_abs(), code > 0));
        key
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, lit) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", lit)?;
        }
        write!(f, ")")
    }
}

/// A CNF formula over variables `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl Formula {
    /// Fails if any literal mentions a variable above `num_vars`.
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        for clause in &clauses {
            for lit in clause.iter() {
                if lit.var() as usize > num_vars {
                    return Err(Error::VariableOutOfRange {
                        var: lit.var() as i64,
                        n: num_vars,
                    });
                }
            }
        }
        Ok(Formula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of clauses that repeat an earlier clause up to literal order.
    pub fn duplicate_clause_count(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        self.clauses.iter().filter(|cl| !seen.insert(cl.normalized_key())).count()
    }
}

/// A total truth assignment for variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    /// `values[i]` is the value of variable `i + 1`.
    pub fn from_values(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn all_true(n: usize) -> Self {
        Assignment { values: vec![true; n] }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Assignment { values: (0..n).map(|_| rng.random()).collect() }
    }

    /// Number of variables covered.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, var: u32) -> Result<bool> {
        if var == 0 || var as usize > self.values.len() {
            return Err(Error::VariableOutOfRange { var: var as i64, n: self.values.len() });
        }
        Ok(self.values[var as usize - 1])
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// The complementary assignment (every variable flipped).
    pub fn flipped(&self) -> Self {
        Assignment { values: self.values.iter().map(|v| !v).collect() }
    }

    /// True iff the literal agrees with this assignment.
    pub fn satisfies(&self, lit: Literal) -> Result<bool> {
        Ok(self.get(lit.var())? == lit.is_positive())
    }
}

/// Result of evaluating a formula under a total assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    Satisfied,
    /// Index of the first clause with no true literal.
    Falsified { clause_index: usize },
}

/// Number of literals of `clause` that agree with `a`.
///
/// For generated three-literal clauses this is the clause type in
/// `{0, 1, 2, 3}` relative to the planted solution; type 0 never occurs in
/// generated instances.
pub fn clause_type(clause: &Clause, a: &Assignment) -> Result<usize> {
    let mut count = 0;
    for &lit in clause.iter() {
        if a.satisfies(lit)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Evaluates `f` under `a`, reporting the first falsified clause if any.
pub fn evaluate(f: &Formula, a: &Assignment) -> Result<Evaluation> {
    if a.len() != f.num_vars() {
        return Err(Error::InvalidParameters(format!(
            "assignment covers {} variables, formula has {}",
            a.len(),
            f.num_vars()
        )));
    }
    for (i, clause) in f.clauses().iter().enumerate() {
        if clause_type(clause, a)? == 0 {
            return Ok(Evaluation::Falsified { clause_index: i });
        }
    }
    Ok(Evaluation::Satisfied)
}
