//! Propositional satisfiability: CNF containers, a DPLL solver with
//! two-watched-literal propagation, an independent model verifier, a
//! Tseitin-style circuit builder, and DIMACS I/O.

mod dimacs;
mod solver;
mod tseitin;

use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Serialize};

pub use dimacs::{parse_dimacs, to_dimacs, DimacsError};
pub use solver::{solve, solve_with, Limits, SolveOutcome, SolveStats};
pub use tseitin::{tseitin, Circuit, TseitinError};

/// A literal in DIMACS convention: a non-zero signed variable index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lit(i32);

impl Lit {
    pub fn pos(var: u32) -> Lit {
        assert!(
            var > 0 && var <= i32::MAX as u32,
            "variable index out of range"
        );
        Lit(var as i32)
    }

    pub fn neg(var: u32) -> Lit {
        !Lit::pos(var)
    }

    pub fn new(var: u32, positive: bool) -> Lit {
        if positive {
            Lit::pos(var)
        } else {
            Lit::neg(var)
        }
    }

    pub fn from_dimacs(x: i32) -> Option<Lit> {
        (x != 0 && x != i32::MIN).then_some(Lit(x))
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Dense index: `2 * (var - 1) + negated`.
    pub(crate) fn index(self) -> usize {
        2 * (self.var() as usize - 1) + usize::from(self.0 < 0)
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A formula in conjunctive normal form over variables `1..=num_vars`.
///
/// Tautological clauses are dropped and duplicate literals merged on
/// insertion, so stored clauses never contain a literal and its negation.
/// An empty clause may be stored and makes the formula unsatisfiable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new() -> Cnf {
        Cnf::default()
    }

    pub fn with_vars(num_vars: u32) -> Cnf {
        Cnf {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn new_var(&mut self) -> u32 {
        self.num_vars += 1;
        self.num_vars
    }

    /// Adds a clause; returns `false` if it was a tautology and dropped.
    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit>) -> bool {
        let mut c: Vec<Lit> = lits.into_iter().collect();
        for l in &c {
            self.num_vars = self.num_vars.max(l.var());
        }
        c.sort_by_key(|l| (l.var(), !l.is_positive()));
        c.dedup();
        if c.windows(2).any(|w| w[0].var() == w[1].var()) {
            return false;
        }
        self.clauses.push(c);
        true
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Checks the structural invariants; used on imported formulas.
    pub fn validate(&self) -> Result<(), String> {
        for (i, c) in self.clauses.iter().enumerate() {
            for l in c {
                if l.var() > self.num_vars {
                    return Err(format!(
                        "clause {i} mentions variable {} > {}",
                        l.var(),
                        self.num_vars
                    ));
                }
                if c.contains(&!*l) {
                    return Err(format!("clause {i} contains {l} and its negation"));
                }
            }
        }
        Ok(())
    }
}

/// A truth assignment, total over `1..=num_vars`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn from_values(values: Vec<bool>) -> Assignment {
        Assignment { values }
    }

    /// Assignment over `num_vars` variables; bit `i` of `bits` gives variable `i + 1`.
    pub fn from_bits(num_vars: u32, bits: u64) -> Assignment {
        Assignment {
            values: (0..num_vars).map(|i| bits >> i & 1 == 1).collect(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn value(&self, var: u32) -> bool {
        self.values[var as usize - 1]
    }

    pub fn lit(&self, l: Lit) -> bool {
        self.value(l.var()) == l.is_positive()
    }

    pub fn true_vars(&self) -> Vec<u32> {
        (1..=self.num_vars()).filter(|&v| self.value(v)).collect()
    }
}

/// Independent clause-by-clause check of a claimed model. Returns the index
/// of the first falsified clause on failure.
pub fn verify(cnf: &Cnf, a: &Assignment) -> Result<(), usize> {
    if a.num_vars() < cnf.num_vars {
        return Err(0);
    }
    for (i, clause) in cnf.clauses.iter().enumerate() {
        if !clause.iter().any(|&l| a.lit(l)) {
            return Err(i);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_encoding() {
        let l = Lit::pos(3);
        assert_eq!((!l).to_dimacs(), -3);
        assert_eq!(l.index(), 4);
        assert_eq!((!l).index(), 5);
        assert_eq!(Lit::from_dimacs(0), None);
    }

    #[test]
    fn tautologies_are_dropped() {
        let mut c = Cnf::new();
        assert!(!c.add_clause([Lit::pos(1), Lit::neg(1)]));
        assert!(c.add_clause([Lit::pos(2), Lit::pos(2), Lit::neg(1)]));
        assert_eq!(c.clauses, vec![vec![Lit::neg(1), Lit::pos(2)]]);
        assert_eq!(c.num_vars, 2);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn verifier_rejects_bad_witness() {
        let mut c = Cnf::new();
        c.add_clause([Lit::pos(1)]);
        c.add_clause([Lit::neg(1), Lit::pos(2)]);
        assert_eq!(verify(&c, &Assignment::from_bits(2, 0b11)), Ok(()));
        assert_eq!(verify(&c, &Assignment::from_bits(2, 0b01)), Err(1));
    }
}
