use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{fmt_set, truth_set, valuation_set, write_valuation, EvalError, WorldFrame};
use crate::formula::{Formula, NodeKind};

/// A Carmo–Jones model. World sets are bit masks (bit `w` = world `w`).
///
/// * `av[w]`: actual versions of `w` (what is fixed given the agent's
///   situation);
/// * `pv[w]`: potential versions of `w`;
/// * `ob`: pairs `(X, Y)` with `Y ∈ ob(X)`: in context `X`, `Y` is
///   obligatory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CjModel {
    pub worlds: usize,
    pub av: Vec<u32>,
    pub pv: Vec<u32>,
    pub ob: BTreeSet<(u32, u32)>,
    pub valuation: BTreeMap<String, Vec<usize>>,
}

/// A ground clause over `ob` membership atoms: satisfied when some `pos`
/// pair is in `ob` or some `neg` pair is not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObClause {
    pub pos: Vec<(u32, u32)>,
    pub neg: Vec<(u32, u32)>,
}

impl ObClause {
    pub fn satisfied_by(&self, ob: &BTreeSet<(u32, u32)>) -> bool {
        self.pos.iter().any(|p| ob.contains(p)) || self.neg.iter().any(|p| !ob.contains(p))
    }
}

/// One frame condition on `ob`, grounded over the subsets of a world set.
pub struct CjConstraint {
    pub name: &'static str,
    pub statement: &'static str,
    /// Ground instances over all subsets of `full`.
    pub ground: fn(full: u32) -> Vec<ObClause>,
}

fn subsets(full: u32) -> impl Iterator<Item = u32> + Clone {
    (0..=full).filter(move |s| s & !full == 0)
}

fn ground_5a(full: u32) -> Vec<ObClause> {
    subsets(full)
        .map(|x| ObClause {
            pos: vec![],
            neg: vec![(x, 0)],
        })
        .collect()
}

fn ground_5b(full: u32) -> Vec<ObClause> {
    let mut out = Vec::new();
    for x in subsets(full) {
        for y in subsets(full) {
            for z in subsets(full) {
                if y != z && x & y == x & z {
                    out.push(ObClause {
                        pos: vec![(x, z)],
                        neg: vec![(x, y)],
                    });
                }
            }
        }
    }
    out
}

fn ground_5c(full: u32) -> Vec<ObClause> {
    let mut out = Vec::new();
    for x in subsets(full) {
        for y in subsets(full) {
            for z in subsets(full) {
                let meet = y & z;
                if y < z && x & meet != 0 && meet != y && meet != z {
                    out.push(ObClause {
                        pos: vec![(x, meet)],
                        neg: vec![(x, y), (x, z)],
                    });
                }
            }
        }
    }
    out
}

fn ground_5d(full: u32) -> Vec<ObClause> {
    let mut out = Vec::new();
    for x in subsets(full) {
        for y in subsets(full).filter(|y| y & !x == 0) {
            for z in subsets(full).filter(|z| x & !z == 0) {
                let target = (z & !x) | y;
                if (z, target) != (x, y) {
                    out.push(ObClause {
                        pos: vec![(z, target)],
                        neg: vec![(x, y)],
                    });
                }
            }
        }
    }
    out
}

fn ground_5e(full: u32) -> Vec<ObClause> {
    let mut out = Vec::new();
    for x in subsets(full) {
        for y in subsets(full).filter(|y| y & !x == 0 && *y != x) {
            for z in subsets(full).filter(|z| y & z != 0) {
                out.push(ObClause {
                    pos: vec![(y, z)],
                    neg: vec![(x, z)],
                });
            }
        }
    }
    out
}

static TABLE: [CjConstraint; 5] = [
    CjConstraint {
        name: "5a",
        statement: "the empty set is never obligatory: not ob(X, {})",
        ground: ground_5a,
    },
    CjConstraint {
        name: "5b",
        statement: "only the part inside the context matters: X&Y = X&Z implies (ob(X,Y) iff ob(X,Z))",
        ground: ground_5b,
    },
    CjConstraint {
        name: "5c",
        statement: "closure under consistent intersection: X&Y&Z nonempty, ob(X,Y), ob(X,Z) imply ob(X, Y&Z)",
        ground: ground_5c,
    },
    CjConstraint {
        name: "5d",
        statement: "context extension: Y <= X, ob(X,Y), X <= Z imply ob(Z, (Z-X) | Y)",
        ground: ground_5d,
    },
    CjConstraint {
        name: "5e",
        statement: "context narrowing: Y <= X, ob(X,Z), Y&Z nonempty imply ob(Y,Z)",
        ground: ground_5e,
    },
];

/// The frame conditions on `ob`, shared by the validator and the encoder.
pub fn cj_constraint_table() -> &'static [CjConstraint] {
    &TABLE
}

fn mask_of(set: &[bool]) -> u32 {
    set.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .fold(0, |m, (i, _)| m | 1 << i)
}

fn mask_members(mask: u32, worlds: usize) -> Vec<usize> {
    (0..worlds).filter(|w| mask >> w & 1 == 1).collect()
}

impl CjModel {
    pub fn full(&self) -> u32 {
        if self.worlds >= 32 {
            u32::MAX
        } else {
            (1u32 << self.worlds) - 1
        }
    }

    /// Checks the av/pv conditions and every row of the `ob` constraint
    /// table; returns all violations found.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut errs = Vec::new();
        let full = self.full();
        if self.worlds == 0 || self.worlds > 5 {
            errs.push(format!("unsupported world count {}", self.worlds));
            return Err(errs);
        }
        if self.av.len() != self.worlds || self.pv.len() != self.worlds {
            errs.push("av/pv must have one entry per world".into());
            return Err(errs);
        }
        for w in 0..self.worlds {
            if self.av[w] & full == 0 {
                errs.push(format!("av(w{w}) is empty"));
            }
            if self.av[w] & !self.pv[w] != 0 {
                errs.push(format!("av(w{w}) is not contained in pv(w{w})"));
            }
            if self.pv[w] >> w & 1 == 0 {
                errs.push(format!("w{w} is not in pv(w{w})"));
            }
        }
        if self.ob.iter().any(|&(x, y)| (x | y) & !full != 0) {
            errs.push("ob mentions worlds out of range".into());
        }
        for c in cj_constraint_table() {
            if let Some(bad) = (c.ground)(full)
                .into_iter()
                .find(|cl| !cl.satisfied_by(&self.ob))
            {
                errs.push(format!(
                    "ob violates {} ({}) at {:?}",
                    c.name, c.statement, bad
                ));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    pub fn truth_set(&self, f: &Formula) -> Result<Vec<bool>, EvalError> {
        truth_set(self, f)
    }

    fn obligatory(&self, context: u32, content: u32) -> bool {
        self.ob.contains(&(context, content))
    }
}

impl WorldFrame for CjModel {
    const NAME: &'static str = "Carmo-Jones";

    fn num_worlds(&self) -> usize {
        self.worlds
    }

    fn atom(&self, name: &str) -> Vec<bool> {
        valuation_set(&self.valuation, self.worlds, name)
    }

    fn modal(&self, f: &Formula, args: &[Vec<bool>]) -> Result<Vec<bool>, EvalError> {
        let n = self.worlds;
        let full = self.full();
        let a = mask_of(&args[0]);
        let uniform = |b: bool| vec![b; n];
        Ok(match f {
            Formula::Nec(_) => uniform(a == full),
            Formula::Poss(_) => uniform(a != 0),
            Formula::ObC(..) => uniform(self.obligatory(mask_of(&args[1]), a)),
            Formula::PermC(..) => uniform(!self.obligatory(mask_of(&args[1]), full & !a)),
            Formula::Ob(_) => uniform(self.obligatory(full, a)),
            Formula::Perm(_) => uniform(!self.obligatory(full, full & !a)),
            Formula::Forb(_) => uniform(self.obligatory(full, full & !a)),
            Formula::NecActual(_) => (0..n).map(|w| self.av[w] & !a == 0).collect(),
            Formula::NecPotential(_) => (0..n).map(|w| self.pv[w] & !a == 0).collect(),
            Formula::ObActual(_) => (0..n)
                .map(|w| self.obligatory(self.av[w], a) && self.av[w] & !a != 0)
                .collect(),
            Formula::ObPotential(_) => (0..n)
                .map(|w| self.obligatory(self.pv[w], a) && self.pv[w] & !a != 0)
                .collect(),
            other => {
                return Err(EvalError::LogicMismatch {
                    op: NodeKind::of(other),
                    model: Self::NAME,
                })
            }
        })
    }
}

impl fmt::Display for CjModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.worlds;
        writeln!(f, "model DDL_CJ ({n} worlds)")?;
        writeln!(f, "worlds: {}", fmt_set(&(0..n).collect::<Vec<_>>()))?;
        for w in 0..n {
            writeln!(
                f,
                "av(w{w}) = {}  pv(w{w}) = {}",
                fmt_set(&mask_members(self.av[w], n)),
                fmt_set(&mask_members(self.pv[w], n))
            )?;
        }
        writeln!(f, "ob:")?;
        if self.ob.is_empty() {
            writeln!(f, "  -")?;
        }
        for &(x, y) in &self.ob {
            writeln!(
                f,
                "  ob({}) contains {}",
                fmt_set(&mask_members(x, n)),
                fmt_set(&mask_members(y, n))
            )?;
        }
        write_valuation(f, n, &self.valuation)
    }
}
