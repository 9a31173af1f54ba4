//! Unified formula AST shared by every supported logic.
//!
//! A single [`Formula`] type spans first-order, monadic deontic (KD),
//! preference-based dyadic (DDLE) and Carmo–Jones (DDL_CJ) syntax. Which
//! constructors are admissible is decided per [`LogicId`] by the
//! [`Signature`] table, so one tree can be checked against exactly one logic
//! at a time.

mod gen;
mod normal;
mod pretty;
mod signature;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use gen::{random_formula, random_kd_formula, GenConfig};
pub use normal::{eliminate_iff, expand_duals, nnf, normalize, simplify_constants};
pub use signature::{well_formed, NodeKind, Signature, Violation, WellFormedReport};

/// The closed set of logics the engine can be parameterised by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LogicId {
    #[serde(rename = "FOL")]
    Fol,
    #[serde(rename = "KD")]
    Kd,
    #[serde(rename = "DDLE")]
    Ddle,
    #[serde(rename = "DDL_CJ")]
    DdlCj,
}

impl LogicId {
    pub const ALL: [LogicId; 4] = [LogicId::Fol, LogicId::Kd, LogicId::Ddle, LogicId::DdlCj];

    pub fn name(self) -> &'static str {
        match self {
            LogicId::Fol => "FOL",
            LogicId::Kd => "KD",
            LogicId::Ddle => "DDLE",
            LogicId::DdlCj => "DDL_CJ",
        }
    }

    pub fn signature(self) -> Signature {
        Signature::of(self)
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown logic `{0}` (expected one of FOL, KD, DDLE, DDL_CJ)")]
pub struct UnknownLogic(pub String);

impl FromStr for LogicId {
    type Err = UnknownLogic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "FOL" => Ok(LogicId::Fol),
            "KD" => Ok(LogicId::Kd),
            "DDLE" => Ok(LogicId::Ddle),
            "DDL_CJ" | "DDLCJ" | "CJ" => Ok(LogicId::DdlCj),
            _ => Err(UnknownLogic(s.to_string())),
        }
    }
}

/// Arguments of a predicate. The fragment is function-free: events and
/// individuals are named constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    Top,
    Bot,
    Atom(String),
    Pred(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    /// Monadic obligation.
    Ob(Box<Formula>),
    /// Monadic permission, the dual of [`Formula::Ob`].
    Perm(Box<Formula>),
    /// Prohibition: obligation of the negation.
    Forb(Box<Formula>),
    /// Necessity over all worlds.
    Nec(Box<Formula>),
    Poss(Box<Formula>),
    /// Conditional obligation `O(consequent|antecedent)`.
    ObC(Box<Formula>, Box<Formula>),
    /// Conditional permission `P(consequent|antecedent)`.
    PermC(Box<Formula>, Box<Formula>),
    /// Necessity over the actual versions of the current world.
    NecActual(Box<Formula>),
    /// Necessity over the potential versions of the current world.
    NecPotential(Box<Formula>),
    /// Actual obligation.
    ObActual(Box<Formula>),
    /// Primary obligation.
    ObPotential(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Pred(name.into(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn ob(f: Formula) -> Formula {
        Formula::Ob(Box::new(f))
    }

    pub fn perm(f: Formula) -> Formula {
        Formula::Perm(Box::new(f))
    }

    pub fn forb(f: Formula) -> Formula {
        Formula::Forb(Box::new(f))
    }

    pub fn nec(f: Formula) -> Formula {
        Formula::Nec(Box::new(f))
    }

    pub fn poss(f: Formula) -> Formula {
        Formula::Poss(Box::new(f))
    }

    pub fn ob_c(consequent: Formula, antecedent: Formula) -> Formula {
        Formula::ObC(Box::new(consequent), Box::new(antecedent))
    }

    pub fn perm_c(consequent: Formula, antecedent: Formula) -> Formula {
        Formula::PermC(Box::new(consequent), Box::new(antecedent))
    }

    pub fn nec_actual(f: Formula) -> Formula {
        Formula::NecActual(Box::new(f))
    }

    pub fn nec_potential(f: Formula) -> Formula {
        Formula::NecPotential(Box::new(f))
    }

    pub fn ob_actual(f: Formula) -> Formula {
        Formula::ObActual(Box::new(f))
    }

    pub fn ob_potential(f: Formula) -> Formula {
        Formula::ObPotential(Box::new(f))
    }

    /// Right-nested conjunction; `Top` for an empty iterator.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::Top;
        };
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Top | Bot | Atom(_) | Pred(..) => vec![],
            Not(a)
            | Forall(_, a)
            | Exists(_, a)
            | Ob(a)
            | Perm(a)
            | Forb(a)
            | Nec(a)
            | Poss(a)
            | NecActual(a)
            | NecPotential(a)
            | ObActual(a)
            | ObPotential(a) => vec![a],
            And(a, b) | Or(a, b) | Impl(a, b) | Iff(a, b) | ObC(a, b) | PermC(a, b) => vec![a, b],
        }
    }

    /// Rebuilds this node with `f` applied to each direct child.
    pub fn map_children(self, mut f: impl FnMut(Formula) -> Formula) -> Formula {
        use Formula::*;
        let mut m = |b: Box<Formula>| Box::new(f(*b));
        match self {
            leaf @ (Top | Bot | Atom(_) | Pred(..)) => leaf,
            Not(a) => Not(m(a)),
            Forall(v, a) => Forall(v, m(a)),
            Exists(v, a) => Exists(v, m(a)),
            Ob(a) => Ob(m(a)),
            Perm(a) => Perm(m(a)),
            Forb(a) => Forb(m(a)),
            Nec(a) => Nec(m(a)),
            Poss(a) => Poss(m(a)),
            NecActual(a) => NecActual(m(a)),
            NecPotential(a) => NecPotential(m(a)),
            ObActual(a) => ObActual(m(a)),
            ObPotential(a) => ObPotential(m(a)),
            And(a, b) => {
                let a = m(a);
                And(a, m(b))
            }
            Or(a, b) => {
                let a = m(a);
                Or(a, m(b))
            }
            Impl(a, b) => {
                let a = m(a);
                Impl(a, m(b))
            }
            Iff(a, b) => {
                let a = m(a);
                Iff(a, m(b))
            }
            ObC(a, b) => {
                let a = m(a);
                ObC(a, m(b))
            }
            PermC(a, b) => {
                let a = m(a);
                PermC(a, m(b))
            }
        }
    }

    /// Every subformula, including `self`, in pre-order.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.push(f);
            for c in f.children().into_iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Nesting depth of modal and deontic operators.
    pub fn modal_depth(&self) -> usize {
        let inner = self
            .children()
            .iter()
            .map(|c| c.modal_depth())
            .max()
            .unwrap_or(0);
        if self.is_modal() {
            inner + 1
        } else {
            inner
        }
    }

    pub fn is_modal(&self) -> bool {
        use Formula::*;
        matches!(
            self,
            Ob(_)
                | Perm(_)
                | Forb(_)
                | Nec(_)
                | Poss(_)
                | ObC(..)
                | PermC(..)
                | NecActual(_)
                | NecPotential(_)
                | ObActual(_)
                | ObPotential(_)
        )
    }

    /// Names of all atoms and predicates occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Formula::Atom(n) | Formula::Pred(n, _) => Some(n.clone()),
                _ => None,
            })
            .collect()
    }

    /// Constants occurring as predicate arguments.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for f in self.subformulas() {
            if let Formula::Pred(_, args) = f {
                for t in args {
                    if let Term::Const(c) = t {
                        out.insert(c.clone());
                    }
                }
            }
        }
        out
    }

    /// Renders the formula in the surface syntax accepted by the parser.
    pub fn pretty(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        pretty::write_formula(f, self)
    }
}

/// Free-standing alias of [`Formula::atoms`].
pub fn atoms(f: &Formula) -> BTreeSet<String> {
    f.atoms()
}

/// Free-standing alias of [`Formula::pretty`].
pub fn pretty(f: &Formula) -> String {
    f.pretty()
}

/// Serde adapter storing formulas as surface-syntax strings.
pub mod as_text {
    use super::Formula;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(f: &Formula, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&f.pretty())
    }

    pub mod vec {
        use super::super::Formula;
        use serde::ser::SerializeSeq;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(fs: &[Formula], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(fs.len()))?;
            for f in fs {
                seq.serialize_element(&f.pretty())?;
            }
            seq.end()
        }
    }
}
