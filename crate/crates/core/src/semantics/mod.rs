//! Finite models, evaluators and bounded model-existence encodings.
//!
//! Every modal model evaluates a formula to its *truth set*: one boolean per
//! world, computed bottom-up. Boolean connectives are handled once in
//! [`truth_set`]; each model kind contributes only its operator clauses.

mod cj;
mod encode;
mod fol;
mod kripke;
mod preference;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::{Formula, LogicId, NodeKind};

pub use cj::{cj_constraint_table, CjConstraint, CjModel, ObClause};
pub use encode::{
    encode_bounded, encode_bounded_with, max_bound, Decoder, EncodeError, EncodeMode, EncodeOptions,
};
pub use fol::{eval_fol, ground_atom_name, ground_formula, FolInterp};
pub use kripke::{all_kripke_models, KripkeModel};
pub use preference::{all_preference_models, PreferenceModel};

/// How premises and goal are read against a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Consequence {
    /// Premises hold at every world; the goal must hold at every world.
    Global,
    /// Premises hold at the designated world 0; the goal must hold there.
    Local,
}

impl Consequence {
    /// Default reading per logic: the monadic and first-order logics use
    /// global consequence; the conditional logics read facts at the actual
    /// world so that contrary-to-duty scenarios stay satisfiable.
    pub fn default_for(logic: LogicId) -> Consequence {
        match logic {
            LogicId::Fol | LogicId::Kd => Consequence::Global,
            LogicId::Ddle | LogicId::DdlCj => Consequence::Local,
        }
    }
}

impl fmt::Display for Consequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Consequence::Global => "global",
            Consequence::Local => "local",
        })
    }
}

impl std::str::FromStr for Consequence {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "global" => Ok(Consequence::Global),
            "local" => Ok(Consequence::Local),
            _ => Err(format!(
                "unknown consequence mode `{s}` (expected global or local)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("operator {op:?} cannot be evaluated on a {model} model")]
    LogicMismatch { op: NodeKind, model: &'static str },
    #[error("world {world} out of range (model has {worlds} worlds)")]
    NoSuchWorld { world: usize, worlds: usize },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("unknown predicate {0}")]
    UnknownPredicate(String),
    #[error("unknown constant {0}")]
    UnknownConstant(String),
}

/// A countermodel or witness produced by the model finder or the tableau.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Model {
    Kripke(KripkeModel),
    Preference(PreferenceModel),
    CarmoJones(CjModel),
    Fol(FolInterp),
}

impl Model {
    pub fn logic(&self) -> LogicId {
        match self {
            Model::Kripke(_) => LogicId::Kd,
            Model::Preference(_) => LogicId::Ddle,
            Model::CarmoJones(_) => LogicId::DdlCj,
            Model::Fol(_) => LogicId::Fol,
        }
    }

    pub fn num_worlds(&self) -> usize {
        match self {
            Model::Kripke(m) => m.worlds,
            Model::Preference(m) => m.worlds,
            Model::CarmoJones(m) => m.worlds,
            Model::Fol(_) => 1,
        }
    }

    /// The structured text rendering used in feedback and traces.
    pub fn dump(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Kripke(m) => m.fmt(f),
            Model::Preference(m) => m.fmt(f),
            Model::CarmoJones(m) => m.fmt(f),
            Model::Fol(m) => m.fmt(f),
        }
    }
}

/// Truth value of `f` at `world`. First-order interpretations have a single
/// world and evaluate closed formulas.
pub fn eval(model: &Model, world: usize, f: &Formula) -> Result<bool, EvalError> {
    let n = model.num_worlds();
    if world >= n {
        return Err(EvalError::NoSuchWorld { world, worlds: n });
    }
    match model {
        Model::Fol(i) => eval_fol(i, f, &BTreeMap::new()),
        Model::Kripke(m) => Ok(truth_set(m, f)?[world]),
        Model::Preference(m) => Ok(truth_set(m, f)?[world]),
        Model::CarmoJones(m) => Ok(truth_set(m, f)?[world]),
    }
}

/// True iff `f` holds at every world of `model`.
pub fn globally_valid(model: &Model, f: &Formula) -> Result<bool, EvalError> {
    match model {
        Model::Fol(i) => eval_fol(i, f, &BTreeMap::new()),
        Model::Kripke(m) => Ok(truth_set(m, f)?.iter().all(|&b| b)),
        Model::Preference(m) => Ok(truth_set(m, f)?.iter().all(|&b| b)),
        Model::CarmoJones(m) => Ok(truth_set(m, f)?.iter().all(|&b| b)),
    }
}

/// Whether `f` holds in `model` under the given consequence reading.
pub fn holds(model: &Model, f: &Formula, mode: Consequence) -> Result<bool, EvalError> {
    match mode {
        Consequence::Global => globally_valid(model, f),
        Consequence::Local => eval(model, 0, f),
    }
}

/// Operator clauses of one kind of possible-worlds model.
pub(crate) trait WorldFrame {
    const NAME: &'static str;
    fn num_worlds(&self) -> usize;
    fn atom(&self, name: &str) -> Vec<bool>;
    /// Truth set of a non-boolean node given its children's truth sets.
    fn modal(&self, f: &Formula, args: &[Vec<bool>]) -> Result<Vec<bool>, EvalError>;
}

pub(crate) fn truth_set<M: WorldFrame>(m: &M, f: &Formula) -> Result<Vec<bool>, EvalError> {
    let n = m.num_worlds();
    let zip = |a: Vec<bool>, b: Vec<bool>, op: fn(bool, bool) -> bool| -> Vec<bool> {
        a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
    };
    Ok(match f {
        Formula::Top => vec![true; n],
        Formula::Bot => vec![false; n],
        Formula::Atom(name) => m.atom(name),
        Formula::Not(a) => truth_set(m, a)?.into_iter().map(|x| !x).collect(),
        Formula::And(a, b) => zip(truth_set(m, a)?, truth_set(m, b)?, |x, y| x && y),
        Formula::Or(a, b) => zip(truth_set(m, a)?, truth_set(m, b)?, |x, y| x || y),
        Formula::Impl(a, b) => zip(truth_set(m, a)?, truth_set(m, b)?, |x, y| !x || y),
        Formula::Iff(a, b) => zip(truth_set(m, a)?, truth_set(m, b)?, |x, y| x == y),
        Formula::Pred(..) | Formula::Forall(..) | Formula::Exists(..) => {
            return Err(EvalError::LogicMismatch {
                op: NodeKind::of(f),
                model: M::NAME,
            })
        }
        _ => {
            let args = f
                .children()
                .into_iter()
                .map(|c| truth_set(m, c))
                .collect::<Result<Vec<_>, _>>()?;
            m.modal(f, &args)?
        }
    })
}

/// Indices of the `true` entries.
pub(crate) fn members(set: &[bool]) -> Vec<usize> {
    set.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i)
        .collect()
}

pub(crate) fn fmt_set(set: &[usize]) -> String {
    let items: Vec<String> = set.iter().map(|w| format!("w{w}")).collect();
    format!("{{{}}}", items.join(", "))
}

fn write_valuation(
    f: &mut fmt::Formatter<'_>,
    worlds: usize,
    valuation: &BTreeMap<String, Vec<usize>>,
) -> fmt::Result {
    writeln!(f, "valuation:")?;
    for w in 0..worlds {
        let true_atoms: Vec<&str> = valuation
            .iter()
            .filter(|(_, ws)| ws.contains(&w))
            .map(|(a, _)| a.as_str())
            .collect();
        writeln!(
            f,
            "  w{w}: {}",
            if true_atoms.is_empty() {
                "-".to_string()
            } else {
                true_atoms.join(" ")
            }
        )?;
    }
    Ok(())
}

fn valuation_set(valuation: &BTreeMap<String, Vec<usize>>, worlds: usize, name: &str) -> Vec<bool> {
    let mut out = vec![false; worlds];
    if let Some(ws) = valuation.get(name) {
        for &w in ws {
            if w < worlds {
                out[w] = true;
            }
        }
    }
    out
}
