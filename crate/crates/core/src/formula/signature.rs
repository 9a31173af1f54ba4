use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{Formula, LogicId, Term};

/// Constructor tags, used to express which nodes a logic admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NodeKind {
    Top,
    Bot,
    Atom,
    Pred,
    Not,
    And,
    Or,
    Impl,
    Iff,
    Forall,
    Exists,
    Ob,
    Perm,
    Forb,
    Nec,
    Poss,
    ObC,
    PermC,
    NecActual,
    NecPotential,
    ObActual,
    ObPotential,
}

impl NodeKind {
    pub fn of(f: &Formula) -> NodeKind {
        use Formula as F;
        match f {
            F::Top => NodeKind::Top,
            F::Bot => NodeKind::Bot,
            F::Atom(_) => NodeKind::Atom,
            F::Pred(..) => NodeKind::Pred,
            F::Not(_) => NodeKind::Not,
            F::And(..) => NodeKind::And,
            F::Or(..) => NodeKind::Or,
            F::Impl(..) => NodeKind::Impl,
            F::Iff(..) => NodeKind::Iff,
            F::Forall(..) => NodeKind::Forall,
            F::Exists(..) => NodeKind::Exists,
            F::Ob(_) => NodeKind::Ob,
            F::Perm(_) => NodeKind::Perm,
            F::Forb(_) => NodeKind::Forb,
            F::Nec(_) => NodeKind::Nec,
            F::Poss(_) => NodeKind::Poss,
            F::ObC(..) => NodeKind::ObC,
            F::PermC(..) => NodeKind::PermC,
            F::NecActual(_) => NodeKind::NecActual,
            F::NecPotential(_) => NodeKind::NecPotential,
            F::ObActual(_) => NodeKind::ObActual,
            F::ObPotential(_) => NodeKind::ObPotential,
        }
    }
}

const BOOLEAN: &[NodeKind] = &[
    NodeKind::Top,
    NodeKind::Bot,
    NodeKind::Not,
    NodeKind::And,
    NodeKind::Or,
    NodeKind::Impl,
    NodeKind::Iff,
];
const FIRST_ORDER: &[NodeKind] = &[NodeKind::Pred, NodeKind::Forall, NodeKind::Exists];
const MONADIC_DEONTIC: &[NodeKind] =
    &[NodeKind::Atom, NodeKind::Ob, NodeKind::Perm, NodeKind::Forb];
const DYADIC: &[NodeKind] = &[
    NodeKind::Nec,
    NodeKind::Poss,
    NodeKind::ObC,
    NodeKind::PermC,
];
const CARMO_JONES: &[NodeKind] = &[
    NodeKind::NecActual,
    NodeKind::NecPotential,
    NodeKind::ObActual,
    NodeKind::ObPotential,
];

/// The vocabulary a logic admits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub logic: LogicId,
    admitted: Vec<NodeKind>,
}

impl Signature {
    pub fn of(logic: LogicId) -> Signature {
        let groups: &[&[NodeKind]] = match logic {
            LogicId::Fol => &[BOOLEAN, FIRST_ORDER],
            LogicId::Kd => &[BOOLEAN, MONADIC_DEONTIC],
            LogicId::Ddle => &[BOOLEAN, MONADIC_DEONTIC, DYADIC],
            LogicId::DdlCj => &[BOOLEAN, MONADIC_DEONTIC, DYADIC, CARMO_JONES],
        };
        let mut admitted: Vec<NodeKind> = groups.iter().flat_map(|g| g.iter().copied()).collect();
        admitted.sort();
        Signature { logic, admitted }
    }

    pub fn admits(&self, kind: NodeKind) -> bool {
        self.admitted.binary_search(&kind).is_ok()
    }

    pub fn admits_quantifiers(&self) -> bool {
        self.admits(NodeKind::Forall)
    }

    /// Human-readable reason a node kind is excluded, `None` when admitted.
    pub fn exclusion(&self, kind: NodeKind) -> Option<String> {
        if self.admits(kind) {
            return None;
        }
        let logic = self.logic;
        Some(match kind {
            NodeKind::ObC | NodeKind::PermC => "dyadic operator outside DDLE/DDL_CJ".to_string(),
            NodeKind::Nec | NodeKind::Poss => format!("alethic modality not admitted in {logic}"),
            NodeKind::NecActual
            | NodeKind::NecPotential
            | NodeKind::ObActual
            | NodeKind::ObPotential => "actual/potential operator outside DDL_CJ".to_string(),
            NodeKind::Ob | NodeKind::Perm | NodeKind::Forb => {
                format!("deontic operator not admitted in {logic}")
            }
            NodeKind::Pred | NodeKind::Forall | NodeKind::Exists => {
                format!("predicates and quantifiers are not admitted in {logic}")
            }
            NodeKind::Atom => format!("propositional atom not admitted in {logic}"),
            other => format!("{other:?} not admitted in {logic}"),
        })
    }
}

/// A single well-formedness violation, located by its child-index path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: Vec<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "at root: {}", self.message)
        } else {
            let p: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
            write!(f, "at {}: {}", p.join("."), self.message)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WellFormedReport {
    pub violations: Vec<Violation>,
}

impl WellFormedReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Checker<'a> {
    sig: &'a Signature,
    bound: Vec<&'a str>,
    arities: BTreeMap<&'a str, usize>,
    path: Vec<usize>,
    out: Vec<Violation>,
}

impl<'a> Checker<'a> {
    fn report(&mut self, message: String) {
        self.out.push(Violation {
            path: self.path.clone(),
            message,
        });
    }

    fn visit(&mut self, f: &'a Formula) {
        if let Some(msg) = self.sig.exclusion(NodeKind::of(f)) {
            self.report(msg);
        }
        match f {
            Formula::Pred(name, args) => {
                match self.arities.get(name.as_str()) {
                    Some(&n) if n != args.len() => self.report(format!(
                        "predicate {name} used with arities {n} and {}",
                        args.len()
                    )),
                    Some(_) => {}
                    None => {
                        self.arities.insert(name, args.len());
                    }
                }
                for t in args {
                    match t {
                        Term::Var(v) if !self.bound.contains(&v.as_str()) => {
                            self.report(format!("free variable {v}"))
                        }
                        Term::Const(c) if self.bound.contains(&c.as_str()) => {
                            self.report(format!("constant {c} clashes with a bound variable"))
                        }
                        _ => {}
                    }
                }
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                if self.bound.contains(&v.as_str()) {
                    self.report(format!("variable {v} shadows an enclosing binding"));
                }
                self.bound.push(v);
                self.path.push(0);
                self.visit(body);
                self.path.pop();
                self.bound.pop();
            }
            _ => {
                for (i, c) in f.children().into_iter().enumerate() {
                    self.path.push(i);
                    self.visit(c);
                    self.path.pop();
                }
            }
        }
    }
}

/// Checks that every node of `f` is admitted by `logic` and that variable
/// binding is well scoped. Violations are returned as data.
pub fn well_formed(f: &Formula, logic: LogicId) -> WellFormedReport {
    let sig = Signature::of(logic);
    let mut checker = Checker {
        sig: &sig,
        bound: Vec::new(),
        arities: BTreeMap::new(),
        path: Vec::new(),
        out: Vec::new(),
    };
    checker.visit(f);
    WellFormedReport {
        violations: checker.out,
    }
}
