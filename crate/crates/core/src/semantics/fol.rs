use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::EvalError;
use crate::formula::{Formula, NodeKind, Term};

/// A finite first-order interpretation under the unique-names reading:
/// every constant denotes the domain element of the same name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FolInterp {
    pub domain: Vec<String>,
    /// Predicate name to its declared arity.
    pub arities: BTreeMap<String, usize>,
    /// Predicate name to the tuples in its extension.
    pub relations: BTreeMap<String, BTreeSet<Vec<String>>>,
}

impl FolInterp {
    pub fn new(
        domain: Vec<String>,
        arities: BTreeMap<String, usize>,
        relations: BTreeMap<String, BTreeSet<Vec<String>>>,
    ) -> Result<FolInterp, String> {
        if domain.is_empty() {
            return Err("domain must be non-empty".into());
        }
        for (p, tuples) in &relations {
            let Some(&n) = arities.get(p) else {
                return Err(format!("relation {p} has no declared arity"));
            };
            for t in tuples {
                if t.len() != n {
                    return Err(format!(
                        "tuple {t:?} of {p} has arity {}, expected {n}",
                        t.len()
                    ));
                }
                if let Some(e) = t.iter().find(|e| !domain.contains(e)) {
                    return Err(format!(
                        "tuple of {p} mentions {e}, which is not in the domain"
                    ));
                }
            }
        }
        Ok(FolInterp {
            domain,
            arities,
            relations,
        })
    }

    pub fn holds(&self, pred: &str, args: &[String]) -> bool {
        self.relations.get(pred).is_some_and(|r| r.contains(args))
    }
}

/// Tarskian satisfaction of `f` under `env`.
pub fn eval_fol(
    interp: &FolInterp,
    f: &Formula,
    env: &BTreeMap<String, String>,
) -> Result<bool, EvalError> {
    let mut env = env.clone();
    eval_in(interp, f, &mut env)
}

fn eval_in(
    i: &FolInterp,
    f: &Formula,
    env: &mut BTreeMap<String, String>,
) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Pred(name, args) => {
            let Some(&arity) = i.arities.get(name) else {
                return Err(EvalError::UnknownPredicate(name.clone()));
            };
            if arity != args.len() {
                return Err(EvalError::UnknownPredicate(format!(
                    "{name}/{}",
                    args.len()
                )));
            }
            let mut tuple = Vec::with_capacity(args.len());
            for t in args {
                tuple.push(match t {
                    Term::Var(v) => env
                        .get(v)
                        .cloned()
                        .ok_or_else(|| EvalError::UnboundVariable(v.clone()))?,
                    Term::Const(c) => {
                        if !i.domain.contains(c) {
                            return Err(EvalError::UnknownConstant(c.clone()));
                        }
                        c.clone()
                    }
                });
            }
            i.holds(name, &tuple)
        }
        Formula::Not(a) => !eval_in(i, a, env)?,
        Formula::And(a, b) => eval_in(i, a, env)? & eval_in(i, b, env)?,
        Formula::Or(a, b) => eval_in(i, a, env)? | eval_in(i, b, env)?,
        Formula::Impl(a, b) => !eval_in(i, a, env)? | eval_in(i, b, env)?,
        Formula::Iff(a, b) => eval_in(i, a, env)? == eval_in(i, b, env)?,
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let saved = env.get(v).cloned();
            let mut result = universal;
            for d in &i.domain {
                env.insert(v.clone(), d.clone());
                let b = eval_in(i, body, env);
                let b = match b {
                    Ok(b) => b,
                    Err(e) => {
                        restore(env, v, saved);
                        return Err(e);
                    }
                };
                if b != universal {
                    result = b;
                    break;
                }
            }
            restore(env, v, saved);
            result
        }
        other => {
            return Err(EvalError::LogicMismatch {
                op: NodeKind::of(other),
                model: "first-order",
            })
        }
    })
}

fn restore(env: &mut BTreeMap<String, String>, v: &str, saved: Option<String>) {
    match saved {
        Some(s) => {
            env.insert(v.to_string(), s);
        }
        None => {
            env.remove(v);
        }
    }
}

/// Name of the propositional atom standing for a ground predicate instance.
pub fn ground_atom_name(pred: &str, args: &[String]) -> String {
    format!("{pred}({})", args.join(","))
}

/// Expands quantifiers over `domain` and replaces ground predicate
/// instances by propositional atoms named by [`ground_atom_name`].
pub fn ground_formula(f: &Formula, domain: &[String]) -> Result<Formula, EvalError> {
    ground_in(f, domain, &mut BTreeMap::new())
}

fn ground_in(
    f: &Formula,
    domain: &[String],
    env: &mut BTreeMap<String, String>,
) -> Result<Formula, EvalError> {
    Ok(match f {
        Formula::Top => Formula::Top,
        Formula::Bot => Formula::Bot,
        Formula::Pred(name, args) => {
            let mut tuple = Vec::new();
            for t in args {
                tuple.push(match t {
                    Term::Var(v) => env
                        .get(v)
                        .cloned()
                        .ok_or_else(|| EvalError::UnboundVariable(v.clone()))?,
                    Term::Const(c) => c.clone(),
                });
            }
            Formula::Atom(ground_atom_name(name, &tuple))
        }
        Formula::Not(a) => Formula::not(ground_in(a, domain, env)?),
        Formula::And(a, b) => Formula::and(ground_in(a, domain, env)?, ground_in(b, domain, env)?),
        Formula::Or(a, b) => Formula::or(ground_in(a, domain, env)?, ground_in(b, domain, env)?),
        Formula::Impl(a, b) => {
            Formula::implies(ground_in(a, domain, env)?, ground_in(b, domain, env)?)
        }
        Formula::Iff(a, b) => Formula::iff(ground_in(a, domain, env)?, ground_in(b, domain, env)?),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let saved = env.get(v).cloned();
            let mut parts = Vec::with_capacity(domain.len());
            for d in domain {
                env.insert(v.clone(), d.clone());
                parts.push(ground_in(body, domain, env));
            }
            restore(env, v, saved);
            let parts = parts.into_iter().collect::<Result<Vec<_>, _>>()?;
            let universal = matches!(f, Formula::Forall(..));
            let mut it = parts.into_iter();
            let first = it.next().unwrap_or(if universal {
                Formula::Top
            } else {
                Formula::Bot
            });
            it.fold(first, |acc, g| {
                if universal {
                    Formula::and(acc, g)
                } else {
                    Formula::or(acc, g)
                }
            })
        }
        other => {
            return Err(EvalError::LogicMismatch {
                op: NodeKind::of(other),
                model: "first-order",
            })
        }
    })
}

impl fmt::Display for FolInterp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model FOL ({} elements)", self.domain.len())?;
        writeln!(f, "domain: {{{}}}", self.domain.join(", "))?;
        writeln!(f, "relations:")?;
        for (p, arity) in &self.arities {
            let tuples: Vec<String> = self
                .relations
                .get(p)
                .map(|r| r.iter().map(|t| format!("({})", t.join(","))).collect())
                .unwrap_or_default();
            writeln!(
                f,
                "  {p}/{arity}: {}",
                if tuples.is_empty() {
                    "-".to_string()
                } else {
                    tuples.join(" ")
                }
            )?;
        }
        Ok(())
    }
}
