use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{fmt_set, truth_set, valuation_set, write_valuation, EvalError, WorldFrame};
use crate::formula::{Formula, NodeKind};

/// A Kripke model for monadic deontic logic: `access[w]` lists the
/// deontically ideal alternatives of `w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KripkeModel {
    pub worlds: usize,
    pub access: Vec<Vec<usize>>,
    /// Atom name to the sorted list of worlds where it holds.
    pub valuation: BTreeMap<String, Vec<usize>>,
}

impl KripkeModel {
    /// Builds a model, normalising successor and valuation lists. Seriality
    /// is not enforced here (the K variant needs dead ends); see
    /// [`KripkeModel::is_serial`].
    pub fn new(
        worlds: usize,
        access: Vec<Vec<usize>>,
        valuation: BTreeMap<String, Vec<usize>>,
    ) -> Result<KripkeModel, String> {
        if worlds == 0 {
            return Err("a model needs at least one world".into());
        }
        if access.len() != worlds {
            return Err(format!(
                "access lists {} worlds, model has {worlds}",
                access.len()
            ));
        }
        let mut access = access;
        for succ in access.iter_mut() {
            succ.sort_unstable();
            succ.dedup();
            if succ.iter().any(|&v| v >= worlds) {
                return Err("access mentions a world out of range".into());
            }
        }
        let mut valuation = valuation;
        for ws in valuation.values_mut() {
            ws.sort_unstable();
            ws.dedup();
            if ws.iter().any(|&v| v >= worlds) {
                return Err("valuation mentions a world out of range".into());
            }
        }
        Ok(KripkeModel {
            worlds,
            access,
            valuation,
        })
    }

    pub fn is_serial(&self) -> bool {
        self.access.iter().all(|s| !s.is_empty())
    }

    pub fn truth_set(&self, f: &Formula) -> Result<Vec<bool>, EvalError> {
        truth_set(self, f)
    }
}

impl WorldFrame for KripkeModel {
    const NAME: &'static str = "Kripke";

    fn num_worlds(&self) -> usize {
        self.worlds
    }

    fn atom(&self, name: &str) -> Vec<bool> {
        valuation_set(&self.valuation, self.worlds, name)
    }

    fn modal(&self, f: &Formula, args: &[Vec<bool>]) -> Result<Vec<bool>, EvalError> {
        let a = &args[0];
        let all = |pred: &dyn Fn(usize) -> bool| -> Vec<bool> {
            self.access
                .iter()
                .map(|succ| succ.iter().all(|&v| pred(v)))
                .collect()
        };
        let some = |pred: &dyn Fn(usize) -> bool| -> Vec<bool> {
            self.access
                .iter()
                .map(|succ| succ.iter().any(|&v| pred(v)))
                .collect()
        };
        match f {
            Formula::Ob(_) => Ok(all(&|v| a[v])),
            Formula::Perm(_) => Ok(some(&|v| a[v])),
            Formula::Forb(_) => Ok(all(&|v| !a[v])),
            other => Err(EvalError::LogicMismatch {
                op: NodeKind::of(other),
                model: Self::NAME,
            }),
        }
    }
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model KD ({} worlds)", self.worlds)?;
        writeln!(
            f,
            "worlds: {}",
            fmt_set(&(0..self.worlds).collect::<Vec<_>>())
        )?;
        let edges: Vec<String> = self
            .access
            .iter()
            .enumerate()
            .flat_map(|(w, succ)| succ.iter().map(move |v| format!("w{w}->w{v}")))
            .collect();
        writeln!(f, "access: {}", edges.join(" "))?;
        write_valuation(f, self.worlds, &self.valuation)
    }
}

/// Every Kripke model with `k` worlds over `atoms`, optionally restricted to
/// serial ones. Intended for exhaustive checks at tiny sizes.
pub fn all_kripke_models(k: usize, atoms: &[String], serial: bool) -> Vec<KripkeModel> {
    assert!(
        k >= 1 && k * k + k * atoms.len() <= 20,
        "enumeration too large"
    );
    let mut out = Vec::new();
    for rel in 0u64..(1 << (k * k)) {
        let access: Vec<Vec<usize>> = (0..k)
            .map(|w| (0..k).filter(|&v| rel >> (w * k + v) & 1 == 1).collect())
            .collect();
        if serial && access.iter().any(|s| s.is_empty()) {
            continue;
        }
        for val in 0u64..(1 << (k * atoms.len())) {
            let valuation = atoms
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    (
                        a.clone(),
                        (0..k).filter(|&w| val >> (i * k + w) & 1 == 1).collect(),
                    )
                })
                .collect();
            out.push(KripkeModel {
                worlds: k,
                access: access.clone(),
                valuation,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;
    use crate::semantics::{eval, globally_valid, Model};

    fn example() -> Model {
        let val = BTreeMap::from([("p".to_string(), vec![1])]);
        Model::Kripke(KripkeModel::new(2, vec![vec![1], vec![1]], val).unwrap())
    }

    #[test]
    fn obligation_at_successors() {
        let m = example();
        assert!(eval(&m, 0, &F::ob(F::atom("p"))).unwrap());
        assert!(!eval(&m, 0, &F::atom("p")).unwrap());
    }

    #[test]
    fn global_validity() {
        let m = example();
        // Successors of 0 and of 1 are both {1}, where p holds.
        assert!(globally_valid(&m, &F::ob(F::atom("p"))).unwrap());
        assert!(!globally_valid(&m, &F::atom("p")).unwrap());
        let lem = F::or(F::atom("p"), F::not(F::atom("p")));
        assert!(globally_valid(&m, &lem).unwrap());
    }

    #[test]
    fn dyadic_operator_is_a_mismatch() {
        let m = example();
        assert!(eval(&m, 0, &F::ob_c(F::atom("p"), F::Top)).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let atoms = vec!["p".to_string()];
        // 2 worlds: 16 relations, 9 serial; 4 valuations.
        assert_eq!(all_kripke_models(2, &atoms, false).len(), 64);
        assert_eq!(all_kripke_models(2, &atoms, true).len(), 36);
    }
}
