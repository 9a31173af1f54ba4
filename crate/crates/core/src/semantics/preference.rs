use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{fmt_set, members, truth_set, valuation_set, write_valuation, EvalError, WorldFrame};
use crate::formula::{Formula, NodeKind};

/// A preference model: `better[w][v]` means `w` is at least as good as `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreferenceModel {
    pub worlds: usize,
    pub better: Vec<Vec<bool>>,
    pub valuation: BTreeMap<String, Vec<usize>>,
}

impl PreferenceModel {
    /// Builds a model, rejecting relations that are not total preorders.
    pub fn new(
        worlds: usize,
        better: Vec<Vec<bool>>,
        valuation: BTreeMap<String, Vec<usize>>,
    ) -> Result<PreferenceModel, String> {
        if worlds == 0 {
            return Err("a model needs at least one world".into());
        }
        if better.len() != worlds || better.iter().any(|r| r.len() != worlds) {
            return Err("betterness matrix has the wrong shape".into());
        }
        let mut valuation = valuation;
        for ws in valuation.values_mut() {
            ws.sort_unstable();
            ws.dedup();
            if ws.iter().any(|&v| v >= worlds) {
                return Err("valuation mentions a world out of range".into());
            }
        }
        let m = PreferenceModel {
            worlds,
            better,
            valuation,
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds a model from a ranking: lower rank is better; equal ranks tie.
    pub fn from_ranks(
        ranks: &[usize],
        valuation: BTreeMap<String, Vec<usize>>,
    ) -> Result<PreferenceModel, String> {
        let n = ranks.len();
        let better = (0..n)
            .map(|w| (0..n).map(|v| ranks[w] <= ranks[v]).collect())
            .collect();
        PreferenceModel::new(n, better, valuation)
    }

    /// Reflexivity, totality and transitivity, checked exhaustively.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.worlds;
        for w in 0..n {
            if !self.better[w][w] {
                return Err(format!("betterness is not reflexive at w{w}"));
            }
            for v in 0..n {
                if !self.better[w][v] && !self.better[v][w] {
                    return Err(format!("w{w} and w{v} are incomparable"));
                }
                for u in 0..n {
                    if self.better[w][v] && self.better[v][u] && !self.better[w][u] {
                        return Err(format!("betterness is not transitive on w{w}, w{v}, w{u}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Maximal elements of `set`: members at least as good as every member.
    pub fn best(&self, set: &[bool]) -> Vec<bool> {
        let ms = members(set);
        (0..self.worlds)
            .map(|w| set[w] && ms.iter().all(|&v| self.better[w][v]))
            .collect()
    }

    pub fn truth_set(&self, f: &Formula) -> Result<Vec<bool>, EvalError> {
        truth_set(self, f)
    }

    fn obligatory(&self, consequent: &[bool], antecedent: &[bool]) -> bool {
        self.best(antecedent)
            .iter()
            .zip(consequent)
            .all(|(&b, &c)| !b || c)
    }
}

impl WorldFrame for PreferenceModel {
    const NAME: &'static str = "preference";

    fn num_worlds(&self) -> usize {
        self.worlds
    }

    fn atom(&self, name: &str) -> Vec<bool> {
        valuation_set(&self.valuation, self.worlds, name)
    }

    fn modal(&self, f: &Formula, args: &[Vec<bool>]) -> Result<Vec<bool>, EvalError> {
        let n = self.worlds;
        let top = vec![true; n];
        let neg = |s: &[bool]| -> Vec<bool> { s.iter().map(|b| !b).collect() };
        let value = match f {
            Formula::Nec(_) => args[0].iter().all(|&b| b),
            Formula::Poss(_) => args[0].iter().any(|&b| b),
            Formula::ObC(..) => self.obligatory(&args[0], &args[1]),
            Formula::PermC(..) => !self.obligatory(&neg(&args[0]), &args[1]),
            Formula::Ob(_) => self.obligatory(&args[0], &top),
            Formula::Perm(_) => !self.obligatory(&neg(&args[0]), &top),
            Formula::Forb(_) => self.obligatory(&neg(&args[0]), &top),
            other => {
                return Err(EvalError::LogicMismatch {
                    op: NodeKind::of(other),
                    model: Self::NAME,
                })
            }
        };
        Ok(vec![value; n])
    }
}

impl fmt::Display for PreferenceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model DDLE ({} worlds)", self.worlds)?;
        writeln!(
            f,
            "worlds: {}",
            fmt_set(&(0..self.worlds).collect::<Vec<_>>())
        )?;
        let mut pairs = Vec::new();
        for w in 0..self.worlds {
            for v in 0..self.worlds {
                if w != v && self.better[w][v] {
                    pairs.push(format!("w{w}>=w{v}"));
                }
            }
        }
        writeln!(
            f,
            "betterness: {}",
            if pairs.is_empty() {
                "-".into()
            } else {
                pairs.join(" ")
            }
        )?;
        let best = members(&self.best(&vec![true; self.worlds]));
        writeln!(f, "best: {}", fmt_set(&best))?;
        write_valuation(f, self.worlds, &self.valuation)
    }
}

/// Every preference model with `k` worlds over `atoms` (all total preorders
/// times all valuations). Intended for exhaustive checks at tiny sizes.
pub fn all_preference_models(k: usize, atoms: &[String]) -> Vec<PreferenceModel> {
    assert!(
        (1..=4).contains(&k) && k * atoms.len() <= 12,
        "enumeration too large"
    );
    // Total preorders correspond to rank functions onto 0..r without gaps.
    let mut rankings = Vec::new();
    let mut ranks = vec![0usize; k];
    loop {
        let max = ranks.iter().copied().max().unwrap_or(0);
        if (0..=max).all(|r| ranks.contains(&r)) {
            rankings.push(ranks.clone());
        }
        let mut i = 0;
        loop {
            if i == k {
                return expand(rankings, k, atoms);
            }
            ranks[i] += 1;
            if ranks[i] < k {
                break;
            }
            ranks[i] = 0;
            i += 1;
        }
    }
}

fn expand(rankings: Vec<Vec<usize>>, k: usize, atoms: &[String]) -> Vec<PreferenceModel> {
    let mut out = Vec::new();
    for r in rankings {
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
            out.push(
                PreferenceModel::from_ranks(&r, valuation).expect("ranks give a total preorder"),
            );
        }
    }
    out
}
