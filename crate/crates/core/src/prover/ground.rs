use std::collections::{BTreeMap, BTreeSet};

use super::{check_formulas, ProverError};
use crate::formula::{Formula, LogicId};
use crate::semantics::{ground_atom_name, ground_formula};

/// A first-order problem expanded over its Herbrand domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTheory {
    pub domain: Vec<String>,
    pub theory: Vec<Formula>,
    pub goal: Option<Formula>,
    /// Propositional atom name to the predicate instance it stands for.
    pub atoms: BTreeMap<String, (String, Vec<String>)>,
}

/// Expands quantifiers over the constants of `theory` and `goal` (or a single
/// fresh `c0` when there are none). Constants denote distinct elements and
/// nothing else exists, so entailment over this domain is exactly
/// propositional entailment of the grounding.
pub fn ground_fol(theory: &[Formula], goal: Option<&Formula>) -> Result<GroundTheory, ProverError> {
    check_formulas(LogicId::Fol, theory.iter().chain(goal))?;
    let mut domain: BTreeSet<String> = BTreeSet::new();
    for f in theory.iter().chain(goal) {
        domain.extend(f.constants());
    }
    if domain.is_empty() {
        domain.insert("c0".to_string());
    }
    let domain: Vec<String> = domain.into_iter().collect();
    let ground = |f: &Formula| ground_formula(f, &domain).map_err(ProverError::from);
    let theory = theory.iter().map(ground).collect::<Result<Vec<_>, _>>()?;
    let goal = goal.map(ground).transpose()?;
    let mut atoms = BTreeMap::new();
    let originals = theory.iter().chain(goal.as_ref());
    for f in originals {
        for a in f.atoms() {
            atoms.entry(a.clone()).or_insert_with(|| split_atom(&a));
        }
    }
    Ok(GroundTheory {
        domain,
        theory,
        goal,
        atoms,
    })
}

fn split_atom(a: &str) -> (String, Vec<String>) {
    let (name, rest) = a
        .split_once('(')
        .expect("ground atoms carry an argument list");
    let args = rest.trim_end_matches(')');
    let args = if args.is_empty() {
        Vec::new()
    } else {
        args.split(',').map(str::to_string).collect()
    };
    debug_assert_eq!(ground_atom_name(name, &args), a);
    (name.to_string(), args)
}
