use std::collections::{BTreeMap, HashMap};

use super::{Cnf, Lit};
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot translate non-propositional node: {0}")]
pub struct TseitinError(pub String);

/// Builder for definitional (Tseitin) encodings.
///
/// Variable 1 is reserved as the constant `true`. Gates are simplified
/// against constants and complementary inputs, and structurally identical
/// gates are shared, so encodings stay linear in the size of the circuit.
#[derive(Clone, Debug)]
pub struct Circuit {
    cnf: Cnf,
    and_gates: HashMap<Vec<Lit>, Lit>,
    iff_gates: HashMap<(Lit, Lit), Lit>,
}

impl Default for Circuit {
    fn default() -> Self {
        Circuit::new()
    }
}

impl Circuit {
    pub fn new() -> Circuit {
        let mut cnf = Cnf::new();
        let t = cnf.new_var();
        cnf.add_clause([Lit::pos(t)]);
        Circuit {
            cnf,
            and_gates: HashMap::new(),
            iff_gates: HashMap::new(),
        }
    }

    pub fn tru(&self) -> Lit {
        Lit::pos(1)
    }

    pub fn fals(&self) -> Lit {
        Lit::neg(1)
    }

    pub fn constant(&self, b: bool) -> Lit {
        if b {
            self.tru()
        } else {
            self.fals()
        }
    }

    pub fn fresh(&mut self) -> Lit {
        Lit::pos(self.cnf.new_var())
    }

    pub fn num_vars(&self) -> u32 {
        self.cnf.num_vars
    }

    pub fn and(&mut self, inputs: impl IntoIterator<Item = Lit>) -> Lit {
        let (t, f) = (self.tru(), self.fals());
        let mut xs: Vec<Lit> = Vec::new();
        for l in inputs {
            if l == f {
                return f;
            }
            if l != t {
                xs.push(l);
            }
        }
        xs.sort_by_key(|l| (l.var(), !l.is_positive()));
        xs.dedup();
        if xs.windows(2).any(|w| w[0].var() == w[1].var()) {
            return f;
        }
        match xs.len() {
            0 => t,
            1 => xs[0],
            _ => {
                if let Some(&g) = self.and_gates.get(&xs) {
                    return g;
                }
                let g = self.fresh();
                for &x in &xs {
                    self.cnf.add_clause([!g, x]);
                }
                self.cnf
                    .add_clause(std::iter::once(g).chain(xs.iter().map(|&x| !x)));
                self.and_gates.insert(xs, g);
                g
            }
        }
    }

    pub fn or(&mut self, inputs: impl IntoIterator<Item = Lit>) -> Lit {
        let negated: Vec<Lit> = inputs.into_iter().map(|l| !l).collect();
        !self.and(negated)
    }

    pub fn implies(&mut self, a: Lit, b: Lit) -> Lit {
        self.or([!a, b])
    }

    pub fn iff(&mut self, a: Lit, b: Lit) -> Lit {
        let (t, f) = (self.tru(), self.fals());
        if a == b {
            return t;
        }
        if a == !b {
            return f;
        }
        for (x, y) in [(a, b), (b, a)] {
            if x == t {
                return y;
            }
            if x == f {
                return !y;
            }
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&g) = self.iff_gates.get(&key) {
            return g;
        }
        let g = self.fresh();
        self.cnf.add_clause([!g, !a, b]);
        self.cnf.add_clause([!g, a, !b]);
        self.cnf.add_clause([g, a, b]);
        self.cnf.add_clause([g, !a, !b]);
        self.iff_gates.insert(key, g);
        g
    }

    /// Constrains `l` to be true.
    pub fn assert(&mut self, l: Lit) {
        if l != self.tru() {
            self.cnf.add_clause([l]);
        }
    }

    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit>) {
        let t = self.tru();
        let f = self.fals();
        let lits: Vec<Lit> = lits.into_iter().filter(|&l| l != f).collect();
        if lits.contains(&t) {
            return;
        }
        self.cnf.add_clause(lits);
    }

    pub fn cnf(&self) -> &Cnf {
        &self.cnf
    }

    pub fn into_cnf(self) -> Cnf {
        self.cnf
    }
}

/// Translates a propositional formula into an equisatisfiable CNF, returning
/// the variable chosen for each atom.
pub fn tseitin(f: &Formula) -> Result<(Cnf, BTreeMap<String, u32>), TseitinError> {
    let mut c = Circuit::new();
    let mut atoms = BTreeMap::new();
    let root = encode(&mut c, &mut atoms, f)?;
    c.assert(root);
    Ok((c.into_cnf(), atoms))
}

fn encode(
    c: &mut Circuit,
    atoms: &mut BTreeMap<String, u32>,
    f: &Formula,
) -> Result<Lit, TseitinError> {
    Ok(match f {
        Formula::Top => c.tru(),
        Formula::Bot => c.fals(),
        Formula::Atom(name) => match atoms.get(name) {
            Some(&v) => Lit::pos(v),
            None => {
                let l = c.fresh();
                atoms.insert(name.clone(), l.var());
                l
            }
        },
        Formula::Not(a) => !encode(c, atoms, a)?,
        Formula::And(a, b) => {
            let (a, b) = (encode(c, atoms, a)?, encode(c, atoms, b)?);
            c.and([a, b])
        }
        Formula::Or(a, b) => {
            let (a, b) = (encode(c, atoms, a)?, encode(c, atoms, b)?);
            c.or([a, b])
        }
        Formula::Impl(a, b) => {
            let (a, b) = (encode(c, atoms, a)?, encode(c, atoms, b)?);
            c.implies(a, b)
        }
        Formula::Iff(a, b) => {
            let (a, b) = (encode(c, atoms, a)?, encode(c, atoms, b)?);
            c.iff(a, b)
        }
        other => return Err(TseitinError(other.pretty())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::{solve, SolveOutcome};

    #[test]
    fn contradiction_is_unsat() {
        let p = Formula::atom("p");
        let (cnf, _) = tseitin(&Formula::and(p.clone(), Formula::not(p))).unwrap();
        assert!(solve(&cnf).is_unsat());
    }

    #[test]
    fn single_atom_is_true_in_witness() {
        let (cnf, atoms) = tseitin(&Formula::atom("p")).unwrap();
        match solve(&cnf) {
            SolveOutcome::Sat(a) => assert!(a.value(atoms["p"])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn modal_nodes_are_rejected() {
        assert!(tseitin(&Formula::ob(Formula::atom("p"))).is_err());
    }

    #[test]
    fn gates_simplify_constants() {
        let mut c = Circuit::new();
        let x = c.fresh();
        assert_eq!(c.and([x, c.tru()]), x);
        assert_eq!(c.and([x, !x]), c.fals());
        assert_eq!(c.or([x, c.tru()]), c.tru());
        assert_eq!(c.iff(x, c.fals()), !x);
        let y = c.fresh();
        let g1 = c.and([x, y]);
        assert_eq!(c.and([y, x]), g1);
    }
}
