use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use super::cj::cj_constraint_table;
use super::fol::{ground_atom_name, ground_formula};
use super::{CjModel, Consequence, EvalError, FolInterp, KripkeModel, Model, PreferenceModel};
use crate::formula::{well_formed, Formula, LogicId};
use crate::sat::{Assignment, Circuit, Cnf, Lit};

/// What the encoding asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncodeMode {
    /// A model of the theory.
    Consistency,
    /// A model of the theory in which the goal fails.
    Refutation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncodeOptions {
    pub consequence: Consequence,
    /// Require every world to have a successor (KD). Clearing it yields
    /// plain K frames.
    pub serial: bool,
}

impl EncodeOptions {
    pub fn for_logic(logic: LogicId) -> EncodeOptions {
        EncodeOptions {
            consequence: Consequence::default_for(logic),
            serial: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("bound {k} exceeds the maximum {max} for {logic}")]
    BoundTooLarge {
        logic: LogicId,
        k: usize,
        max: usize,
    },
    #[error("bound must be at least 1")]
    ZeroBound,
    #[error("refutation mode needs a goal")]
    MissingGoal,
    #[error("formula `{formula}` is not well formed for {logic}: {message}")]
    IllFormed {
        logic: LogicId,
        formula: String,
        message: String,
    },
    #[error("grounding failed: {0}")]
    Ground(#[from] EvalError),
}

/// Largest world bound accepted per logic. Carmo–Jones models are capped at
/// three worlds because `ob` ranges over pairs of world sets.
pub fn max_bound(logic: LogicId) -> usize {
    match logic {
        LogicId::DdlCj => 3,
        _ => 5,
    }
}

/// Maps satisfying assignments of an encoding back to models.
#[derive(Clone, Debug)]
pub struct Decoder {
    logic: LogicId,
    k: usize,
    consequence: Consequence,
    atoms: BTreeMap<String, Vec<Lit>>,
    goal: Option<Vec<Lit>>,
    structure: Structure,
}

#[derive(Clone, Debug)]
enum Structure {
    Kripke {
        r: Vec<Vec<Lit>>,
    },
    Pref {
        b: Vec<Vec<Lit>>,
    },
    Cj {
        av: Vec<Vec<Lit>>,
        pv: Vec<Vec<Lit>>,
        ob: Vec<Vec<Lit>>,
    },
    Fol {
        domain: Vec<String>,
        arities: BTreeMap<String, usize>,
    },
}

impl Decoder {
    pub fn logic(&self) -> LogicId {
        self.logic
    }

    pub fn bound(&self) -> usize {
        self.k
    }

    pub fn consequence(&self) -> Consequence {
        self.consequence
    }

    pub fn decode(&self, a: &Assignment) -> Model {
        let k = self.k;
        let valuation = || -> BTreeMap<String, Vec<usize>> {
            self.atoms
                .iter()
                .map(|(name, lits)| (name.clone(), (0..k).filter(|&w| a.lit(lits[w])).collect()))
                .collect()
        };
        match &self.structure {
            Structure::Kripke { r } => {
                let access = r
                    .iter()
                    .map(|row| (0..k).filter(|&v| a.lit(row[v])).collect())
                    .collect();
                Model::Kripke(
                    KripkeModel::new(k, access, valuation())
                        .expect("decoded Kripke model in range"),
                )
            }
            Structure::Pref { b } => {
                let better = b
                    .iter()
                    .map(|row| row.iter().map(|&l| a.lit(l)).collect())
                    .collect();
                Model::Preference(
                    PreferenceModel::new(k, better, valuation())
                        .expect("encoding enforces a total preorder"),
                )
            }
            Structure::Cj { av, pv, ob } => {
                let mask = |row: &Vec<Lit>| {
                    (0..k)
                        .filter(|&v| a.lit(row[v]))
                        .fold(0u32, |m, v| m | 1 << v)
                };
                let mut pairs = BTreeSet::new();
                for (x, row) in ob.iter().enumerate() {
                    for (y, &l) in row.iter().enumerate() {
                        if a.lit(l) {
                            pairs.insert((x as u32, y as u32));
                        }
                    }
                }
                Model::CarmoJones(CjModel {
                    worlds: k,
                    av: av.iter().map(mask).collect(),
                    pv: pv.iter().map(mask).collect(),
                    ob: pairs,
                    valuation: valuation(),
                })
            }
            Structure::Fol { domain, arities } => {
                let mut relations: BTreeMap<String, BTreeSet<Vec<String>>> = BTreeMap::new();
                for (p, &n) in arities {
                    let entry = relations.entry(p.clone()).or_default();
                    for tuple in tuples(domain, n) {
                        let name = ground_atom_name(p, &tuple);
                        if self.atoms.get(&name).is_some_and(|l| a.lit(l[0])) {
                            entry.insert(tuple);
                        }
                    }
                }
                Model::Fol(
                    FolInterp::new(domain.clone(), arities.clone(), relations)
                        .expect("decoded interpretation"),
                )
            }
        }
    }

    /// In refutation mode, the first world at which the goal is false.
    pub fn failing_world(&self, a: &Assignment) -> Option<usize> {
        let goal = self.goal.as_ref()?;
        match self.consequence {
            Consequence::Local => (!a.lit(goal[0])).then_some(0),
            Consequence::Global => (0..goal.len()).find(|&w| !a.lit(goal[w])),
        }
    }
}

fn tuples(domain: &[String], n: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                domain.iter().map(move |d| {
                    let mut t = t.clone();
                    t.push(d.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Encodes "a model of `logic` with exactly `k` worlds satisfies `theory`
/// (and, in refutation mode, falsifies `goal`)" as CNF, using the per-logic
/// default options.
pub fn encode_bounded(
    logic: LogicId,
    theory: &[Formula],
    mode: EncodeMode,
    goal: Option<&Formula>,
    k: usize,
) -> Result<(Cnf, Decoder), EncodeError> {
    encode_bounded_with(
        logic,
        theory,
        mode,
        goal,
        k,
        &EncodeOptions::for_logic(logic),
    )
}

/// As [`encode_bounded`] with explicit options.
///
/// For FOL the domain consists of the constants named in theory and goal
/// (or a fresh `c0` if there are none), padded with fresh elements up to `k`.
pub fn encode_bounded_with(
    logic: LogicId,
    theory: &[Formula],
    mode: EncodeMode,
    goal: Option<&Formula>,
    k: usize,
    opts: &EncodeOptions,
) -> Result<(Cnf, Decoder), EncodeError> {
    if k == 0 {
        return Err(EncodeError::ZeroBound);
    }
    let max = max_bound(logic);
    if k > max {
        return Err(EncodeError::BoundTooLarge { logic, k, max });
    }
    let goal = match (mode, goal) {
        (EncodeMode::Refutation, None) => return Err(EncodeError::MissingGoal),
        (EncodeMode::Refutation, Some(g)) => Some(g),
        (EncodeMode::Consistency, _) => None,
    };
    for f in theory.iter().chain(goal) {
        let report = well_formed(f, logic);
        if let Some(v) = report.violations.first() {
            return Err(EncodeError::IllFormed {
                logic,
                formula: f.pretty(),
                message: v.to_string(),
            });
        }
    }
    if logic == LogicId::Fol {
        return encode_fol(theory, goal, k);
    }
    let mut enc = ModalEncoder::new(logic, k, opts);
    let consequence = opts.consequence;
    for f in theory {
        let v = enc.enc(f);
        match consequence {
            Consequence::Global => v.iter().for_each(|&l| enc.c.assert(l)),
            Consequence::Local => enc.c.assert(v[0]),
        }
    }
    let goal_lits = goal.map(|g| {
        let v = enc.enc(g);
        match consequence {
            Consequence::Global => {
                let fails = enc.c.or(v.iter().map(|&l| !l));
                enc.c.assert(fails);
            }
            Consequence::Local => enc.c.assert(!v[0]),
        }
        v.to_vec()
    });
    // Atoms of the goal and theory all appear in `enc.atoms` by now.
    let decoder = Decoder {
        logic,
        k,
        consequence,
        atoms: enc.atoms.clone(),
        goal: goal_lits,
        structure: enc.structure.clone(),
    };
    Ok((enc.c.into_cnf(), decoder))
}

fn encode_fol(
    theory: &[Formula],
    goal: Option<&Formula>,
    k: usize,
) -> Result<(Cnf, Decoder), EncodeError> {
    let mut consts = BTreeSet::new();
    let mut arities = BTreeMap::new();
    for f in theory.iter().chain(goal) {
        consts.extend(f.constants());
        for s in f.subformulas() {
            if let Formula::Pred(p, args) = s {
                arities.insert(p.clone(), args.len());
            }
        }
    }
    let mut domain: Vec<String> = consts.into_iter().collect();
    let mut fresh = 0;
    while domain.len() < k.max(1) {
        let name = format!("c{fresh}");
        fresh += 1;
        if !domain.contains(&name) {
            domain.push(name);
        }
    }
    let mut c = Circuit::new();
    let mut atoms: BTreeMap<String, Vec<Lit>> = BTreeMap::new();
    // Every ground atom gets a variable so decoded relations are total.
    for (p, &n) in &arities {
        for t in tuples(&domain, n) {
            let l = c.fresh();
            atoms.insert(ground_atom_name(p, &t), vec![l]);
        }
    }
    for f in theory {
        let g = ground_formula(f, &domain)?;
        let l = prop(&mut c, &atoms, &g);
        c.assert(l);
    }
    let goal_lits = match goal {
        Some(g) => {
            let g = ground_formula(g, &domain)?;
            let l = prop(&mut c, &atoms, &g);
            c.assert(!l);
            Some(vec![l])
        }
        None => None,
    };
    let decoder = Decoder {
        logic: LogicId::Fol,
        k: domain.len(),
        consequence: Consequence::Global,
        atoms,
        goal: goal_lits,
        structure: Structure::Fol { domain, arities },
    };
    Ok((c.into_cnf(), decoder))
}

fn prop(c: &mut Circuit, atoms: &BTreeMap<String, Vec<Lit>>, f: &Formula) -> Lit {
    match f {
        Formula::Top => c.tru(),
        Formula::Bot => c.fals(),
        Formula::Atom(n) => atoms[n][0],
        Formula::Not(a) => !prop(c, atoms, a),
        Formula::And(a, b) => {
            let (a, b) = (prop(c, atoms, a), prop(c, atoms, b));
            c.and([a, b])
        }
        Formula::Or(a, b) => {
            let (a, b) = (prop(c, atoms, a), prop(c, atoms, b));
            c.or([a, b])
        }
        Formula::Impl(a, b) => {
            let (a, b) = (prop(c, atoms, a), prop(c, atoms, b));
            c.implies(a, b)
        }
        Formula::Iff(a, b) => {
            let (a, b) = (prop(c, atoms, a), prop(c, atoms, b));
            c.iff(a, b)
        }
        other => unreachable!("grounding leaves only propositional nodes, found {other:?}"),
    }
}

struct ModalEncoder<'a> {
    c: Circuit,
    k: usize,
    structure: Structure,
    atoms: BTreeMap<String, Vec<Lit>>,
    cache: HashMap<&'a Formula, Rc<Vec<Lit>>>,
}

impl<'a> ModalEncoder<'a> {
    fn new(logic: LogicId, k: usize, opts: &EncodeOptions) -> ModalEncoder<'a> {
        let mut c = Circuit::new();
        let square = |c: &mut Circuit| -> Vec<Vec<Lit>> {
            (0..k)
                .map(|_| (0..k).map(|_| c.fresh()).collect())
                .collect()
        };
        let structure = match logic {
            LogicId::Kd => {
                let r = square(&mut c);
                if opts.serial {
                    for row in &r {
                        c.add_clause(row.iter().copied());
                    }
                }
                Structure::Kripke { r }
            }
            LogicId::Ddle => {
                let mut b = square(&mut c);
                for (w, row) in b.iter_mut().enumerate() {
                    row[w] = c.tru();
                }
                // Totality and transitivity over index pairs and triples.
                #[allow(clippy::needless_range_loop)]
                for w in 0..k {
                    for v in w + 1..k {
                        c.add_clause([b[w][v], b[v][w]]);
                    }
                }
                for w in 0..k {
                    for v in 0..k {
                        for u in 0..k {
                            if w != v && v != u && w != u {
                                c.add_clause([!b[w][v], !b[v][u], b[w][u]]);
                            }
                        }
                    }
                }
                Structure::Pref { b }
            }
            LogicId::DdlCj => {
                let av = square(&mut c);
                let mut pv = square(&mut c);
                for (w, row) in pv.iter_mut().enumerate() {
                    row[w] = c.tru();
                }
                for w in 0..k {
                    c.add_clause(av[w].iter().copied());
                    for v in 0..k {
                        c.add_clause([!av[w][v], pv[w][v]]);
                    }
                }
                let sets = 1usize << k;
                let ob: Vec<Vec<Lit>> = (0..sets)
                    .map(|_| (0..sets).map(|_| c.fresh()).collect())
                    .collect();
                let full = (sets - 1) as u32;
                for constraint in cj_constraint_table() {
                    for cl in (constraint.ground)(full) {
                        let lits = cl
                            .pos
                            .iter()
                            .map(|&(x, y)| ob[x as usize][y as usize])
                            .chain(cl.neg.iter().map(|&(x, y)| !ob[x as usize][y as usize]));
                        c.add_clause(lits);
                    }
                }
                Structure::Cj { av, pv, ob }
            }
            LogicId::Fol => unreachable!("first-order formulas are grounded separately"),
        };
        ModalEncoder {
            c,
            k,
            structure,
            atoms: BTreeMap::new(),
            cache: HashMap::new(),
        }
    }

    fn enc(&mut self, f: &'a Formula) -> Rc<Vec<Lit>> {
        if let Some(v) = self.cache.get(f) {
            return v.clone();
        }
        let k = self.k;
        let out: Vec<Lit> = match f {
            Formula::Top => vec![self.c.tru(); k],
            Formula::Bot => vec![self.c.fals(); k],
            Formula::Atom(name) => {
                if !self.atoms.contains_key(name) {
                    let lits = (0..k).map(|_| self.c.fresh()).collect();
                    self.atoms.insert(name.clone(), lits);
                }
                self.atoms[name].clone()
            }
            Formula::Not(a) => self.enc(a).iter().map(|&l| !l).collect(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Impl(a, b) | Formula::Iff(a, b) => {
                let (x, y) = (self.enc(a), self.enc(b));
                (0..k)
                    .map(|w| match f {
                        Formula::And(..) => self.c.and([x[w], y[w]]),
                        Formula::Or(..) => self.c.or([x[w], y[w]]),
                        Formula::Impl(..) => self.c.implies(x[w], y[w]),
                        _ => self.c.iff(x[w], y[w]),
                    })
                    .collect()
            }
            _ => {
                let args: Vec<Rc<Vec<Lit>>> =
                    f.children().into_iter().map(|c| self.enc(c)).collect();
                self.modal(f, &args)
            }
        };
        let out = Rc::new(out);
        self.cache.insert(f, out.clone());
        out
    }

    fn modal(&mut self, f: &Formula, args: &[Rc<Vec<Lit>>]) -> Vec<Lit> {
        let k = self.k;
        let a = &args[0];
        let neg = |v: &[Lit]| -> Vec<Lit> { v.iter().map(|&l| !l).collect() };
        let top = vec![self.c.tru(); k];
        let structure = self.structure.clone();
        let c = &mut self.c;
        match (&structure, f) {
            (_, Formula::Nec(_)) => vec![c.and(a.iter().copied()); k],
            (_, Formula::Poss(_)) => vec![c.or(a.iter().copied()); k],
            (Structure::Kripke { r }, Formula::Ob(_)) => (0..k)
                .map(|w| {
                    let cl: Vec<Lit> = (0..k).map(|v| c.or([!r[w][v], a[v]])).collect();
                    c.and(cl)
                })
                .collect(),
            (Structure::Kripke { r }, Formula::Perm(_)) => (0..k)
                .map(|w| {
                    let cl: Vec<Lit> = (0..k).map(|v| c.and([r[w][v], a[v]])).collect();
                    c.or(cl)
                })
                .collect(),
            (Structure::Kripke { r }, Formula::Forb(_)) => (0..k)
                .map(|w| {
                    let cl: Vec<Lit> = (0..k).map(|v| c.or([!r[w][v], !a[v]])).collect();
                    c.and(cl)
                })
                .collect(),
            (Structure::Pref { .. } | Structure::Cj { .. }, _) => {
                let obl = |c: &mut Circuit, psi: &[Lit], phi: &[Lit]| -> Lit {
                    obligatory(c, &structure, k, psi, phi)
                };
                match f {
                    Formula::ObC(..) => vec![obl(c, a, &args[1]); k],
                    Formula::PermC(..) => vec![!obl(c, &neg(a), &args[1]); k],
                    Formula::Ob(_) => vec![obl(c, a, &top); k],
                    Formula::Perm(_) => vec![!obl(c, &neg(a), &top); k],
                    Formula::Forb(_) => vec![obl(c, &neg(a), &top); k],
                    Formula::NecActual(_)
                    | Formula::NecPotential(_)
                    | Formula::ObActual(_)
                    | Formula::ObPotential(_) => {
                        let Structure::Cj { av, pv, ob } = &structure else {
                            unreachable!("well-formedness excludes actual/potential operators outside DDL_CJ")
                        };
                        let versions = if matches!(f, Formula::NecActual(_) | Formula::ObActual(_))
                        {
                            av
                        } else {
                            pv
                        };
                        if matches!(f, Formula::NecActual(_) | Formula::NecPotential(_)) {
                            (0..k)
                                .map(|w| {
                                    let cl: Vec<Lit> =
                                        (0..k).map(|v| c.or([!versions[w][v], a[v]])).collect();
                                    c.and(cl)
                                })
                                .collect()
                        } else {
                            let content = set_equalities(c, a);
                            (0..k)
                                .map(|w| {
                                    let context = set_equalities(c, &versions[w]);
                                    let mut options = Vec::new();
                                    for (x, &cx) in context.iter().enumerate() {
                                        for (y, &cy) in content.iter().enumerate() {
                                            options.push(c.and([cx, cy, ob[x][y]]));
                                        }
                                    }
                                    let in_ob = c.or(options);
                                    let open: Vec<Lit> =
                                        (0..k).map(|v| c.and([versions[w][v], !a[v]])).collect();
                                    let violable = c.or(open);
                                    c.and([in_ob, violable])
                                })
                                .collect()
                        }
                    }
                    other => unreachable!("operator {other:?} outside the conditional signatures"),
                }
            }
            (_, other) => unreachable!("operator {other:?} outside the KD signature"),
        }
    }
}

/// `eq[X]` is true iff the truth set given by `v` equals the world set `X`.
fn set_equalities(c: &mut Circuit, v: &[Lit]) -> Vec<Lit> {
    let k = v.len();
    (0..1usize << k)
        .map(|x| {
            let lits: Vec<Lit> = (0..k)
                .map(|w| if x >> w & 1 == 1 { v[w] } else { !v[w] })
                .collect();
            c.and(lits)
        })
        .collect()
}

/// Literal for "psi is obligatory given phi" (world independent).
fn obligatory(c: &mut Circuit, s: &Structure, k: usize, psi: &[Lit], phi: &[Lit]) -> Lit {
    match s {
        Structure::Pref { b } => {
            // best(phi) contains w iff phi holds at w and w is at least as
            // good as every phi-world.
            let mut conds = Vec::with_capacity(k);
            for w in 0..k {
                let dominated: Vec<Lit> = (0..k).map(|v| c.or([!phi[v], b[w][v]])).collect();
                let mut parts = dominated;
                parts.push(phi[w]);
                let best_w = c.and(parts);
                conds.push(c.or([!best_w, psi[w]]));
            }
            c.and(conds)
        }
        Structure::Cj { ob, .. } => {
            let ctx = set_equalities(c, phi);
            let content = set_equalities(c, psi);
            let mut options = Vec::new();
            for (x, &cx) in ctx.iter().enumerate() {
                for (y, &cy) in content.iter().enumerate() {
                    options.push(c.and([cx, cy, ob[x][y]]));
                }
            }
            c.or(options)
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Formula as F, Term};
    use crate::sat::{solve, verify, SolveOutcome};
    use crate::semantics::{eval, holds};

    fn p() -> F {
        F::atom("p")
    }

    fn run(
        logic: LogicId,
        theory: &[F],
        goal: Option<&F>,
        k: usize,
        opts: &EncodeOptions,
    ) -> Option<(Model, Option<usize>)> {
        let mode = if goal.is_some() {
            EncodeMode::Refutation
        } else {
            EncodeMode::Consistency
        };
        let (cnf, dec) = encode_bounded_with(logic, theory, mode, goal, k, opts).unwrap();
        match solve(&cnf) {
            SolveOutcome::Sat(a) => {
                assert!(verify(&cnf, &a).is_ok());
                Some((dec.decode(&a), dec.failing_world(&a)))
            }
            _ => None,
        }
    }

    #[test]
    fn axiom_d_has_no_serial_countermodel() {
        let opts = EncodeOptions::for_logic(LogicId::Kd);
        for k in 1..=4 {
            assert!(
                run(LogicId::Kd, &[F::ob(p())], Some(&F::perm(p())), k, &opts).is_none(),
                "k={k}"
            );
        }
    }

    #[test]
    fn without_seriality_axiom_d_fails() {
        let opts = EncodeOptions {
            serial: false,
            ..EncodeOptions::for_logic(LogicId::Kd)
        };
        let (m, w) = run(LogicId::Kd, &[F::ob(p())], Some(&F::perm(p())), 1, &opts).unwrap();
        let Model::Kripke(km) = &m else { panic!() };
        assert!(!km.is_serial());
        assert!(!eval(&m, w.unwrap(), &F::perm(p())).unwrap());
    }

    #[test]
    fn factual_detachment_fails_in_ddle() {
        let (phi, psi) = (F::atom("phi"), F::atom("psi"));
        let theory = [phi.clone(), F::ob_c(psi.clone(), phi.clone())];
        let goal = F::ob(psi.clone());
        let opts = EncodeOptions::for_logic(LogicId::Ddle);
        let (m, w) = run(LogicId::Ddle, &theory, Some(&goal), 2, &opts).unwrap();
        for t in &theory {
            assert!(holds(&m, t, Consequence::Local).unwrap());
        }
        assert!(!eval(&m, w.unwrap(), &goal).unwrap());
    }

    #[test]
    fn cj_consistency_witness_validates() {
        let theory = [
            F::ob_c(F::atom("q"), F::atom("p")),
            F::atom("p"),
            F::ob_actual(F::atom("q")),
        ];
        let opts = EncodeOptions::for_logic(LogicId::DdlCj);
        let (m, _) = run(LogicId::DdlCj, &theory, None, 2, &opts).unwrap();
        let Model::CarmoJones(cj) = &m else { panic!() };
        assert_eq!(cj.validate(), Ok(()));
        for t in &theory {
            assert!(holds(&m, t, Consequence::Local).unwrap());
        }
    }

    #[test]
    fn bounds_are_checked() {
        let e = encode_bounded(LogicId::DdlCj, &[], EncodeMode::Consistency, None, 4).unwrap_err();
        assert_eq!(
            e,
            EncodeError::BoundTooLarge {
                logic: LogicId::DdlCj,
                k: 4,
                max: 3
            }
        );
        assert_eq!(
            encode_bounded(LogicId::Kd, &[], EncodeMode::Consistency, None, 0).unwrap_err(),
            EncodeError::ZeroBound
        );
        assert!(matches!(
            encode_bounded(
                LogicId::Kd,
                &[F::ob_c(p(), p())],
                EncodeMode::Consistency,
                None,
                1
            ),
            Err(EncodeError::IllFormed { .. })
        ));
    }

    #[test]
    fn fol_syllogism_has_no_countermodel() {
        let x = || Term::Var("x".into());
        let s = || Term::Const("socrates".into());
        let theory = [
            F::forall(
                "x",
                F::implies(F::pred("Man", vec![x()]), F::pred("Mortal", vec![x()])),
            ),
            F::pred("Man", vec![s()]),
        ];
        let goal = F::pred("Mortal", vec![s()]);
        let opts = EncodeOptions::for_logic(LogicId::Fol);
        assert!(run(LogicId::Fol, &theory, Some(&goal), 1, &opts).is_none());
        let (m, _) = run(LogicId::Fol, &theory[..1], Some(&goal), 1, &opts).unwrap();
        assert!(!eval(&m, 0, &goal).unwrap());
    }
}
