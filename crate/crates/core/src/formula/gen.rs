use rand::Rng;

use super::{Formula, LogicId, Term};

/// Shape limits for randomly generated formulas.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub atoms: usize,
    pub max_depth: usize,
    pub max_modal_depth: usize,
    /// Constants available to first-order formulas.
    pub constants: usize,
    /// `(name, arity)` of first-order predicates.
    pub predicates: Vec<(String, usize)>,
    pub allow_constants: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            atoms: 3,
            max_depth: 4,
            max_modal_depth: 2,
            constants: 3,
            predicates: vec![("A".into(), 1), ("B".into(), 2)],
            allow_constants: true,
        }
    }
}

pub fn atom_name(i: usize) -> String {
    const NAMES: [&str; 8] = ["p", "q", "r", "s", "u", "v", "w", "z"];
    NAMES
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("a{i}"))
}

pub fn constant_name(i: usize) -> String {
    format!("c{i}")
}

/// Draws a formula well formed for `logic`. Variables are named after their
/// binding depth, so generated formulas never shadow.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, logic: LogicId, cfg: &GenConfig) -> Formula {
    let mut g = Gen {
        rng,
        logic,
        cfg,
        bound: Vec::new(),
    };
    g.formula(cfg.max_depth, cfg.max_modal_depth)
}

/// KD formula over `atoms` atoms with modal depth at most `modal_depth`.
pub fn random_kd_formula<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: usize,
    modal_depth: usize,
    depth: usize,
) -> Formula {
    let cfg = GenConfig {
        atoms,
        max_depth: depth,
        max_modal_depth: modal_depth,
        allow_constants: false,
        ..GenConfig::default()
    };
    random_formula(rng, LogicId::Kd, &cfg)
}

struct Gen<'a, R: Rng + ?Sized> {
    rng: &'a mut R,
    logic: LogicId,
    cfg: &'a GenConfig,
    bound: Vec<String>,
}

impl<R: Rng + ?Sized> Gen<'_, R> {
    fn leaf(&mut self) -> Formula {
        if self.cfg.allow_constants && self.rng.random_ratio(1, 12) {
            return if self.rng.random_bool(0.5) {
                Formula::Top
            } else {
                Formula::Bot
            };
        }
        match self.logic {
            LogicId::Fol => {
                let (name, arity) = self.cfg.predicates
                    [self.rng.random_range(0..self.cfg.predicates.len())]
                .clone();
                let args = (0..arity).map(|_| self.term()).collect();
                Formula::Pred(name, args)
            }
            _ => Formula::Atom(atom_name(self.rng.random_range(0..self.cfg.atoms.max(1)))),
        }
    }

    fn term(&mut self) -> Term {
        let consts = self.cfg.constants.max(1);
        let choices = consts + self.bound.len();
        let i = self.rng.random_range(0..choices);
        if i < consts {
            Term::Const(constant_name(i))
        } else {
            Term::Var(self.bound[i - consts].clone())
        }
    }

    fn modal(&mut self, depth: usize, modal: usize) -> Formula {
        let ops: &[u8] = match self.logic {
            LogicId::Fol => unreachable!(),
            LogicId::Kd => &[0, 1, 2],
            LogicId::Ddle => &[0, 1, 2, 3, 4, 5, 6],
            LogicId::DdlCj => &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        };
        let op = ops[self.rng.random_range(0..ops.len())];
        let a = self.formula(depth - 1, modal - 1);
        match op {
            0 => Formula::ob(a),
            1 => Formula::perm(a),
            2 => Formula::forb(a),
            3 => Formula::nec(a),
            4 => Formula::poss(a),
            5 => Formula::ob_c(a, self.formula(depth - 1, modal - 1)),
            6 => Formula::perm_c(a, self.formula(depth - 1, modal - 1)),
            7 => Formula::nec_actual(a),
            8 => Formula::nec_potential(a),
            9 => Formula::ob_actual(a),
            _ => Formula::ob_potential(a),
        }
    }

    fn formula(&mut self, depth: usize, modal: usize) -> Formula {
        if depth == 0 {
            return self.leaf();
        }
        let roll = self.rng.random_range(0..100);
        let can_modal = modal > 0 && self.logic != LogicId::Fol;
        let can_quantify = self.logic == LogicId::Fol && self.bound.len() < 2;
        match roll {
            0..=19 => self.leaf(),
            20..=31 => Formula::not(self.formula(depth - 1, modal)),
            32..=69 => {
                let a = self.formula(depth - 1, modal);
                let b = self.formula(depth - 1, modal);
                match self.rng.random_range(0..9) {
                    0..=2 => Formula::and(a, b),
                    3..=5 => Formula::or(a, b),
                    6..=7 => Formula::implies(a, b),
                    _ => Formula::iff(a, b),
                }
            }
            _ if can_modal => self.modal(depth, modal),
            _ if can_quantify => {
                let v = format!("x{}", self.bound.len());
                self.bound.push(v.clone());
                let body = self.formula(depth - 1, modal);
                self.bound.pop();
                if self.rng.random_bool(0.5) {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
            _ => self.leaf(),
        }
    }
}
