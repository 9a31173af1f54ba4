//! Consistency and entailment checking, the KD tableau, Herbrand grounding
//! and failed-step localization.
//!
//! Every logic first sweeps the bounded model finder over its world bounds.
//! A model found there is re-checked by direct evaluation before it is
//! reported. What happens when no model turns up depends on the logic:
//! KD hands the question to the tableau, which is complete; FOL grounding is
//! complete by construction; the conditional logics can only report that
//! the claim holds up to the bound.

mod ground;
mod steps;
mod tableau;

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::formula::{well_formed, Formula, LogicId, NodeKind};
use crate::sat::{solve_with, Limits, SolveOutcome};
use crate::semantics::{
    encode_bounded_with, eval, holds, max_bound, Consequence, EncodeError, EncodeMode,
    EncodeOptions, EvalError, Model,
};

pub use ground::{ground_fol, GroundTheory};
pub use steps::{
    locate_failed_step, step_role, Localization, LocateOutcome, StepCheck, StepReport, StepRole,
};
pub use tableau::{kd_tableau, kd_tableau_with, TableauLimits, TableauOutcome, TableauTrace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Proved by a complete procedure (KD tableau or FOL grounding).
    Entailed,
    /// No countermodel within the searched bounds; not a proof.
    EntailedUpToBound,
    Refuted,
    Inconsistent,
    Consistent,
    /// Budget exhausted, or no decision procedure could settle the question.
    Unknown,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Entailed => "entailed",
            Verdict::EntailedUpToBound => "entailed-up-to-bound",
            Verdict::Refuted => "refuted",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Consistent => "consistent",
            Verdict::Unknown => "unknown",
        }
    }

    /// Entailed in either strength.
    pub fn is_positive(self) -> bool {
        matches!(self, Verdict::Entailed | Verdict::EntailedUpToBound)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictCertificate {
    pub verdict: Verdict,
    /// Countermodel (refuted) or witness (consistent).
    pub witness: Option<Model>,
    /// World of `witness` at which the goal fails.
    pub failing_world: Option<usize>,
    pub proof: Option<TableauTrace>,
    pub bounds_searched: Vec<usize>,
    pub elapsed_ms: f64,
    /// Solver decisions and propagations plus tableau expansions.
    pub effort: u64,
    pub note: Option<String>,
    /// The verdict is `Unknown` because a time or effort budget ran out.
    pub budget_exhausted: bool,
}

impl VerdictCertificate {
    fn new(verdict: Verdict) -> Self {
        VerdictCertificate {
            verdict,
            witness: None,
            failing_world: None,
            proof: None,
            bounds_searched: Vec::new(),
            elapsed_ms: 0.0,
            effort: 0,
            note: None,
            budget_exhausted: false,
        }
    }

    /// Human-readable rendering: verdict, bounds, then witness or proof.
    pub fn render(&self) -> String {
        let mut out = format!("verdict: {}\n", self.verdict);
        let bounds: Vec<String> = self.bounds_searched.iter().map(|k| k.to_string()).collect();
        out.push_str(&format!("bounds searched: [{}]\n", bounds.join(", ")));
        out.push_str(&format!("effort: {}\n", self.effort));
        if let Some(n) = &self.note {
            out.push_str(&format!("note: {n}\n"));
        }
        if let Some(w) = self.failing_world {
            out.push_str(&format!("goal fails at: w{w}\n"));
        }
        if let Some(m) = &self.witness {
            out.push_str(&m.dump());
        }
        if let Some(p) = &self.proof {
            out.push_str(&format!(
                "tableau closed ({} nodes expanded)\n",
                p.nodes_expanded
            ));
            for l in &p.lines {
                out.push_str(&format!("  {l}\n"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProverError {
    #[error("operator {0:?} is not part of KD")]
    NotKd(NodeKind),
    #[error("search budget exhausted after {effort} steps")]
    Budget { effort: u64 },
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("formula `{formula}` is not well formed for {logic}: {message}")]
    IllFormed {
        logic: LogicId,
        formula: String,
        message: String,
    },
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("decoded model failed re-evaluation: {0}")]
    UnconfirmedWitness(String),
}

/// Search budgets and bounds shared by all checks.
#[derive(Clone, Debug, PartialEq)]
pub struct ProverConfig {
    /// World bounds to sweep; `None` uses [`default_bounds`].
    pub bounds: Option<Vec<usize>>,
    /// Wall-clock budget per check. `None` disables the deadline, which makes
    /// verdicts independent of machine speed.
    pub check_budget: Option<Duration>,
    /// Effort budget per check (solver decisions + propagations + tableau
    /// expansions).
    pub max_effort: Option<u64>,
    /// Overrides the per-logic consequence reading.
    pub consequence: Option<Consequence>,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            bounds: None,
            check_budget: Some(Duration::from_secs(5)),
            max_effort: None,
            consequence: None,
        }
    }
}

impl ProverConfig {
    /// No deadline, a fixed effort budget: results depend only on inputs.
    pub fn deterministic(max_effort: u64) -> Self {
        ProverConfig {
            check_budget: None,
            max_effort: Some(max_effort),
            ..ProverConfig::default()
        }
    }

    pub fn bounds_for(&self, logic: LogicId) -> Vec<usize> {
        self.bounds.clone().unwrap_or_else(|| default_bounds(logic))
    }

    pub fn consequence_for(&self, logic: LogicId) -> Consequence {
        if logic == LogicId::Fol {
            return Consequence::Global;
        }
        self.consequence
            .unwrap_or_else(|| Consequence::default_for(logic))
    }
}

/// World bounds swept by default: 1..=4, or 1..=3 for DDL_CJ. FOL has a
/// single Herbrand domain, so its "bound" is just 1.
pub fn default_bounds(logic: LogicId) -> Vec<usize> {
    match logic {
        LogicId::Fol => vec![1],
        LogicId::DdlCj => (1..=max_bound(logic)).collect(),
        _ => (1..=4).collect(),
    }
}

struct Budget {
    start: Instant,
    deadline: Option<Instant>,
    max_effort: Option<u64>,
    spent: u64,
}

impl Budget {
    fn new(cfg: &ProverConfig) -> Budget {
        let start = Instant::now();
        Budget {
            start,
            deadline: cfg.check_budget.map(|d| start + d),
            max_effort: cfg.max_effort,
            spent: 0,
        }
    }

    fn limits(&self) -> Limits {
        Limits {
            max_effort: self.max_effort.map(|m| m.saturating_sub(self.spent)),
            deadline: self.deadline,
        }
    }

    fn tableau(&self) -> TableauLimits {
        let left = self.max_effort.map(|m| m.saturating_sub(self.spent));
        TableauLimits {
            max_nodes: left.unwrap_or(TableauLimits::default().max_nodes),
            deadline: self.deadline,
        }
    }

    fn finish(&self, mut c: VerdictCertificate) -> VerdictCertificate {
        c.elapsed_ms = self.start.elapsed().as_secs_f64() * 1000.0;
        c.effort = self.spent;
        c
    }
}

fn check_formulas<'a>(
    logic: LogicId,
    fs: impl IntoIterator<Item = &'a Formula>,
) -> Result<(), ProverError> {
    for f in fs {
        if let Some(v) = well_formed(f, logic).violations.first() {
            return Err(ProverError::IllFormed {
                logic,
                formula: f.pretty(),
                message: v.to_string(),
            });
        }
    }
    Ok(())
}

/// Confirms by evaluation that `model` satisfies the theory and, when a goal
/// is given, falsifies it; returns the failing world.
fn confirm(
    model: &Model,
    theory: &[Formula],
    goal: Option<&Formula>,
    consequence: Consequence,
) -> Result<Option<usize>, ProverError> {
    if let Model::CarmoJones(m) = model {
        m.validate()
            .map_err(|e| ProverError::UnconfirmedWitness(e.join("; ")))?;
    }
    if let Model::Kripke(m) = model {
        if !m.is_serial() {
            return Err(ProverError::UnconfirmedWitness(
                "Kripke model is not serial".into(),
            ));
        }
    }
    for f in theory {
        if !holds(model, f, consequence)? {
            return Err(ProverError::UnconfirmedWitness(format!(
                "premise `{}` fails",
                f.pretty()
            )));
        }
    }
    let Some(g) = goal else { return Ok(None) };
    let worlds = match consequence {
        Consequence::Local => 0..1,
        Consequence::Global => 0..model.num_worlds(),
    };
    for w in worlds {
        if !eval(model, w, g)? {
            return Ok(Some(w));
        }
    }
    Err(ProverError::UnconfirmedWitness(format!(
        "goal `{}` holds everywhere",
        g.pretty()
    )))
}

enum Sweep {
    Found(Model),
    Exhausted,
    OutOfBudget,
}

fn sweep(
    logic: LogicId,
    theory: &[Formula],
    goal: Option<&Formula>,
    bounds: &[usize],
    consequence: Consequence,
    budget: &mut Budget,
    searched: &mut Vec<usize>,
) -> Result<Sweep, ProverError> {
    let mode = if goal.is_some() {
        EncodeMode::Refutation
    } else {
        EncodeMode::Consistency
    };
    let opts = EncodeOptions {
        consequence,
        serial: true,
    };
    for &k in bounds {
        let (cnf, dec) = encode_bounded_with(logic, theory, mode, goal, k, &opts)?;
        let (outcome, stats) = solve_with(&cnf, &budget.limits());
        budget.spent += stats.effort();
        searched.push(dec.bound());
        match outcome {
            SolveOutcome::Sat(a) => {
                log::debug!("{logic}: model at k={k}");
                return Ok(Sweep::Found(dec.decode(&a)));
            }
            SolveOutcome::Unsat => {}
            SolveOutcome::Timeout { .. } => return Ok(Sweep::OutOfBudget),
        }
    }
    Ok(Sweep::Exhausted)
}

/// Is `theory` satisfiable? Sat at any bound yields `Consistent` with a
/// witness. When every bound is unsatisfiable, KD asks the tableau and FOL
/// is settled by grounding (`Inconsistent`); the conditional logics report
/// `Unknown`.
pub fn check_consistency(
    logic: LogicId,
    theory: &[Formula],
    cfg: &ProverConfig,
) -> Result<VerdictCertificate, ProverError> {
    check_formulas(logic, theory)?;
    let mut budget = Budget::new(cfg);
    let consequence = cfg.consequence_for(logic);
    let bounds = cfg.bounds_for(logic);
    let mut searched = Vec::new();
    let swept = sweep(
        logic,
        theory,
        None,
        &bounds,
        consequence,
        &mut budget,
        &mut searched,
    )?;
    let mut cert = match swept {
        Sweep::Found(m) => {
            confirm(&m, theory, None, consequence)?;
            let mut c = VerdictCertificate::new(Verdict::Consistent);
            c.witness = Some(m);
            c
        }
        Sweep::OutOfBudget => out_of_budget("budget exhausted during bounded search"),
        Sweep::Exhausted => match logic {
            LogicId::Fol => VerdictCertificate::new(Verdict::Inconsistent),
            LogicId::Kd => {
                let (globals, goal) = kd_reduction(theory, &Formula::Bot, consequence);
                match run_tableau(&globals, &goal, &mut budget)? {
                    None => out_of_budget("budget exhausted in the tableau"),
                    Some(TableauOutcome::Valid(trace)) => {
                        let mut c = VerdictCertificate::new(Verdict::Inconsistent);
                        c.proof = Some(trace);
                        c
                    }
                    Some(TableauOutcome::Refuted(m)) => {
                        let m = Model::Kripke(m);
                        confirm(&m, theory, None, consequence)?;
                        let mut c = VerdictCertificate::new(Verdict::Consistent);
                        c.witness = Some(m);
                        c
                    }
                }
            }
            _ => unknown(&format!(
                "no model with at most {} worlds",
                bounds.iter().max().unwrap_or(&0)
            )),
        },
    };
    cert.bounds_searched = searched;
    Ok(budget.finish(cert))
}

/// Does `theory` entail `goal`? See the module docs for how each logic
/// decides.
pub fn check_entailment(
    logic: LogicId,
    theory: &[Formula],
    goal: &Formula,
    cfg: &ProverConfig,
) -> Result<VerdictCertificate, ProverError> {
    check_formulas(logic, theory.iter().chain([goal]))?;
    let mut budget = Budget::new(cfg);
    let consequence = cfg.consequence_for(logic);
    let bounds = cfg.bounds_for(logic);
    let mut searched = Vec::new();
    let swept = sweep(
        logic,
        theory,
        Some(goal),
        &bounds,
        consequence,
        &mut budget,
        &mut searched,
    )?;
    let mut cert = match swept {
        Sweep::Found(m) => refuted(m, theory, goal, consequence)?,
        Sweep::OutOfBudget => out_of_budget("budget exhausted during bounded search"),
        Sweep::Exhausted => match logic {
            LogicId::Fol => VerdictCertificate::new(Verdict::Entailed),
            LogicId::Kd => {
                let (globals, g) = kd_reduction(theory, goal, consequence);
                match run_tableau(&globals, &g, &mut budget)? {
                    None => out_of_budget("budget exhausted in the tableau"),
                    Some(TableauOutcome::Valid(trace)) => {
                        let mut c = VerdictCertificate::new(Verdict::Entailed);
                        c.proof = Some(trace);
                        c
                    }
                    Some(TableauOutcome::Refuted(m)) => {
                        refuted(Model::Kripke(m), theory, goal, consequence)?
                    }
                }
            }
            _ => {
                let mut c = VerdictCertificate::new(Verdict::EntailedUpToBound);
                c.note = Some(format!(
                    "no countermodel with at most {} worlds",
                    bounds.iter().max().unwrap_or(&0)
                ));
                c
            }
        },
    };
    cert.bounds_searched = searched;
    Ok(budget.finish(cert))
}

fn refuted(
    m: Model,
    theory: &[Formula],
    goal: &Formula,
    consequence: Consequence,
) -> Result<VerdictCertificate, ProverError> {
    let w = confirm(&m, theory, Some(goal), consequence)?;
    let mut c = VerdictCertificate::new(Verdict::Refuted);
    c.witness = Some(m);
    c.failing_world = w;
    Ok(c)
}

fn unknown(note: &str) -> VerdictCertificate {
    let mut c = VerdictCertificate::new(Verdict::Unknown);
    c.note = Some(note.to_string());
    c
}

fn out_of_budget(note: &str) -> VerdictCertificate {
    let mut c = unknown(note);
    c.budget_exhausted = true;
    c
}

/// Global consequence keeps the theory as global assumptions; local
/// consequence folds it into the goal as an antecedent.
fn kd_reduction(
    theory: &[Formula],
    goal: &Formula,
    consequence: Consequence,
) -> (Vec<Formula>, Formula) {
    match consequence {
        Consequence::Global => (theory.to_vec(), goal.clone()),
        Consequence::Local => (
            Vec::new(),
            Formula::implies(Formula::conj(theory.iter().cloned()), goal.clone()),
        ),
    }
}

fn run_tableau(
    globals: &[Formula],
    goal: &Formula,
    budget: &mut Budget,
) -> Result<Option<TableauOutcome>, ProverError> {
    match kd_tableau_with(globals, goal, &budget.tableau()) {
        Ok((o, n)) => {
            budget.spent += n;
            Ok(Some(o))
        }
        Err(ProverError::Budget { effort }) => {
            budget.spent += effort;
            Ok(None)
        }
        Err(e) => Err(e),
    }
}
