//! The refinement loop: formalize, check consistency, localize the failed
//! step, turn the failure into feedback, and formalize again.

mod feedback;
mod formalizer;
pub mod prompts;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::formula::{Formula, LogicId};
use crate::parser::{Domain, ErrorCategory, ParseError, ProblemDoc};
use crate::prover::{
    check_consistency, locate_failed_step, Localization, LocateOutcome, ProverConfig, ProverError,
    StepRole, Verdict,
};

pub use feedback::{build_feedback, failure_pattern, Feedback, FeedbackInput, FeedbackKind};
pub use formalizer::{
    parse_reply, render_block, FormalizeError, Formalizer, FormalizerKind, FormalizerSpec,
    GapInjectingMock, Gateway, GoldMock, RemoteFormalizer, KEY_VAR, URL_VAR,
};

/// Formulas produced for one case in one logic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Formalization {
    pub logic: LogicId,
    #[serde(serialize_with = "crate::formula::as_text::vec::serialize")]
    pub theory: Vec<Formula>,
    #[serde(serialize_with = "crate::formula::as_text::vec::serialize")]
    pub steps: Vec<Formula>,
    #[serde(with = "crate::formula::as_text")]
    pub goal: Formula,
    /// The formalizer's text payload.
    pub raw: String,
}

/// How solving time is measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimingMode {
    /// Wall-clock milliseconds.
    #[default]
    Wall,
    /// Search effort converted at [`EFFORT_UNITS_PER_MS`]; reproducible
    /// across machines and runs.
    Effort,
}

pub const EFFORT_UNITS_PER_MS: f64 = 1000.0;

/// Effort budget per check used by [`RunConfig::deterministic`].
pub const DETERMINISTIC_EFFORT: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Refinement budget: at most `t` re-formalizations after the first.
    pub t: usize,
    pub prover: ProverConfig,
    /// Wall-clock budget per case (ignored in effort timing).
    pub case_budget: Option<Duration>,
    pub timing: TimingMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            t: 3,
            prover: ProverConfig::default(),
            case_budget: Some(Duration::from_secs(60)),
            timing: TimingMode::Wall,
        }
    }
}

impl RunConfig {
    /// Effort budgets only, no deadlines: outcomes depend only on inputs.
    pub fn deterministic() -> Self {
        RunConfig {
            t: 3,
            prover: ProverConfig::deterministic(DETERMINISTIC_EFFORT),
            case_budget: None,
            timing: TimingMode::Effort,
        }
    }

    fn measure(&self, elapsed_ms: f64, effort: u64) -> f64 {
        match self.timing {
            TimingMode::Wall => elapsed_ms,
            TimingMode::Effort => effort as f64 / EFFORT_UNITS_PER_MS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseStatus {
    Verified,
    VerifiedUpToBound,
    Failed,
    SyntacticError,
    Inconsistent,
    Timeout,
}

impl CaseStatus {
    pub fn name(self) -> &'static str {
        match self {
            CaseStatus::Verified => "verified",
            CaseStatus::VerifiedUpToBound => "verified-up-to-bound",
            CaseStatus::Failed => "failed",
            CaseStatus::SyntacticError => "syntactic-error",
            CaseStatus::Inconsistent => "inconsistent",
            CaseStatus::Timeout => "timeout",
        }
    }

    pub fn is_success(self) -> bool {
        matches!(self, CaseStatus::Verified | CaseStatus::VerifiedUpToBound)
    }
}

impl std::fmt::Display for CaseStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationTrace {
    pub iteration: usize,
    pub formalization: Option<Formalization>,
    pub syntax_error: Option<ParseError>,
    pub consistency: Option<Verdict>,
    pub localization: Option<LocateOutcome>,
    pub feedback: Option<Feedback>,
    /// Prover time of this iteration (consistency plus localization).
    pub solving_ms: f64,
}

impl IterationTrace {
    fn new(iteration: usize) -> Self {
        IterationTrace {
            iteration,
            formalization: None,
            syntax_error: None,
            consistency: None,
            localization: None,
            feedback: None,
            solving_ms: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseOutcome {
    pub case_id: String,
    pub logic: LogicId,
    pub formalizer: String,
    pub domain: Domain,
    /// Number of refinements performed (0 when the first formalization
    /// verifies).
    pub iterations_used: usize,
    pub status: CaseStatus,
    pub iterations: Vec<IterationTrace>,
    /// Prover time summed over iterations.
    pub solving_time_ms: f64,
    pub error_category: Option<ErrorCategory>,
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Formalizer(#[from] FormalizeError),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

/// Runs one case through the loop. Each iteration performs, in order:
/// formalization, consistency of premises plus steps, step localization,
/// and on failure feedback for the next round.
pub fn run_case(
    problem: &ProblemDoc,
    logic: LogicId,
    formalizer: &dyn Formalizer,
    formalizer_label: &str,
    cfg: &RunConfig,
) -> Result<CaseOutcome, PipelineError> {
    let start = Instant::now();
    let mut feedback: Option<Feedback> = None;
    let mut iterations = Vec::new();
    let mut status = CaseStatus::Failed;
    let mut error_category = None;
    for it in 0..=cfg.t {
        if cfg.timing == TimingMode::Wall && cfg.case_budget.is_some_and(|b| start.elapsed() >= b) {
            status = CaseStatus::Timeout;
            break;
        }
        let mut trace = IterationTrace::new(it);
        let formal = match formalizer.formalize(problem, logic, feedback.as_ref()) {
            Ok(f) => f,
            Err(FormalizeError::Syntax(e)) => {
                status = CaseStatus::SyntacticError;
                error_category = Some(e.category);
                let fb = build_feedback(FeedbackInput::Syntax(&e), logic);
                trace.syntax_error = Some(e);
                trace.feedback = Some(fb.clone());
                feedback = Some(fb);
                iterations.push(trace);
                continue;
            }
            Err(FormalizeError::Transport(e)) => {
                log::warn!("{}: formalizer transport failure: {e}", problem.id);
                status = CaseStatus::Timeout;
                iterations.push(trace);
                break;
            }
            Err(e) => return Err(e.into()),
        };
        error_category = None;
        let all: Vec<Formula> = formal.theory.iter().chain(&formal.steps).cloned().collect();
        trace.formalization = Some(formal);
        let cons = check_consistency(logic, &all, &cfg.prover)?;
        trace.solving_ms += cfg.measure(cons.elapsed_ms, cons.effort);
        trace.consistency = Some(cons.verdict);
        match cons.verdict {
            Verdict::Consistent => {}
            Verdict::Unknown if cons.budget_exhausted => {
                status = CaseStatus::Timeout;
                iterations.push(trace);
                break;
            }
            _ => {
                // Inconsistent, or no model within the bounds: either way no
                // entailment may be counted.
                status = CaseStatus::Inconsistent;
                let fb = build_feedback(FeedbackInput::Inconsistency(&cons), logic);
                trace.feedback = Some(fb.clone());
                feedback = Some(fb);
                iterations.push(trace);
                continue;
            }
        }
        let f = trace.formalization.as_ref().expect("set above");
        let mut loc = locate_failed_step(logic, &f.theory, &f.steps, &f.goal, &cfg.prover)?;
        if cfg.timing == TimingMode::Effort {
            for c in &mut loc.checks {
                c.elapsed_ms = cfg.measure(c.elapsed_ms, c.effort);
            }
        }
        trace.solving_ms += cfg.measure(loc.total_ms(), loc.total_effort());
        let done = match &loc.result {
            Localization::AllStepsEntailed => {
                status = if loc.fully_proved() {
                    CaseStatus::Verified
                } else {
                    CaseStatus::VerifiedUpToBound
                };
                true
            }
            Localization::Failed(report) => {
                status = CaseStatus::Failed;
                let fb = build_feedback(FeedbackInput::Step(report), logic);
                trace.feedback = Some(fb.clone());
                feedback = Some(fb);
                false
            }
            Localization::Undecided { .. } => {
                status = CaseStatus::Timeout;
                true
            }
        };
        trace.localization = Some(loc);
        iterations.push(trace);
        if done {
            break;
        }
    }
    let solving_time_ms = iterations.iter().map(|t| t.solving_ms).sum();
    Ok(CaseOutcome {
        case_id: problem.id.clone(),
        logic,
        formalizer: formalizer_label.to_string(),
        domain: problem.domain,
        iterations_used: iterations.len().saturating_sub(1),
        status,
        iterations,
        solving_time_ms,
        error_category,
    })
}

/// [`run_case`] with a formalizer built from `spec`.
pub fn run_case_with(
    problem: &ProblemDoc,
    logic: LogicId,
    spec: &FormalizerSpec,
    cfg: &RunConfig,
) -> Result<CaseOutcome, PipelineError> {
    let f = spec.build()?;
    run_case(problem, logic, f.as_ref(), spec.label(), cfg)
}

/// Convenience wrapper used by callers that only have a spec.
pub fn formalize(
    spec: &FormalizerSpec,
    problem: &ProblemDoc,
    logic: LogicId,
    feedback: Option<&Feedback>,
) -> Result<Formalization, FormalizeError> {
    spec.build()?.formalize(problem, logic, feedback)
}

impl CaseOutcome {
    /// Structured-text trace of every iteration.
    pub fn render_trace(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "case: {}", self.case_id);
        let _ = writeln!(s, "logic: {}", self.logic);
        let _ = writeln!(s, "formalizer: {}", self.formalizer);
        let _ = writeln!(s, "domain: {}", self.domain);
        let _ = writeln!(s, "status: {}", self.status);
        let _ = writeln!(s, "iterations_used: {}", self.iterations_used);
        let _ = writeln!(s, "solving_time_ms: {:.3}", self.solving_time_ms);
        if let Some(c) = self.error_category {
            let _ = writeln!(s, "error_category: {c}");
        }
        for it in &self.iterations {
            let _ = writeln!(s, "== iteration {} ==", it.iteration);
            if let Some(e) = &it.syntax_error {
                let _ = writeln!(s, "syntax error: {e}");
            }
            if let Some(f) = &it.formalization {
                let _ = writeln!(s, "formalization:");
                for l in render_block(&f.theory, &f.steps, &f.goal)
                    .lines()
                    .filter(|l| !l.starts_with("```"))
                {
                    let _ = writeln!(s, "  {l}");
                }
            }
            if let Some(v) = it.consistency {
                let _ = writeln!(s, "consistency: {v}");
            }
            if let Some(loc) = &it.localization {
                let _ = writeln!(s, "checks:");
                let n_steps = it.formalization.as_ref().map_or(0, |f| f.steps.len());
                for c in &loc.checks {
                    let what = if c.index == n_steps {
                        "hypothesis".to_string()
                    } else {
                        format!("step {}", c.index + 1)
                    };
                    let role = match c.role {
                        StepRole::Bridge => "bridge",
                        StepRole::Claim => "claim",
                    };
                    let verdict = c.verdict.map_or("assumed".to_string(), |v| v.to_string());
                    let _ = writeln!(s, "  {what} [{role}] {verdict}");
                }
                let _ = writeln!(
                    s,
                    "result: {}",
                    match &loc.result {
                        Localization::AllStepsEntailed => "all steps entailed".to_string(),
                        Localization::Failed(r) => format!("failed at index {}", r.failed_index),
                        Localization::Undecided { index } => format!("undecided at index {index}"),
                    }
                );
            }
            let _ = writeln!(s, "solving_ms: {:.3}", it.solving_ms);
            if let Some(fb) = &it.feedback {
                let kind = serde_json::to_value(fb.kind)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default();
                let _ = writeln!(s, "feedback ({kind}):");
                for l in fb.guidance.lines() {
                    let _ = writeln!(s, "  {l}");
                }
            }
        }
        s
    }
}
