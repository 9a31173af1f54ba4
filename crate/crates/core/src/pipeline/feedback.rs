use serde::Serialize;

use crate::formula::{Formula, LogicId};
use crate::parser::ParseError;
use crate::prover::{StepReport, VerdictCertificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeedbackKind {
    MissingBridge,
    Inconsistency,
    Syntax,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Feedback {
    pub kind: FeedbackKind,
    pub failed_step: Option<StepReport>,
    pub countermodel_text: Option<String>,
    pub guidance: String,
}

/// What went wrong in the latest iteration.
pub enum FeedbackInput<'a> {
    Step(&'a StepReport),
    Inconsistency(&'a VerdictCertificate),
    Syntax(&'a ParseError),
}

/// The logic-specific phrasing of a failed derivation.
pub fn failure_pattern(logic: LogicId, failed: &Formula) -> String {
    match logic {
        LogicId::Fol => format!("Missing premise about {}", focus_predicate(failed)),
        LogicId::Kd => "Modal Axiom not satisfied: O(phi) -> P(phi)".to_string(),
        LogicId::Ddle | LogicId::DdlCj => {
            "Conditional norm not detachable: phi & O(psi|phi)".to_string()
        }
    }
}

/// First predicate (or atom) of `f` in reading order.
fn focus_predicate(f: &Formula) -> String {
    match f {
        Formula::Pred(name, _) | Formula::Atom(name) => name.clone(),
        _ => f
            .children()
            .into_iter()
            .map(focus_predicate)
            .find(|s| !s.is_empty())
            .unwrap_or_default(),
    }
}

pub fn build_feedback(input: FeedbackInput<'_>, logic: LogicId) -> Feedback {
    match input {
        FeedbackInput::Step(report) => {
            let dump = report.countermodel.dump();
            let guidance = format!(
                "{}.\nFailed formula: {}\n{}\nCountermodel:\n{}",
                failure_pattern(logic, &report.failed_formula),
                report.failed_formula.pretty(),
                report.message,
                dump
            );
            Feedback {
                kind: FeedbackKind::MissingBridge,
                failed_step: Some(report.clone()),
                countermodel_text: Some(dump),
                guidance,
            }
        }
        FeedbackInput::Inconsistency(cert) => {
            let mut guidance = format!(
                "The premises and explanation are jointly inconsistent ({}), so every conclusion would follow vacuously. \
                 Remove or weaken a contradictory statement.",
                cert.verdict
            );
            if let Some(note) = &cert.note {
                guidance.push_str(&format!("\nDetail: {note}"));
            }
            Feedback {
                kind: FeedbackKind::Inconsistency,
                failed_step: None,
                countermodel_text: None,
                guidance,
            }
        }
        FeedbackInput::Syntax(e) => Feedback {
            kind: FeedbackKind::Syntax,
            failed_step: None,
            countermodel_text: None,
            guidance: format!("Syntax error: {e}. Use only the surface grammar for {logic}."),
        },
    }
}
