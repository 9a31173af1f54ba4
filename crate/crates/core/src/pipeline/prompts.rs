//! Prompt templates, one data file per (logic, stage) pair.

use super::feedback::Feedback;
use crate::formula::LogicId;
use crate::parser::ProblemDoc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Syntax,
    Formalize,
    Sketch,
    Refine,
}

impl Stage {
    pub const ALL: [Stage; 4] = [
        Stage::Syntax,
        Stage::Formalize,
        Stage::Sketch,
        Stage::Refine,
    ];
}

macro_rules! templates {
    ($($logic:ident => $dir:literal),*) => {
        pub fn template(logic: LogicId, stage: Stage) -> &'static str {
            match (logic, stage) {
                $(
                    (LogicId::$logic, Stage::Syntax) => include_str!(concat!("../../prompts/", $dir, "/syntax.txt")),
                    (LogicId::$logic, Stage::Formalize) => include_str!(concat!("../../prompts/", $dir, "/formalize.txt")),
                    (LogicId::$logic, Stage::Sketch) => include_str!(concat!("../../prompts/", $dir, "/sketch.txt")),
                    (LogicId::$logic, Stage::Refine) => include_str!(concat!("../../prompts/", $dir, "/refine.txt")),
                )*
            }
        }
    };
}

templates!(Fol => "fol", Kd => "kd", Ddle => "ddle", DdlCj => "ddl_cj");

pub const GRAMMAR: &str = "\
~f  f & g  f | g  f -> g  f <-> g  true  false
forall x. f   exists x. f   Name(c1, ..., cn)          (FOL only)
O(f)  P(f)  F(f)                                       (KD, DDLE, DDL_CJ)
O(g|f)  P(g|f)  Box f  Dia f                           (DDLE, DDL_CJ)
BoxA f  BoxP f  Oa f  Op f                             (DDL_CJ)";

const REPLY_FORMAT: &str = "\
Reply with a single fenced block containing one formula per line, each line prefixed by
`premise:`, `step:` or `goal:` (exactly one goal, steps in explanation order).";

/// Replaces `{{name}}` placeholders.
pub fn render(template: &str, vars: &[(&str, &str)]) -> String {
    let mut out = template.to_string();
    for (k, v) in vars {
        out = out.replace(&format!("{{{{{k}}}}}"), v);
    }
    out
}

/// The full request for one formalization round.
pub fn build_prompt(problem: &ProblemDoc, logic: LogicId, feedback: Option<&Feedback>) -> String {
    let explanation: Vec<String> = problem
        .explanation
        .iter()
        .enumerate()
        .map(|(i, e)| format!("{}. {e}", i + 1))
        .collect();
    let explanation = explanation.join("\n");
    let feedback_text = feedback.map(|f| f.guidance.clone()).unwrap_or_default();
    let vars = [
        ("premise", problem.premise.as_str()),
        ("hypothesis", problem.hypothesis.as_str()),
        ("explanation", explanation.as_str()),
        ("grammar", GRAMMAR),
        ("feedback", feedback_text.as_str()),
    ];
    let mut parts = vec![
        render(template(logic, Stage::Syntax), &vars),
        render(template(logic, Stage::Formalize), &vars),
        render(template(logic, Stage::Sketch), &vars),
    ];
    if feedback.is_some() {
        parts.push(render(template(logic, Stage::Refine), &vars));
    }
    parts.push(REPLY_FORMAT.to_string());
    parts.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_template_is_present_and_distinct() {
        for logic in LogicId::ALL {
            for stage in Stage::ALL {
                assert!(!template(logic, stage).trim().is_empty());
            }
        }
        assert_ne!(
            template(LogicId::Kd, Stage::Formalize),
            template(LogicId::Fol, Stage::Formalize)
        );
    }

    #[test]
    fn placeholders_are_filled() {
        let doc = crate::parser::parse_problem(
            r#"{"id":"x","domain":"classical","premise":"All men are mortal.","hypothesis":"h.","explanation":["e."]}"#,
        )
        .unwrap();
        let p = build_prompt(&doc, LogicId::Fol, None);
        assert!(p.contains("All men are mortal."));
        assert!(!p.contains("{{"));
        assert!(p.contains("goal:"));
    }
}
