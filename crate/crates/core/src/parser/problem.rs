use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::{Map, Value};

use super::formula::{parse_formula, parse_formula_list};
use super::{ErrorCategory, ParseError};
use crate::formula::{as_text, Formula, LogicId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Classical,
    Commonsense,
    Default,
    Modalities,
    Bioethics,
}

impl Domain {
    pub const ALL: [Domain; 5] = [
        Domain::Classical,
        Domain::Commonsense,
        Domain::Default,
        Domain::Modalities,
        Domain::Bioethics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Domain::Classical => "classical",
            Domain::Commonsense => "commonsense",
            Domain::Default => "default",
            Domain::Modalities => "modalities",
            Domain::Bioethics => "bioethics",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Domain::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| format!("unknown domain tag `{s}`"))
    }
}

/// A hand-authored formalization of a case in one logic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldFormalization {
    #[serde(serialize_with = "as_text::vec::serialize")]
    pub theory: Vec<Formula>,
    #[serde(serialize_with = "as_text::vec::serialize")]
    pub steps: Vec<Formula>,
    #[serde(serialize_with = "as_text::serialize")]
    pub goal: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProblemDoc {
    pub id: String,
    pub domain: Domain,
    pub premise: String,
    pub hypothesis: String,
    pub explanation: Vec<String>,
    #[serde(
        skip_serializing_if = "BTreeMap::is_empty",
        serialize_with = "gold_by_name"
    )]
    pub gold: BTreeMap<LogicId, GoldFormalization>,
}

fn gold_by_name<S: Serializer>(
    gold: &BTreeMap<LogicId, GoldFormalization>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let named: BTreeMap<&str, &GoldFormalization> =
        gold.iter().map(|(k, v)| (k.name(), v)).collect();
    named.serialize(s)
}

impl ProblemDoc {
    /// The premise split into sentences at `.`, `!` or `?` followed by
    /// whitespace or the end of the text.
    pub fn premise_sentences(&self) -> Vec<&str> {
        let text = self.premise.trim();
        let bytes = text.as_bytes();
        let mut out = Vec::new();
        let mut start = 0;
        for (i, &b) in bytes.iter().enumerate() {
            let terminal = matches!(b, b'.' | b'!' | b'?');
            let boundary = bytes.get(i + 1).map_or(true, |n| n.is_ascii_whitespace());
            if terminal && boundary {
                let s = text[start..=i].trim();
                if !s.is_empty() {
                    out.push(s);
                }
                start = i + 1;
            }
        }
        let rest = text[start..].trim();
        if !rest.is_empty() {
            out.push(rest);
        }
        out
    }

    pub fn gold_for(&self, logic: LogicId) -> Option<&GoldFormalization> {
        self.gold.get(&logic)
    }
}

fn structural(message: impl Into<String>, doc_len: usize) -> ParseError {
    let mut e = ParseError::new(ErrorCategory::Grammar, message, (0, doc_len));
    e.prefix_end = 0;
    e
}

fn json_error(err: serde_json::Error, doc: &str) -> ParseError {
    // serde_json reports 1-based line and column; translate to a byte offset.
    let line = err.line().max(1);
    let offset: usize = doc
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum::<usize>()
        + err.column().saturating_sub(1);
    let at = offset.min(doc.len());
    let mut e = ParseError::new(
        ErrorCategory::Lexical,
        format!("malformed document: {err}"),
        (at, at),
    );
    e.prefix_end = at;
    e
}

/// Parses a document holding exactly one case: either a single object or a
/// one-element array.
pub fn parse_problem(doc: &str) -> Result<ProblemDoc, ParseError> {
    let mut all = parse_problems(doc)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        n => Err(structural(
            format!("expected exactly one case, found {n}"),
            doc.len(),
        )),
    }
}

/// Parses a problem file: a JSON array of case objects, a single object, or
/// one object per line.
pub fn parse_problems(doc: &str) -> Result<Vec<ProblemDoc>, ParseError> {
    let trimmed = doc.trim_start();
    let values: Vec<Value> = if trimmed.starts_with('[') {
        match serde_json::from_str::<Value>(doc).map_err(|e| json_error(e, doc))? {
            Value::Array(items) => items,
            _ => unreachable!(),
        }
    } else if trimmed.starts_with('{') && serde_json::from_str::<Value>(doc).is_ok() {
        vec![serde_json::from_str(doc).map_err(|e| json_error(e, doc))?]
    } else {
        let mut items = Vec::new();
        let mut offset = 0;
        for line in doc.split_inclusive('\n') {
            if !line.trim().is_empty() {
                let v = serde_json::from_str::<Value>(line).map_err(|e| {
                    let mut pe = json_error(e, line);
                    pe.span = (pe.span.0 + offset, pe.span.1 + offset);
                    pe.prefix_end += offset;
                    pe
                })?;
                items.push(v);
            }
            offset += line.len();
        }
        items
    };
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            problem_from_value(v).map_err(|mut e| {
                if e.field.is_none() {
                    e.span = (0, doc.len());
                    e.prefix_end = 0;
                }
                e.field = Some(match e.field.take() {
                    Some(f) => format!("[{i}].{f}"),
                    None => format!("[{i}]"),
                });
                e
            })
        })
        .collect()
}

fn field_str(obj: &Map<String, Value>, key: &str) -> Result<String, ParseError> {
    match obj.get(key) {
        None => Err(structural(format!("missing field `{key}`"), 0)),
        Some(Value::String(s)) => Ok(s.clone()),
        Some(_) => Err(structural(format!("field `{key}` must be a string"), 0)),
    }
}

fn field_str_list(obj: &Map<String, Value>, key: &str) -> Result<Vec<String>, ParseError> {
    match obj.get(key) {
        None => Err(structural(format!("missing field `{key}`"), 0)),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::String(s) => Ok(s.clone()),
                _ => Err(structural(
                    format!("field `{key}` must contain only strings"),
                    0,
                )),
            })
            .collect(),
        Some(_) => Err(structural(
            format!("field `{key}` must be an array of strings"),
            0,
        )),
    }
}

fn problem_from_value(v: &Value) -> Result<ProblemDoc, ParseError> {
    let Value::Object(obj) = v else {
        return Err(structural("each case must be an object", 0));
    };
    let id = field_str(obj, "id")?;
    let domain_tag = field_str(obj, "domain")?;
    let domain = domain_tag.parse::<Domain>().map_err(|m| structural(m, 0))?;
    let premise = field_str(obj, "premise")?;
    let hypothesis = field_str(obj, "hypothesis")?;
    let explanation = field_str_list(obj, "explanation")?;
    if explanation.is_empty() {
        return Err(structural("explanation must be non-empty", 0));
    }
    let mut gold = BTreeMap::new();
    match obj.get("gold") {
        None | Some(Value::Null) => {}
        Some(Value::Object(entries)) => {
            for (key, entry) in entries {
                let logic = key
                    .parse::<LogicId>()
                    .map_err(|e| structural(e.to_string(), 0).in_field(format!("gold.{key}")))?;
                let Value::Object(entry) = entry else {
                    return Err(structural("gold entry must be an object", 0)
                        .in_field(format!("gold.{key}")));
                };
                let prefix = format!("gold.{}", logic.name());
                let at = |e: ParseError, f: &str| {
                    if e.field.is_some() {
                        e
                    } else {
                        e.in_field(format!("{prefix}.{f}"))
                    }
                };
                let theory_src = field_str_list(entry, "theory").map_err(|e| at(e, "theory"))?;
                let steps_src = field_str_list(entry, "steps").map_err(|e| at(e, "steps"))?;
                let goal_src = field_str(entry, "goal").map_err(|e| at(e, "goal"))?;
                let theory = parse_formula_list(&theory_src, logic, &format!("{prefix}.theory"))?;
                let steps = parse_formula_list(&steps_src, logic, &format!("{prefix}.steps"))?;
                let goal = parse_formula(&goal_src, logic)
                    .map_err(|e| e.in_field(format!("{prefix}.goal")))?;
                gold.insert(
                    logic,
                    GoldFormalization {
                        theory,
                        steps,
                        goal,
                    },
                );
            }
        }
        Some(_) => return Err(structural("field `gold` must be an object", 0)),
    }
    Ok(ProblemDoc {
        id,
        domain,
        premise,
        hypothesis,
        explanation,
        gold,
    })
}

/// Renders cases back into the problem-file format.
pub fn render_problems(docs: &[ProblemDoc]) -> String {
    serde_json::to_string_pretty(docs).expect("problem documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const CASE: &str = r#"[{
        "id": "t1",
        "domain": "classical",
        "premise": "It rains. Streets get wet when it rains.",
        "hypothesis": "The streets are wet.",
        "explanation": ["Rain makes streets wet."],
        "gold": {"KD": {"theory": ["rain"], "steps": ["rain -> wet"], "goal": "wet"}}
    }]"#;

    #[test]
    fn reads_case_and_gold() {
        let docs = parse_problems(CASE).unwrap();
        assert_eq!(docs.len(), 1);
        let d = &docs[0];
        assert_eq!(d.domain, Domain::Classical);
        assert_eq!(d.premise_sentences().len(), 2);
        let g = d.gold_for(LogicId::Kd).unwrap();
        assert_eq!(g.goal, Formula::atom("wet"));
    }

    #[test]
    fn empty_explanation_rejected() {
        let doc = CASE.replace(r#"["Rain makes streets wet."]"#, "[]");
        let e = parse_problems(&doc).unwrap_err();
        assert_eq!(e.message, "explanation must be non-empty");
    }

    #[test]
    fn unknown_domain_and_missing_field() {
        let e = parse_problems(&CASE.replace("classical", "poetry")).unwrap_err();
        assert!(e.message.contains("unknown domain tag"));
        let e = parse_problems(&CASE.replace(r#""hypothesis""#, r#""hyp""#)).unwrap_err();
        assert_eq!(e.message, "missing field `hypothesis`");
    }

    #[test]
    fn embedded_formula_error_has_field_path() {
        let e = parse_problems(&CASE.replace("rain -> wet", "rain ->")).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("[0].gold.KD.steps[0]"));
        assert_eq!(e.category, ErrorCategory::Grammar);
        let e = parse_problems(&CASE.replace(r#""goal": "wet""#, r#""goal": "O(wet|rain)""#))
            .unwrap_err();
        assert_eq!(e.category, ErrorCategory::SignatureViolation);
        assert_eq!(e.field.as_deref(), Some("[0].gold.KD.goal"));
    }

    #[test]
    fn malformed_json_is_located() {
        let e = parse_problems("[{\"id\": }]").unwrap_err();
        assert_eq!(e.category, ErrorCategory::Lexical);
        assert!(e.span.0 <= 10);
    }

    #[test]
    fn line_per_case_and_render_round_trip() {
        let docs = parse_problems(CASE).unwrap();
        let one_line = serde_json::to_string(&docs[0]).unwrap();
        let jsonl = format!("{one_line}\n{}\n", one_line.replace("t1", "t2"));
        let back = parse_problems(&jsonl).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0], docs[0]);
        assert_eq!(parse_problems(&render_problems(&docs)).unwrap(), docs);
    }
}
