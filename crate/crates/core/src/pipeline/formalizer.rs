use std::str::FromStr;
use std::sync::{Arc, Condvar, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::feedback::{Feedback, FeedbackKind};
use super::prompts::build_prompt;
use super::Formalization;
use crate::formula::{Formula, LogicId};
use crate::parser::{parse_formula, ErrorCategory, ParseError, ProblemDoc};
use crate::prover::{step_role, StepRole};

pub const URL_VAR: &str = "LOGIPARAM_LLM_URL";
pub const KEY_VAR: &str = "LOGIPARAM_LLM_KEY";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormalizerKind {
    RemoteLlm,
    GoldMock,
    GapInjectingMock,
}

impl FormalizerKind {
    pub fn name(self) -> &'static str {
        match self {
            FormalizerKind::RemoteLlm => "remote-llm",
            FormalizerKind::GoldMock => "gold-mock",
            FormalizerKind::GapInjectingMock => "gap-injecting-mock",
        }
    }
}

impl FromStr for FormalizerKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "remote-llm" | "remote" => Ok(FormalizerKind::RemoteLlm),
            "gold-mock" | "gold" => Ok(FormalizerKind::GoldMock),
            "gap-injecting-mock" | "gap-mock" | "gap" => Ok(FormalizerKind::GapInjectingMock),
            other => Err(format!("unknown formalizer `{other}` (expected remote-llm, gold-mock or gap-injecting-mock)")),
        }
    }
}

/// Which formalizer to use and how to configure it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalizerSpec {
    pub kind: FormalizerKind,
    /// Remote endpoint; falls back to `LOGIPARAM_LLM_URL`.
    #[serde(default)]
    pub endpoint: Option<String>,
    #[serde(default)]
    pub model: Option<String>,
    /// 1-based gold step withheld by the gap-injecting mock; by default the
    /// last bridge step.
    #[serde(default)]
    pub gap_step: Option<usize>,
    #[serde(default = "default_in_flight")]
    pub max_in_flight: usize,
    #[serde(default = "default_retries")]
    pub retries: u32,
}

fn default_in_flight() -> usize {
    2
}

fn default_retries() -> u32 {
    2
}

impl FormalizerSpec {
    pub fn new(kind: FormalizerKind) -> Self {
        FormalizerSpec {
            kind,
            endpoint: None,
            model: None,
            gap_step: None,
            max_in_flight: default_in_flight(),
            retries: default_retries(),
        }
    }

    pub fn gold() -> Self {
        Self::new(FormalizerKind::GoldMock)
    }

    pub fn gap(step: Option<usize>) -> Self {
        FormalizerSpec {
            gap_step: step,
            ..Self::new(FormalizerKind::GapInjectingMock)
        }
    }

    pub fn label(&self) -> &'static str {
        self.kind.name()
    }

    pub fn requires_gold(&self) -> bool {
        self.kind != FormalizerKind::RemoteLlm
    }

    pub fn build(&self) -> Result<Arc<dyn Formalizer>, FormalizeError> {
        Ok(match self.kind {
            FormalizerKind::GoldMock => Arc::new(GoldMock),
            FormalizerKind::GapInjectingMock => Arc::new(GapInjectingMock {
                gap_step: self.gap_step,
            }),
            FormalizerKind::RemoteLlm => Arc::new(RemoteFormalizer::from_spec(self)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormalizeError {
    #[error("syntactic error: {0}")]
    Syntax(ParseError),
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("case {id} has no gold formalization for {logic}")]
    MissingGold { id: String, logic: LogicId },
    #[error("formalizer configuration: {0}")]
    Config(String),
}

/// Maps a case to formulas of the requested logic, optionally taking the
/// previous iteration's feedback into account.
pub trait Formalizer: Send + Sync {
    fn formalize(
        &self,
        problem: &ProblemDoc,
        logic: LogicId,
        feedback: Option<&Feedback>,
    ) -> Result<Formalization, FormalizeError>;
}

/// Renders formulas as the fenced block formalizers reply with.
pub fn render_block(theory: &[Formula], steps: &[Formula], goal: &Formula) -> String {
    let mut out = String::from("```logic\n");
    for f in theory {
        out.push_str(&format!("premise: {}\n", f.pretty()));
    }
    for f in steps {
        out.push_str(&format!("step: {}\n", f.pretty()));
    }
    out.push_str(&format!("goal: {}\n```\n", goal.pretty()));
    out
}

/// Parses the first fenced block of a reply: one `premise:`, `step:` or
/// `goal:` line per formula, blank lines and `#` comments ignored.
pub fn parse_reply(reply: &str, logic: LogicId) -> Result<Formalization, ParseError> {
    let missing = |msg: &str| {
        ParseError::new(ErrorCategory::Grammar, msg, (0, reply.len())).in_field("reply")
    };
    let start = reply
        .find("```")
        .ok_or_else(|| missing("reply has no fenced formula block"))?;
    let after = &reply[start + 3..];
    let body_start = after.find('\n').map(|i| i + 1).unwrap_or(after.len());
    let body = &after[body_start..];
    let end = body
        .find("```")
        .ok_or_else(|| missing("fenced block is not closed"))?;
    let (mut theory, mut steps, mut goal) = (Vec::new(), Vec::new(), None);
    for (n, line) in body[..end].lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = format!("reply line {}", n + 1);
        let Some((key, src)) = line.split_once(':') else {
            return Err(ParseError::new(
                ErrorCategory::Grammar,
                "expected `premise:`, `step:` or `goal:`",
                (0, line.len()),
            )
            .in_field(field));
        };
        let f = parse_formula(src.trim(), logic).map_err(|e| e.in_field(field.clone()))?;
        match key.trim() {
            "premise" => theory.push(f),
            "step" => steps.push(f),
            "goal" if goal.is_none() => goal = Some(f),
            "goal" => {
                return Err(ParseError::new(
                    ErrorCategory::Grammar,
                    "more than one goal",
                    (0, key.len()),
                )
                .in_field(field))
            }
            other => {
                return Err(ParseError::new(
                    ErrorCategory::Grammar,
                    format!("unknown line kind `{other}`"),
                    (0, other.len()),
                )
                .in_field(field))
            }
        }
    }
    let goal = goal.ok_or_else(|| missing("fenced block has no goal line"))?;
    Ok(Formalization {
        logic,
        theory,
        steps,
        goal,
        raw: reply.to_string(),
    })
}

/// Returns the case's gold formalization, passed through the reply parser.
pub struct GoldMock;

impl Formalizer for GoldMock {
    fn formalize(
        &self,
        problem: &ProblemDoc,
        logic: LogicId,
        _: Option<&Feedback>,
    ) -> Result<Formalization, FormalizeError> {
        let gold = problem
            .gold_for(logic)
            .ok_or_else(|| FormalizeError::MissingGold {
                id: problem.id.clone(),
                logic,
            })?;
        parse_reply(&render_block(&gold.theory, &gold.steps, &gold.goal), logic)
            .map_err(FormalizeError::Syntax)
    }
}

/// Withholds one gold step until feedback reports a missing bridge.
pub struct GapInjectingMock {
    pub gap_step: Option<usize>,
}

impl GapInjectingMock {
    /// 0-based index of the withheld step.
    pub fn gap_index(&self, steps: &[Formula]) -> Option<usize> {
        match self.gap_step {
            Some(s) => (s >= 1 && s <= steps.len()).then(|| s - 1),
            None => steps
                .iter()
                .rposition(|s| step_role(s) == StepRole::Bridge)
                .or_else(|| steps.len().checked_sub(1)),
        }
    }
}

impl Formalizer for GapInjectingMock {
    fn formalize(
        &self,
        problem: &ProblemDoc,
        logic: LogicId,
        feedback: Option<&Feedback>,
    ) -> Result<Formalization, FormalizeError> {
        let gold = problem
            .gold_for(logic)
            .ok_or_else(|| FormalizeError::MissingGold {
                id: problem.id.clone(),
                logic,
            })?;
        let restore = feedback.is_some_and(|f| f.kind == FeedbackKind::MissingBridge);
        let mut steps = gold.steps.clone();
        if !restore {
            if let Some(i) = self.gap_index(&steps) {
                steps.remove(i);
            }
        }
        parse_reply(&render_block(&gold.theory, &steps, &gold.goal), logic)
            .map_err(FormalizeError::Syntax)
    }
}

/// Caps the number of requests in flight across threads.
pub struct Gateway {
    max: usize,
    in_flight: Mutex<usize>,
    freed: Condvar,
}

pub struct Permit<'a>(&'a Gateway);

impl Gateway {
    pub fn new(max: usize) -> Gateway {
        Gateway {
            max: max.max(1),
            in_flight: Mutex::new(0),
            freed: Condvar::new(),
        }
    }

    pub fn acquire(&self) -> Permit<'_> {
        let mut n = self.in_flight.lock().unwrap_or_else(|e| e.into_inner());
        while *n >= self.max {
            n = self.freed.wait(n).unwrap_or_else(|e| e.into_inner());
        }
        *n += 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        let mut n = self.0.in_flight.lock().unwrap_or_else(|e| e.into_inner());
        *n -= 1;
        self.0.freed.notify_one();
    }
}

/// Chat-completion client: POSTs the rendered prompt and parses the first
/// fenced block of the reply.
pub struct RemoteFormalizer {
    endpoint: String,
    key: Option<String>,
    model: String,
    retries: u32,
    backoff: Duration,
    gateway: Gateway,
    agent: ureq::Agent,
}

impl RemoteFormalizer {
    pub fn from_spec(spec: &FormalizerSpec) -> Result<Self, FormalizeError> {
        let endpoint = match &spec.endpoint {
            Some(e) => e.clone(),
            None => std::env::var(URL_VAR)
                .map_err(|_| FormalizeError::Config(format!("{URL_VAR} is not set")))?,
        };
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(120)))
            .build();
        Ok(RemoteFormalizer {
            endpoint,
            key: std::env::var(KEY_VAR).ok(),
            model: spec.model.clone().unwrap_or_else(|| "gpt-4o".to_string()),
            retries: spec.retries,
            backoff: Duration::from_millis(500),
            gateway: Gateway::new(spec.max_in_flight),
            agent: ureq::Agent::new_with_config(config),
        })
    }

    fn request(&self, prompt: &str) -> Result<String, String> {
        let body = serde_json::json!({
            "model": self.model,
            "temperature": 0,
            "messages": [{ "role": "user", "content": prompt }],
        });
        let _permit = self.gateway.acquire();
        let mut req = self.agent.post(&self.endpoint);
        if let Some(k) = &self.key {
            req = req.header("Authorization", &format!("Bearer {k}"));
        }
        let mut resp = req.send_json(&body).map_err(|e| e.to_string())?;
        let v: serde_json::Value = resp.body_mut().read_json().map_err(|e| e.to_string())?;
        v["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| "reply has no choices[0].message.content".to_string())
    }
}

impl Formalizer for RemoteFormalizer {
    fn formalize(
        &self,
        problem: &ProblemDoc,
        logic: LogicId,
        feedback: Option<&Feedback>,
    ) -> Result<Formalization, FormalizeError> {
        let prompt = build_prompt(problem, logic, feedback);
        let mut attempt = 0;
        let reply = loop {
            match self.request(&prompt) {
                Ok(r) => break r,
                Err(e) if attempt < self.retries => {
                    log::warn!("remote formalizer attempt {} failed: {e}", attempt + 1);
                    std::thread::sleep(self.backoff * 2u32.pow(attempt));
                    attempt += 1;
                }
                Err(e) => return Err(FormalizeError::Transport(e)),
            }
        };
        parse_reply(&reply, logic).map_err(FormalizeError::Syntax)
    }
}
