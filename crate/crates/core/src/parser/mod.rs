//! Surface syntax for formulas and the problem-file format.
//!
//! Formula grammar (loosest binding first):
//!
//! ```text
//! formula := quant | iff
//! quant   := ("forall" | "exists") ident "." formula
//! iff     := impl ("<->" impl)*
//! impl    := or ("->" impl)?                 right associative
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "(" formula ")" | "true" | "false"
//!          | "O(" formula ["|" formula] ")" | "P(" formula ["|" formula] ")" | "F(" formula ")"
//!          | ("Box" | "Dia" | "BoxA" | "BoxP" | "Oa" | "Op") unary
//!          | ident "(" [ident ("," ident)*] ")" | ident
//! ```
//!
//! Inside `O(..)` and `P(..)` a top-level `|` separates consequent from
//! antecedent; a disjunctive consequent must be parenthesised. Under FOL the
//! letters `O`, `P` and `F` are ordinary predicate names.

mod formula;
mod lexer;
mod problem;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use formula::{parse_formula, parse_formula_list};
pub use problem::{
    parse_problem, parse_problems, render_problems, Domain, GoldFormalization, ProblemDoc,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCategory {
    Lexical,
    Grammar,
    SignatureViolation,
    Scope,
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorCategory::Lexical => "lexical",
            ErrorCategory::Grammar => "grammar",
            ErrorCategory::SignatureViolation => "signature-violation",
            ErrorCategory::Scope => "scope",
        })
    }
}

/// A located parse failure.
///
/// `span` is a byte range into the parsed text: the formula source, or the
/// field named by `field` when the error comes from a problem document.
/// Everything before `prefix_end` parsed successfully; the span never
/// starts inside that prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
pub struct ParseError {
    pub message: String,
    pub span: (usize, usize),
    pub category: ErrorCategory,
    pub prefix_end: usize,
    pub field: Option<String>,
}

impl ParseError {
    pub(crate) fn new(
        category: ErrorCategory,
        message: impl Into<String>,
        span: (usize, usize),
    ) -> ParseError {
        ParseError {
            message: message.into(),
            span,
            category,
            prefix_end: span.0,
            field: None,
        }
    }

    pub fn in_field(mut self, field: impl Into<String>) -> ParseError {
        self.field = Some(field.into());
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(field) = &self.field {
            write!(f, "{field}: ")?;
        }
        write!(
            f,
            "{} error at {}..{}: {}",
            self.category, self.span.0, self.span.1, self.message
        )
    }
}
