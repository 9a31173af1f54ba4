pub mod benchmark;
pub mod formula;
pub mod parser;
pub mod pipeline;
pub mod prover;
pub mod sat;
pub mod semantics;

pub use formula::{Formula, LogicId, Term};
pub use parser::{parse_formula, parse_problem, ParseError, ProblemDoc};
