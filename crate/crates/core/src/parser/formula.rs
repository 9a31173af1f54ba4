use std::collections::BTreeMap;

use super::lexer::{lex, Tok, Token};
use super::{ErrorCategory, ParseError};
use crate::formula::{Formula, LogicId, NodeKind, Signature, Term};

const MAX_NESTING: usize = 256;

/// Parses one formula of the surface syntax and checks it against `logic`.
///
/// Foreign operators are reported as signature violations at the operator's
/// span, as soon as the offending node is built.
pub fn parse_formula(src: &str, logic: LogicId) -> Result<Formula, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        logic,
        sig: Signature::of(logic),
        bound: Vec::new(),
        arities: BTreeMap::new(),
        depth: 0,
    };
    let f = p.formula(false)?;
    match p.peek() {
        Tok::Eof => Ok(f),
        other => {
            let msg = format!("unexpected {} after a complete formula", other.describe());
            Err(p.error_here(ErrorCategory::Grammar, msg))
        }
    }
}

/// Parses a list of formulas, tagging errors with `"{field}[i]"`.
pub fn parse_formula_list<S: AsRef<str>>(
    items: &[S],
    logic: LogicId,
    field: &str,
) -> Result<Vec<Formula>, ParseError> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_formula(s.as_ref(), logic).map_err(|e| e.in_field(format!("{field}[{i}]")))
        })
        .collect()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    logic: LogicId,
    sig: Signature,
    bound: Vec<String>,
    arities: BTreeMap<String, usize>,
    depth: usize,
}

fn is_keyword(s: &str, logic: LogicId) -> bool {
    match s {
        "true" | "false" | "forall" | "exists" => true,
        "O" | "P" | "F" => logic != LogicId::Fol,
        "Box" | "Dia" | "BoxA" | "BoxP" | "Oa" | "Op" => logic != LogicId::Fol,
        _ => false,
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> (usize, usize) {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, category: ErrorCategory, message: impl Into<String>) -> ParseError {
        ParseError::new(category, message, self.span())
    }

    fn expect(&mut self, tok: Tok, context: &str) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            let msg = format!(
                "expected {} {context}, found {}",
                tok.describe(),
                self.peek().describe()
            );
            Err(self.error_here(ErrorCategory::Grammar, msg))
        }
    }

    fn admit(&self, kind: NodeKind, span: (usize, usize)) -> Result<(), ParseError> {
        match self.sig.exclusion(kind) {
            None => Ok(()),
            Some(msg) => Err(ParseError::new(
                ErrorCategory::SignatureViolation,
                msg,
                span,
            )),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(self.error_here(ErrorCategory::Grammar, "formula nested too deeply"));
        }
        Ok(())
    }

    /// `no_bar` is set while parsing the consequent of `O(..|..)`: a bare `|`
    /// then ends the consequent instead of building a disjunction.
    fn formula(&mut self, no_bar: bool) -> Result<Formula, ParseError> {
        self.enter()?;
        let out = match self.peek() {
            Tok::Ident(s) if (s == "forall" || s == "exists") => self.quantifier(no_bar),
            _ => self.iff(no_bar),
        };
        self.depth -= 1;
        out
    }

    fn quantifier(&mut self, no_bar: bool) -> Result<Formula, ParseError> {
        let kw = self.bump();
        let universal = matches!(&kw.tok, Tok::Ident(s) if s == "forall");
        self.admit(
            if universal {
                NodeKind::Forall
            } else {
                NodeKind::Exists
            },
            kw.span,
        )?;
        let var = match self.peek().clone() {
            Tok::Ident(v) if !is_keyword(&v, self.logic) => {
                let t = self.bump();
                if self.bound.contains(&v) {
                    return Err(ParseError::new(
                        ErrorCategory::Scope,
                        format!("variable {v} shadows an enclosing binding"),
                        t.span,
                    ));
                }
                v
            }
            other => {
                let msg = format!(
                    "expected a variable after quantifier, found {}",
                    other.describe()
                );
                return Err(self.error_here(ErrorCategory::Grammar, msg));
            }
        };
        self.expect(Tok::Dot, "after quantified variable")?;
        self.bound.push(var.clone());
        let body = self.formula(no_bar);
        self.bound.pop();
        let body = body?;
        Ok(if universal {
            Formula::forall(var, body)
        } else {
            Formula::exists(var, body)
        })
    }

    fn iff(&mut self, no_bar: bool) -> Result<Formula, ParseError> {
        let mut lhs = self.implication(no_bar)?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.implication(no_bar)?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self, no_bar: bool) -> Result<Formula, ParseError> {
        let lhs = self.disjunction(no_bar)?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication_rhs(no_bar)?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    // A quantifier may open the right-hand side of `->` without parentheses.
    fn implication_rhs(&mut self, no_bar: bool) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == "forall" || s == "exists" => self.formula(no_bar),
            _ => self.implication(no_bar),
        }
    }

    fn disjunction(&mut self, no_bar: bool) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while !no_bar && *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.enter()?;
        let out = self.unary_inner();
        self.depth -= 1;
        out
    }

    fn unary_inner(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula(false)?;
                self.expect(Tok::RParen, "to close parenthesis")?;
                Ok(f)
            }
            Tok::Ident(name) => self.ident(name),
            other => {
                let msg = format!("expected a formula, found {}", other.describe());
                Err(self.error_here(ErrorCategory::Grammar, msg))
            }
        }
    }

    fn ident(&mut self, name: String) -> Result<Formula, ParseError> {
        let logic = self.logic;
        match name.as_str() {
            "true" => {
                self.bump();
                return Ok(Formula::Top);
            }
            "false" => {
                self.bump();
                return Ok(Formula::Bot);
            }
            "forall" | "exists" => {
                let msg = format!("quantifier `{name}` must be parenthesised here");
                return Err(self.error_here(ErrorCategory::Grammar, msg));
            }
            "O" | "P" | "F" if logic != LogicId::Fol => return self.deontic_call(&name),
            "Box" | "Dia" | "BoxA" | "BoxP" | "Oa" | "Op" if logic != LogicId::Fol => {
                let kw = self.bump();
                let kind = match name.as_str() {
                    "Box" => NodeKind::Nec,
                    "Dia" => NodeKind::Poss,
                    "BoxA" => NodeKind::NecActual,
                    "BoxP" => NodeKind::NecPotential,
                    "Oa" => NodeKind::ObActual,
                    _ => NodeKind::ObPotential,
                };
                self.admit(kind, kw.span)?;
                let a = self.unary()?;
                return Ok(match kind {
                    NodeKind::Nec => Formula::nec(a),
                    NodeKind::Poss => Formula::poss(a),
                    NodeKind::NecActual => Formula::nec_actual(a),
                    NodeKind::NecPotential => Formula::nec_potential(a),
                    NodeKind::ObActual => Formula::ob_actual(a),
                    _ => Formula::ob_potential(a),
                });
            }
            _ => {}
        }
        let head = self.bump();
        if *self.peek() == Tok::LParen {
            return self.predicate(name, head.span);
        }
        if self.bound.contains(&name) {
            return Err(ParseError::new(
                ErrorCategory::Scope,
                format!("variable {name} used as a formula"),
                head.span,
            ));
        }
        if logic == LogicId::Fol {
            // A bare name in first-order syntax is a nullary predicate.
            self.check_arity(&name, 0, head.span)?;
            return Ok(Formula::pred(name, vec![]));
        }
        self.admit(NodeKind::Atom, head.span)?;
        Ok(Formula::Atom(name))
    }

    fn deontic_call(&mut self, name: &str) -> Result<Formula, ParseError> {
        let kw = self.bump();
        self.expect(Tok::LParen, &format!("after `{name}`"))?;
        let consequent = self.formula(true)?;
        let dyadic = *self.peek() == Tok::Bar;
        let antecedent = if dyadic {
            if name == "F" {
                return Err(
                    self.error_here(ErrorCategory::Grammar, "prohibition has no dyadic form")
                );
            }
            self.bump();
            Some(self.formula(false)?)
        } else {
            None
        };
        self.expect(Tok::RParen, &format!("to close `{name}(`"))?;
        let end = self.tokens[self.pos.saturating_sub(1)].span.1;
        let span = (kw.span.0, end);
        Ok(match (name, antecedent) {
            ("O", None) => {
                self.admit(NodeKind::Ob, span)?;
                Formula::ob(consequent)
            }
            ("P", None) => {
                self.admit(NodeKind::Perm, span)?;
                Formula::perm(consequent)
            }
            ("F", None) => {
                self.admit(NodeKind::Forb, span)?;
                Formula::forb(consequent)
            }
            ("O", Some(a)) => {
                self.admit(NodeKind::ObC, span)?;
                Formula::ob_c(consequent, a)
            }
            (_, Some(a)) => {
                self.admit(NodeKind::PermC, span)?;
                Formula::perm_c(consequent, a)
            }
            _ => unreachable!(),
        })
    }

    fn predicate(&mut self, name: String, head: (usize, usize)) -> Result<Formula, ParseError> {
        self.admit(NodeKind::Pred, head)?;
        if self.bound.contains(&name) {
            return Err(ParseError::new(
                ErrorCategory::Scope,
                format!("variable {name} used as a predicate"),
                head,
            ));
        }
        self.expect(Tok::LParen, "")?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                match self.peek().clone() {
                    Tok::Ident(a) if !is_keyword(&a, self.logic) => {
                        self.bump();
                        if self.bound.contains(&a) {
                            args.push(Term::Var(a));
                        } else {
                            args.push(Term::Const(a));
                        }
                    }
                    other => {
                        let msg = format!("expected a term, found {}", other.describe());
                        return Err(self.error_here(ErrorCategory::Grammar, msg));
                    }
                }
                if *self.peek() == Tok::Comma {
                    self.bump();
                    continue;
                }
                break;
            }
        }
        let close = self.expect(Tok::RParen, "to close argument list")?;
        self.check_arity(&name, args.len(), (head.0, close.span.1))?;
        Ok(Formula::Pred(name, args))
    }

    fn check_arity(
        &mut self,
        name: &str,
        arity: usize,
        span: (usize, usize),
    ) -> Result<(), ParseError> {
        match self.arities.get(name) {
            Some(&n) if n != arity => Err(ParseError::new(
                ErrorCategory::SignatureViolation,
                format!("predicate {name} used with arities {n} and {arity}"),
                span,
            )),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;

    fn p() -> F {
        F::atom("p")
    }
    fn q() -> F {
        F::atom("q")
    }
    fn parse(s: &str, l: LogicId) -> F {
        parse_formula(s, l).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn axiom_d_in_kd() {
        assert_eq!(
            parse("O(p) -> P(p)", LogicId::Kd),
            F::implies(F::ob(p()), F::perm(p()))
        );
    }

    #[test]
    fn dyadic_obligation_in_ddle() {
        assert_eq!(
            parse("O(q|p) & p", LogicId::Ddle),
            F::and(F::ob_c(q(), p()), p())
        );
    }

    #[test]
    fn dyadic_obligation_rejected_in_kd() {
        let err = parse_formula("O(q|p)", LogicId::Kd).unwrap_err();
        assert_eq!(err.category, ErrorCategory::SignatureViolation);
        assert_eq!(err.span, (0, 6));
        assert_eq!(err.message, "dyadic operator outside DDLE/DDL_CJ");
    }

    #[test]
    fn precedence_and_associativity() {
        let l = LogicId::Kd;
        assert_eq!(parse("~p & q", l), F::and(F::not(p()), q()));
        assert_eq!(parse("p & q | p", l), F::or(F::and(p(), q()), p()));
        assert_eq!(parse("p | q -> p", l), F::implies(F::or(p(), q()), p()));
        assert_eq!(
            parse("p -> q -> p", l),
            F::implies(p(), F::implies(q(), p()))
        );
        assert_eq!(parse("p -> q <-> q", l), F::iff(F::implies(p(), q()), q()));
        assert_eq!(parse("p & q & p", l), F::and(F::and(p(), q()), p()));
        assert_eq!(parse("p | q | p", l), F::or(F::or(p(), q()), p()));
    }

    #[test]
    fn golden_productions_kd() {
        let l = LogicId::Kd;
        assert_eq!(parse("F(p)", l), F::forb(p()));
        assert_eq!(parse("true & false", l), F::and(F::Top, F::Bot));
        assert_eq!(parse("~~p", l), F::not(F::not(p())));
        assert_eq!(parse("O((p | q))", l), F::ob(F::or(p(), q())));
        assert_eq!(parse("O(p & q)", l), F::ob(F::and(p(), q())));
        assert_eq!(parse("(p <-> q)", l), F::iff(p(), q()));
    }

    #[test]
    fn golden_productions_ddle() {
        let l = LogicId::Ddle;
        assert_eq!(parse("Box p", l), F::nec(p()));
        assert_eq!(parse("Dia ~p", l), F::poss(F::not(p())));
        assert_eq!(parse("P(q|p)", l), F::perm_c(q(), p()));
        assert_eq!(parse("O(q|p | q)", l), F::ob_c(q(), F::or(p(), q())));
        assert_eq!(parse("O((q | p)|p)", l), F::ob_c(F::or(q(), p()), p()));
        assert_eq!(parse("O(~q|~p)", l), F::ob_c(F::not(q()), F::not(p())));
        assert_eq!(parse("Box p & q", l), F::and(F::nec(p()), q()));
    }

    #[test]
    fn golden_productions_cj() {
        let l = LogicId::DdlCj;
        assert_eq!(parse("BoxA p", l), F::nec_actual(p()));
        assert_eq!(parse("BoxP p", l), F::nec_potential(p()));
        assert_eq!(parse("Oa ~q", l), F::ob_actual(F::not(q())));
        assert_eq!(parse("Op (p & q)", l), F::ob_potential(F::and(p(), q())));
        assert_eq!(
            parse("O(q|p) -> Oa q", l),
            F::implies(F::ob_c(q(), p()), F::ob_actual(q()))
        );
    }

    #[test]
    fn golden_productions_fol() {
        let l = LogicId::Fol;
        let c = |s: &str| Term::Const(s.into());
        let v = |s: &str| Term::Var(s.into());
        assert_eq!(
            parse("Human(socrates)", l),
            F::pred("Human", vec![c("socrates")])
        );
        assert_eq!(
            parse("forall x. Human(x) -> Mortal(x)", l),
            F::forall(
                "x",
                F::implies(
                    F::pred("Human", vec![v("x")]),
                    F::pred("Mortal", vec![v("x")])
                )
            )
        );
        assert_eq!(
            parse("exists e. Agent(e, a) & ~Rain()", l),
            F::exists(
                "e",
                F::and(
                    F::pred("Agent", vec![v("e"), c("a")]),
                    F::not(F::pred("Rain", vec![]))
                )
            )
        );
        assert_eq!(parse("O(a)", l), F::pred("O", vec![c("a")]));
        assert_eq!(
            parse("A(c) -> forall y. B(y)", l),
            F::implies(
                F::pred("A", vec![c("c")]),
                F::forall("y", F::pred("B", vec![v("y")]))
            )
        );
    }

    #[test]
    fn foreign_operators() {
        let e = parse_formula("p", LogicId::Fol).map(|f| f == F::pred("p", vec![]));
        assert_eq!(e, Ok(true));
        let e = parse_formula("Human(a)", LogicId::Kd).unwrap_err();
        assert_eq!(e.category, ErrorCategory::SignatureViolation);
        let e = parse_formula("forall x. p", LogicId::Kd).unwrap_err();
        assert_eq!(e.category, ErrorCategory::SignatureViolation);
        let e = parse_formula("Box p", LogicId::Kd).unwrap_err();
        assert_eq!(e.category, ErrorCategory::SignatureViolation);
        let e = parse_formula("Oa p", LogicId::Ddle).unwrap_err();
        assert_eq!(e.message, "actual/potential operator outside DDL_CJ");
    }

    #[test]
    fn scope_errors() {
        let e = parse_formula("forall x. forall x. A(x)", LogicId::Fol).unwrap_err();
        assert_eq!(e.category, ErrorCategory::Scope);
        assert_eq!(e.span, (17, 18));
        let e = parse_formula("A(a) & B(a, b) & A(a, b)", LogicId::Fol).unwrap_err();
        assert!(e.message.contains("arities"));
    }

    #[test]
    fn grammar_errors_are_located() {
        let e = parse_formula("(p & q", LogicId::Kd).unwrap_err();
        assert_eq!(e.category, ErrorCategory::Grammar);
        assert_eq!(e.span, (6, 6));
        let e = parse_formula("p q", LogicId::Kd).unwrap_err();
        assert_eq!(e.span, (2, 3));
        assert!(e.prefix_end <= e.span.0);
        let e = parse_formula("O p", LogicId::Kd).unwrap_err();
        assert_eq!(e.category, ErrorCategory::Grammar);
        let e = parse_formula("", LogicId::Kd).unwrap_err();
        assert_eq!(e.span, (0, 0));
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let src = format!("{}p", "~".repeat(10_000));
        assert_eq!(
            parse_formula(&src, LogicId::Kd).unwrap_err().category,
            ErrorCategory::Grammar
        );
    }

    #[test]
    fn list_errors_carry_field_path() {
        let e = parse_formula_list(&["p", "p &"], LogicId::Kd, "gold.KD.steps").unwrap_err();
        assert_eq!(e.field.as_deref(), Some("gold.KD.steps[1]"));
    }
}
