use std::fmt::{self, Write};

use super::{Formula, Term};

// Binding strength, loosest first.
const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMPL: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => QUANT,
        Formula::Iff(..) => IFF,
        Formula::Impl(..) => IMPL,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

/// Inside `O(..)`/`P(..)` a top-level `|` would be read as the dyadic
/// separator, so operands that can expose one are wrapped.
fn exposes_bar(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Or(..)
            | Formula::Impl(..)
            | Formula::Iff(..)
            | Formula::Forall(..)
            | Formula::Exists(..)
    )
}

pub(super) fn write_formula(w: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    write_prec(w, f, QUANT)
}

fn write_prec<W: Write>(w: &mut W, f: &Formula, min: u8) -> fmt::Result {
    if prec(f) < min {
        w.write_char('(')?;
        write_node(w, f)?;
        w.write_char(')')
    } else {
        write_node(w, f)
    }
}

fn write_guarded<W: Write>(w: &mut W, f: &Formula) -> fmt::Result {
    if exposes_bar(f) {
        w.write_char('(')?;
        write_node(w, f)?;
        w.write_char(')')
    } else {
        write_node(w, f)
    }
}

fn write_prefix<W: Write>(w: &mut W, op: &str, f: &Formula) -> fmt::Result {
    w.write_str(op)?;
    w.write_char(' ')?;
    write_prec(w, f, UNARY)
}

fn write_call<W: Write>(w: &mut W, op: &str, f: &Formula) -> fmt::Result {
    w.write_str(op)?;
    w.write_char('(')?;
    write_guarded(w, f)?;
    w.write_char(')')
}

fn write_dyadic<W: Write>(
    w: &mut W,
    op: &str,
    consequent: &Formula,
    antecedent: &Formula,
) -> fmt::Result {
    w.write_str(op)?;
    w.write_char('(')?;
    write_guarded(w, consequent)?;
    w.write_char('|')?;
    write_node(w, antecedent)?;
    w.write_char(')')
}

fn write_node<W: Write>(w: &mut W, f: &Formula) -> fmt::Result {
    use Formula::*;
    match f {
        Top => w.write_str("true"),
        Bot => w.write_str("false"),
        Atom(n) => w.write_str(n),
        Pred(n, args) => {
            w.write_str(n)?;
            w.write_char('(')?;
            for (i, t) in args.iter().enumerate() {
                if i > 0 {
                    w.write_str(", ")?;
                }
                match t {
                    Term::Var(v) | Term::Const(v) => w.write_str(v)?,
                }
            }
            w.write_char(')')
        }
        Not(a) => {
            w.write_char('~')?;
            write_prec(w, a, UNARY)
        }
        And(a, b) => {
            write_prec(w, a, AND)?;
            w.write_str(" & ")?;
            write_prec(w, b, AND + 1)
        }
        Or(a, b) => {
            write_prec(w, a, OR)?;
            w.write_str(" | ")?;
            write_prec(w, b, OR + 1)
        }
        Impl(a, b) => {
            write_prec(w, a, IMPL + 1)?;
            w.write_str(" -> ")?;
            write_prec(w, b, IMPL)
        }
        Iff(a, b) => {
            write_prec(w, a, IFF + 1)?;
            w.write_str(" <-> ")?;
            write_prec(w, b, IFF + 1)
        }
        Forall(v, a) => {
            write!(w, "forall {v}. ")?;
            write_prec(w, a, QUANT)
        }
        Exists(v, a) => {
            write!(w, "exists {v}. ")?;
            write_prec(w, a, QUANT)
        }
        Ob(a) => write_call(w, "O", a),
        Perm(a) => write_call(w, "P", a),
        Forb(a) => write_call(w, "F", a),
        ObC(a, b) => write_dyadic(w, "O", a, b),
        PermC(a, b) => write_dyadic(w, "P", a, b),
        Nec(a) => write_prefix(w, "Box", a),
        Poss(a) => write_prefix(w, "Dia", a),
        NecActual(a) => write_prefix(w, "BoxA", a),
        NecPotential(a) => write_prefix(w, "BoxP", a),
        ObActual(a) => write_prefix(w, "Oa", a),
        ObPotential(a) => write_prefix(w, "Op", a),
    }
}
