use super::{Formula, LogicId};

/// Rewrites every derived deontic/alethic operator into its primitive dual:
/// `P g = ~O ~g`, `F g = O ~g`, `Dia g = ~Box ~g`, `P(g|f) = ~O(~g|f)`.
/// The rewrite is applied bottom-up.
pub fn expand_duals(f: Formula) -> Formula {
    let f = f.map_children(expand_duals);
    match f {
        Formula::Perm(g) => Formula::not(Formula::ob(Formula::Not(g))),
        Formula::Forb(g) => Formula::ob(Formula::Not(g)),
        Formula::Poss(g) => Formula::not(Formula::nec(Formula::Not(g))),
        Formula::PermC(g, c) => Formula::not(Formula::ObC(Box::new(Formula::Not(g)), c)),
        other => other,
    }
}

/// Replaces `a <-> b` by `(a -> b) & (b -> a)`.
pub fn eliminate_iff(f: Formula) -> Formula {
    let f = f.map_children(eliminate_iff);
    match f {
        Formula::Iff(a, b) => {
            Formula::and(Formula::Impl(a.clone(), b.clone()), Formula::Impl(b, a))
        }
        other => other,
    }
}

/// Absorbs `true`/`false` into the surrounding boolean structure. Constants
/// survive only at the root or directly under a modal operator.
pub fn simplify_constants(f: Formula) -> Formula {
    use Formula::*;
    let f = f.map_children(simplify_constants);
    match f {
        Not(a) => match *a {
            Top => Bot,
            Bot => Top,
            a => Formula::not(a),
        },
        And(a, b) => match (*a, *b) {
            (Bot, _) | (_, Bot) => Bot,
            (Top, x) | (x, Top) => x,
            (a, b) => Formula::and(a, b),
        },
        Or(a, b) => match (*a, *b) {
            (Top, _) | (_, Top) => Top,
            (Bot, x) | (x, Bot) => x,
            (a, b) => Formula::or(a, b),
        },
        Impl(a, b) => match (*a, *b) {
            (Bot, _) | (_, Top) => Top,
            (Top, x) => x,
            (x, Bot) => Formula::not(x),
            (a, b) => Formula::implies(a, b),
        },
        Iff(a, b) => match (*a, *b) {
            (Top, x) | (x, Top) => x,
            (Bot, x) | (x, Bot) => simplify_constants(Formula::not(x)),
            (a, b) => Formula::iff(a, b),
        },
        Forall(_, a) | Exists(_, a) if matches!(*a, Top | Bot) => *a,
        other => other,
    }
}

/// Reduces a surface formula to the kernel the decision procedures work on:
/// duals expanded, `<->` eliminated, constants absorbed, and, in the
/// conditional logics, monadic `O g` read as `O(g|true)`.
pub fn normalize(f: Formula, logic: LogicId) -> Formula {
    let f = eliminate_iff(expand_duals(f));
    let f = match logic {
        LogicId::Ddle | LogicId::DdlCj => monadic_to_dyadic(f),
        LogicId::Fol | LogicId::Kd => f,
    };
    simplify_constants(f)
}

fn monadic_to_dyadic(f: Formula) -> Formula {
    match f.map_children(monadic_to_dyadic) {
        Formula::Ob(g) => Formula::ObC(g, Box::new(Formula::Top)),
        other => other,
    }
}

/// Negation normal form. Negations are pushed through the boolean
/// connectives and quantifiers and park on atoms, predicates and modal
/// operators; operands of modal operators are normalised recursively.
pub fn nnf(f: Formula) -> Formula {
    nnf_pol(f, true)
}

fn nnf_pol(f: Formula, positive: bool) -> Formula {
    use Formula::*;
    let neg = |g: Formula| if positive { g } else { Formula::not(g) };
    match f {
        Top => {
            if positive {
                Top
            } else {
                Bot
            }
        }
        Bot => {
            if positive {
                Bot
            } else {
                Top
            }
        }
        a @ (Atom(_) | Pred(..)) => neg(a),
        Not(a) => nnf_pol(*a, !positive),
        And(a, b) => {
            let (a, b) = (nnf_pol(*a, positive), nnf_pol(*b, positive));
            if positive {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
        Or(a, b) => {
            let (a, b) = (nnf_pol(*a, positive), nnf_pol(*b, positive));
            if positive {
                Formula::or(a, b)
            } else {
                Formula::and(a, b)
            }
        }
        Impl(a, b) => {
            if positive {
                Formula::or(nnf_pol(*a, false), nnf_pol(*b, true))
            } else {
                Formula::and(nnf_pol(*a, true), nnf_pol(*b, false))
            }
        }
        Iff(a, b) => {
            let (a, b) = (*a, *b);
            if positive {
                Formula::and(
                    Formula::or(nnf_pol(a.clone(), false), nnf_pol(b.clone(), true)),
                    Formula::or(nnf_pol(b, false), nnf_pol(a, true)),
                )
            } else {
                Formula::or(
                    Formula::and(nnf_pol(a.clone(), true), nnf_pol(b.clone(), false)),
                    Formula::and(nnf_pol(b, true), nnf_pol(a, false)),
                )
            }
        }
        Forall(v, a) => {
            let body = nnf_pol(*a, positive);
            if positive {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
        Exists(v, a) => {
            let body = nnf_pol(*a, positive);
            if positive {
                Formula::exists(v, body)
            } else {
                Formula::forall(v, body)
            }
        }
        modal => neg(modal.map_children(nnf)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn permission_is_dual_of_obligation() {
        let expected = Formula::not(Formula::ob(Formula::not(p())));
        assert_eq!(expand_duals(Formula::perm(p())), expected);
    }

    #[test]
    fn obligation_is_a_fixed_point() {
        assert_eq!(expand_duals(Formula::ob(p())), Formula::ob(p()));
    }

    #[test]
    fn nested_permission_expands_bottom_up() {
        // Hand expansion: P(P p) = ~O~(P p) = ~O~(~O~p).
        let inner = Formula::not(Formula::ob(Formula::not(p())));
        let expected = Formula::not(Formula::ob(Formula::not(inner)));
        assert_eq!(expand_duals(Formula::perm(Formula::perm(p()))), expected);
    }

    #[test]
    fn duals_leave_no_derived_operators() {
        let f = Formula::and(
            Formula::forb(Formula::poss(p())),
            Formula::perm_c(q(), Formula::perm(p())),
        );
        let g = expand_duals(f);
        assert!(g.subformulas().iter().all(|s| !matches!(
            s,
            Formula::Perm(_) | Formula::Forb(_) | Formula::Poss(_) | Formula::PermC(..)
        )));
    }

    #[test]
    fn de_morgan() {
        let f = Formula::not(Formula::and(p(), q()));
        assert_eq!(nnf(f), Formula::or(Formula::not(p()), Formula::not(q())));
    }

    #[test]
    fn double_negation() {
        assert_eq!(nnf(Formula::not(Formula::not(p()))), p());
    }

    #[test]
    fn negation_parks_on_obligation() {
        let f = Formula::not(Formula::ob(p()));
        assert_eq!(nnf(f.clone()), f);
        let g = Formula::not(Formula::ob(Formula::not(Formula::not(p()))));
        assert_eq!(nnf(g), f);
    }

    #[test]
    fn monadic_obligation_is_unconditional_in_dyadic_logics() {
        let f = normalize(Formula::ob(p()), LogicId::Ddle);
        assert_eq!(f, Formula::ob_c(p(), Formula::Top));
        assert_eq!(normalize(Formula::ob(p()), LogicId::Kd), Formula::ob(p()));
    }

    #[test]
    fn constants_are_absorbed() {
        let f = Formula::and(Formula::Top, Formula::implies(p(), Formula::Bot));
        assert_eq!(simplify_constants(f), Formula::not(p()));
        let iff = eliminate_iff(Formula::iff(p(), q()));
        assert_eq!(
            iff,
            Formula::and(Formula::implies(p(), q()), Formula::implies(q(), p()))
        );
    }
}
