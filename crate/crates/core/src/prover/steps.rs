use serde::Serialize;

use super::{check_entailment, ProverConfig, ProverError, Verdict};
use crate::formula::{Formula, LogicId};
use crate::semantics::Model;

/// How an explanation step takes part in the proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepRole {
    /// A general rule linking facts or norms (implication, equivalence or
    /// conditional norm, possibly under quantifiers or necessity). Bridges
    /// are the content an explanation contributes, so they are assumed.
    Bridge,
    /// A particular claim that must follow from what precedes it.
    Claim,
}

pub fn step_role(f: &Formula) -> StepRole {
    let mut g = f;
    while let Formula::Forall(_, b) | Formula::Nec(b) = g {
        g = b;
    }
    match g {
        Formula::Impl(..) | Formula::Iff(..) | Formula::ObC(..) | Formula::PermC(..) => {
            StepRole::Bridge
        }
        _ => StepRole::Claim,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepCheck {
    /// Position in steps followed by the hypothesis.
    pub index: usize,
    pub role: StepRole,
    /// `None` for bridges, which are not checked.
    pub verdict: Option<Verdict>,
    pub effort: u64,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    /// 0-based index into steps followed by the hypothesis.
    pub failed_index: usize,
    #[serde(with = "crate::formula::as_text")]
    pub failed_formula: Formula,
    pub countermodel: Model,
    pub failing_world: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Localization {
    AllStepsEntailed,
    Failed(StepReport),
    /// A check ran out of budget before any step was refuted.
    Undecided {
        index: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocateOutcome {
    pub result: Localization,
    pub checks: Vec<StepCheck>,
}

impl LocateOutcome {
    /// All checks were proved outright (no bound-limited verdicts).
    pub fn fully_proved(&self) -> bool {
        matches!(self.result, Localization::AllStepsEntailed)
            && self
                .checks
                .iter()
                .all(|c| c.verdict.map_or(true, |v| v == Verdict::Entailed))
    }

    pub fn total_effort(&self) -> u64 {
        self.checks.iter().map(|c| c.effort).sum()
    }

    pub fn total_ms(&self) -> f64 {
        self.checks.iter().map(|c| c.elapsed_ms).sum()
    }
}

/// Scans steps then hypothesis; the i-th check asks whether premises plus
/// all earlier steps entail item i. Stops at the first refutation.
pub fn locate_failed_step(
    logic: LogicId,
    premises: &[Formula],
    steps: &[Formula],
    hypothesis: &Formula,
    cfg: &ProverConfig,
) -> Result<LocateOutcome, ProverError> {
    let mut context: Vec<Formula> = premises.to_vec();
    let mut checks = Vec::new();
    let items = steps
        .iter()
        .map(|s| (s, step_role(s)))
        .chain([(hypothesis, StepRole::Claim)]);
    for (index, (f, role)) in items.enumerate() {
        if role == StepRole::Bridge {
            checks.push(StepCheck {
                index,
                role,
                verdict: None,
                effort: 0,
                elapsed_ms: 0.0,
            });
            context.push(f.clone());
            continue;
        }
        let cert = check_entailment(logic, &context, f, cfg)?;
        checks.push(StepCheck {
            index,
            role,
            verdict: Some(cert.verdict),
            effort: cert.effort,
            elapsed_ms: cert.elapsed_ms,
        });
        match cert.verdict {
            Verdict::Refuted => {
                let countermodel = cert.witness.expect("refutations carry a witness");
                let failing_world = cert.failing_world.unwrap_or(0);
                let what = if index == steps.len() {
                    format!("hypothesis `{}`", f.pretty())
                } else {
                    format!("step {} `{}`", index + 1, f.pretty())
                };
                let message = format!(
                    "{what} does not follow from the premises{}; countermodel falsifies it at w{failing_world}",
                    if index == 0 { String::new() } else { " and the preceding steps".into() },
                );
                let report = StepReport {
                    failed_index: index,
                    failed_formula: f.clone(),
                    countermodel,
                    failing_world,
                    message,
                };
                return Ok(LocateOutcome {
                    result: Localization::Failed(report),
                    checks,
                });
            }
            Verdict::Unknown => {
                return Ok(LocateOutcome {
                    result: Localization::Undecided { index },
                    checks,
                })
            }
            _ => context.push(f.clone()),
        }
    }
    Ok(LocateOutcome {
        result: Localization::AllStepsEntailed,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;
    use crate::semantics::eval;

    fn a(n: &str) -> F {
        F::atom(n)
    }

    #[test]
    fn independent_atom_fails_first() {
        let out = locate_failed_step(
            LogicId::Kd,
            &[a("p")],
            &[a("q")],
            &a("r"),
            &ProverConfig::default(),
        )
        .unwrap();
        let Localization::Failed(r) = out.result else {
            panic!("{out:?}")
        };
        assert_eq!(r.failed_index, 0);
        assert!(r.message.contains("`q`"));
        assert!(eval(&r.countermodel, r.failing_world, &a("p")).unwrap());
        assert!(!eval(&r.countermodel, r.failing_world, &a("q")).unwrap());
    }

    #[test]
    fn modus_ponens_chain() {
        let premises = [a("p"), F::implies(a("p"), a("q"))];
        let out = locate_failed_step(
            LogicId::Kd,
            &premises,
            &[a("q")],
            &a("q"),
            &ProverConfig::default(),
        )
        .unwrap();
        assert_eq!(out.result, Localization::AllStepsEntailed);
        assert!(out.fully_proved());
    }

    #[test]
    fn bridges_are_assumed() {
        let steps = [F::implies(a("p"), a("q"))];
        let out = locate_failed_step(
            LogicId::Kd,
            &[a("p")],
            &steps,
            &a("q"),
            &ProverConfig::default(),
        )
        .unwrap();
        assert_eq!(out.result, Localization::AllStepsEntailed);
        assert_eq!(out.checks[0].verdict, None);
    }

    #[test]
    fn roles() {
        assert_eq!(
            step_role(&F::forall("x", F::implies(F::Top, F::Top))),
            StepRole::Bridge
        );
        assert_eq!(
            step_role(&F::nec(F::ob_c(a("q"), a("p")))),
            StepRole::Bridge
        );
        assert_eq!(step_role(&F::ob(a("p"))), StepRole::Claim);
        assert_eq!(
            step_role(&F::not(F::implies(a("p"), a("q")))),
            StepRole::Claim
        );
    }
}
