//! Acceptance suite. Runs every criterion against its runtime limit and
//! prints one PASS/FAIL line each; exits non-zero if any criterion fails.
//!
//! `LOGIPARAM_SEED` overrides the seed of the randomized criteria.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use logiparam::benchmark::{
    evaluate, load_dataset, render_csv, render_markdown, EvalConfig, MetricsTable,
};
use logiparam::formula::{random_formula, random_kd_formula, GenConfig};
use logiparam::parser::{Domain, ProblemDoc};
use logiparam::pipeline::{
    run_case, Feedback, Formalization, FormalizeError, Formalizer, FormalizerSpec, RunConfig,
};
use logiparam::prover::{
    check_consistency, check_entailment, kd_tableau, locate_failed_step, Localization,
    ProverConfig, TableauOutcome, Verdict,
};
use logiparam::sat::{solve, Cnf, Lit, SolveOutcome};
use logiparam::semantics::{
    encode_bounded_with, eval, holds, Consequence, EncodeMode, EncodeOptions, Model,
    PreferenceModel,
};
use logiparam::{parse_formula, Formula, LogicId, Term};

type Outcome = Result<String, String>;

fn seed() -> u64 {
    std::env::var("LOGIPARAM_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5eed)
}

fn fixtures() -> Vec<ProblemDoc> {
    load_dataset(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"))
        .expect("fixtures load")
}

fn f(src: &str, logic: LogicId) -> Formula {
    parse_formula(src, logic).unwrap_or_else(|e| panic!("`{src}`: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The countermodel must satisfy the theory and falsify the goal at the
/// reported world, checked by direct evaluation.
fn confirm_countermodel(
    cert: &logiparam::prover::VerdictCertificate,
    theory: &[Formula],
    goal: &Formula,
    mode: Consequence,
) -> Result<(), String> {
    let m = cert
        .witness
        .as_ref()
        .ok_or("refutation without countermodel")?;
    let w = cert.failing_world.unwrap_or(0);
    for t in theory {
        ensure(holds(m, t, mode).map_err(|e| e.to_string())?, || {
            format!("countermodel violates {}", t.pretty())
        })?;
    }
    ensure(!eval(m, w, goal).map_err(|e| e.to_string())?, || {
        format!("goal {} holds at w{w}", goal.pretty())
    })
}

// 1 ---------------------------------------------------------------------

fn kd_soundness() -> Outcome {
    let cfg = ProverConfig::default();
    let valid = ["O(p) -> P(p)", "O(p & q) -> O(p)", "P(p) <-> ~O(~p)"];
    for src in valid {
        let g = f(src, LogicId::Kd);
        let c = check_entailment(LogicId::Kd, &[], &g, &cfg).map_err(|e| e.to_string())?;
        ensure(c.verdict == Verdict::Entailed, || {
            format!("{src}: {}", c.verdict)
        })?;
        ensure(
            matches!(kd_tableau(&g), Ok(TableauOutcome::Valid(_))),
            || format!("{src}: tableau disagrees"),
        )?;
    }
    for src in ["P(p) -> p", "O(p) -> p"] {
        let g = f(src, LogicId::Kd);
        let c = check_entailment(LogicId::Kd, &[], &g, &cfg).map_err(|e| e.to_string())?;
        ensure(c.verdict == Verdict::Refuted, || {
            format!("{src}: {}", c.verdict)
        })?;
        confirm_countermodel(&c, &[], &g, Consequence::Global)?;
        match kd_tableau(&g) {
            Ok(TableauOutcome::Refuted(m)) => {
                let m = Model::Kripke(m);
                ensure(!eval(&m, 0, &g).unwrap(), || {
                    format!("{src}: tableau countermodel does not falsify")
                })?;
            }
            other => return Err(format!("{src}: tableau gave {other:?}")),
        }
    }
    Ok("3 entailed, 2 refuted with confirmed countermodels".into())
}

// 2 ---------------------------------------------------------------------

fn kd_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let opts = EncodeOptions {
        consequence: Consequence::Local,
        serial: true,
    };
    let (mut valid, mut invalid) = (0, 0);
    // Each draw is checked together with its negation, so unsatisfiable
    // draws contribute valid formulas.
    let draws: Vec<Formula> = (0..500)
        .map(|_| random_kd_formula(&mut rng, 3, 2, 4))
        .collect();
    let mut all: Vec<Formula> = draws
        .iter()
        .flat_map(|g| [g.clone(), Formula::not(g.clone())])
        .collect();
    // Instances of the K and D schemata over random subformulas: valid by
    // construction.
    for pair in draws.chunks(2).take(100) {
        let (a, b) = (random_kd_formula(&mut rng, 3, 1, 2), pair[0].clone());
        let k = Formula::implies(
            Formula::ob(Formula::implies(a.clone(), b.clone())),
            Formula::implies(Formula::ob(a.clone()), Formula::ob(b.clone())),
        );
        all.push(k);
        all.push(Formula::implies(Formula::ob(b.clone()), Formula::perm(b)));
    }
    for (i, g) in all.iter().enumerate() {
        let mut finder_refutes = false;
        for k in 1..=4 {
            let (cnf, dec) =
                encode_bounded_with(LogicId::Kd, &[], EncodeMode::Refutation, Some(g), k, &opts)
                    .map_err(|e| e.to_string())?;
            if let SolveOutcome::Sat(a) = solve(&cnf) {
                let m = dec.decode(&a);
                let w = dec.failing_world(&a).unwrap_or(0);
                ensure(!eval(&m, w, g).unwrap(), || {
                    format!("#{i}: decoded model does not falsify {}", g.pretty())
                })?;
                finder_refutes = true;
                break;
            }
        }
        let tableau_refutes = match kd_tableau(g).map_err(|e| e.to_string())? {
            TableauOutcome::Valid(_) => false,
            TableauOutcome::Refuted(m) => {
                ensure(m.is_serial(), || format!("#{i}: tableau model not serial"))?;
                ensure(!eval(&Model::Kripke(m), 0, g).unwrap(), || {
                    format!("#{i}: tableau model does not falsify")
                })?;
                true
            }
        };
        ensure(finder_refutes == tableau_refutes, || {
            format!(
                "#{i}: {} tableau={tableau_refutes} finder={finder_refutes}",
                g.pretty()
            )
        })?;
        if tableau_refutes {
            invalid += 1;
        } else {
            valid += 1;
        }
    }
    Ok(format!(
        "{n}/{n} agree ({valid} valid, {invalid} refuted)",
        n = all.len()
    ))
}

// 3 ---------------------------------------------------------------------

/// Clause check written against the raw literal encoding, independent of
/// the library's verifier.
fn satisfies(clauses: &[Vec<(u32, bool)>], value: impl Fn(u32) -> bool) -> bool {
    clauses
        .iter()
        .all(|c| c.iter().any(|&(v, pos)| value(v) == pos))
}

fn sat_core() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 3);
    let (mut sat, mut unsat) = (0, 0);
    for i in 0..150 {
        let n: u32 = rng.random_range(3..=15);
        // Random 3-SAT around the satisfiability threshold.
        let m = (n as f64 * rng.random_range(3.0..5.5)) as usize;
        let clauses: Vec<Vec<(u32, bool)>> = (0..m)
            .map(|_| {
                (0..3)
                    .map(|_| (rng.random_range(1..=n), rng.random_bool(0.5)))
                    .collect()
            })
            .collect();
        let mut cnf = Cnf::with_vars(n);
        for c in &clauses {
            cnf.add_clause(c.iter().map(|&(v, p)| Lit::new(v, p)));
        }
        let brute = (0u64..1 << n).any(|bits| satisfies(&clauses, |v| bits >> (v - 1) & 1 == 1));
        match solve(&cnf) {
            SolveOutcome::Sat(a) => {
                ensure(brute, || {
                    format!("instance {i}: solver Sat, enumeration Unsat")
                })?;
                ensure(satisfies(&clauses, |v| a.value(v)), || {
                    format!("instance {i}: witness fails a clause")
                })?;
                sat += 1;
            }
            SolveOutcome::Unsat => {
                ensure(!brute, || {
                    format!("instance {i}: solver Unsat, enumeration Sat")
                })?;
                unsat += 1;
            }
            SolveOutcome::Timeout { .. } => {
                return Err(format!("instance {i}: unexpected timeout"))
            }
        }
    }
    Ok(format!("150 instances agree ({sat} sat, {unsat} unsat)"))
}

// 4 ---------------------------------------------------------------------

fn ddle_suite() -> Outcome {
    let l = LogicId::Ddle;
    let cfg = ProverConfig {
        bounds: Some(vec![1, 2, 3]),
        ..ProverConfig::default()
    };
    let cases = [
        ("factual detachment", vec!["phi", "O(psi | phi)"], "O(psi)"),
        (
            "strengthening of the antecedent",
            vec!["O(psi | phi)"],
            "O(psi | phi & chi)",
        ),
    ];
    for (name, theory, goal) in cases {
        let theory: Vec<Formula> = theory.iter().map(|s| f(s, l)).collect();
        let goal = f(goal, l);
        let c = check_entailment(l, &theory, &goal, &cfg).map_err(|e| e.to_string())?;
        ensure(c.verdict == Verdict::Refuted, || {
            format!("{name}: {}", c.verdict)
        })?;
        let m = c.witness.as_ref().unwrap();
        ensure(m.num_worlds() <= 3, || {
            format!("{name}: {} worlds", m.num_worlds())
        })?;
        if let Model::Preference(p) = m {
            p.validate().map_err(|e| format!("{name}: {e}"))?;
        }
        confirm_countermodel(&c, &theory, &goal, Consequence::Local)?;
    }
    // An empty antecedent makes any conditional obligation vacuously true.
    let vacuous = [f("O(false | phi)", l), f("O(psi & ~psi | phi)", l)];
    for ranks in [vec![0], vec![0, 1], vec![1, 0, 1]] {
        let n = ranks.len();
        let val = BTreeMap::from([("psi".to_string(), (0..n).step_by(2).collect::<Vec<_>>())]);
        let m =
            Model::Preference(PreferenceModel::from_ranks(&ranks, val).map_err(|e| e.to_string())?);
        for g in &vacuous {
            for w in 0..n {
                ensure(eval(&m, w, g).unwrap(), || {
                    format!("{} false at w{w} of a {n}-world model", g.pretty())
                })?;
            }
        }
    }
    Ok("both patterns refuted within 3 worlds; vacuity holds on 3 models".into())
}

// 5 ---------------------------------------------------------------------

fn chisholm_consistency() -> Outcome {
    let cases = fixtures();
    let case = cases
        .iter()
        .find(|c| c.id == "modalities-chisholm")
        .ok_or("fixture modalities-chisholm missing")?;
    let mut notes = Vec::new();
    for logic in [LogicId::Ddle, LogicId::DdlCj] {
        let gold = case
            .gold_for(logic)
            .ok_or_else(|| format!("no {logic} gold"))?;
        let mut all = gold.theory.clone();
        all.extend(gold.steps.iter().cloned());
        let cfg = ProverConfig {
            bounds: Some(vec![1, 2, 3]),
            ..ProverConfig::default()
        };
        let c = check_consistency(logic, &all, &cfg).map_err(|e| e.to_string())?;
        ensure(c.verdict == Verdict::Consistent, || {
            format!("{logic}: {}", c.verdict)
        })?;
        let m = c.witness.as_ref().ok_or("no witness")?;
        match m {
            Model::CarmoJones(cj) => cj
                .validate()
                .map_err(|e| format!("{logic}: {}", e.join("; ")))?,
            Model::Preference(p) => p.validate().map_err(|e| format!("{logic}: {e}"))?,
            other => return Err(format!("{logic}: unexpected witness {}", other.logic())),
        }
        for t in &all {
            ensure(holds(m, t, Consequence::Local).unwrap(), || {
                format!("{logic}: witness violates {}", t.pretty())
            })?;
        }
        notes.push(format!("{logic} witness with {} worlds", m.num_worlds()));
    }
    Ok(notes.join(", "))
}

// 6 ---------------------------------------------------------------------

/// Direct Tarskian evaluation over the named domain, independent of the
/// library's evaluator and grounding.
fn fol_eval(
    f: &Formula,
    rel: &BTreeSet<(String, Vec<String>)>,
    dom: &[String],
    env: &mut Vec<(String, String)>,
) -> bool {
    let term = |t: &Term, env: &Vec<(String, String)>| match t {
        Term::Var(v) => env
            .iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|(_, e)| e.clone())
            .expect("bound variable"),
        Term::Const(c) => c.clone(),
    };
    match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Pred(p, args) => {
            rel.contains(&(p.clone(), args.iter().map(|a| term(a, env)).collect()))
        }
        Formula::Not(a) => !fol_eval(a, rel, dom, env),
        Formula::And(a, b) => fol_eval(a, rel, dom, env) && fol_eval(b, rel, dom, env),
        Formula::Or(a, b) => fol_eval(a, rel, dom, env) || fol_eval(b, rel, dom, env),
        Formula::Impl(a, b) => !fol_eval(a, rel, dom, env) || fol_eval(b, rel, dom, env),
        Formula::Iff(a, b) => fol_eval(a, rel, dom, env) == fol_eval(b, rel, dom, env),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut result = universal;
            for e in dom {
                env.push((v.clone(), e.clone()));
                let r = fol_eval(body, rel, dom, env);
                env.pop();
                if r != universal {
                    result = r;
                    break;
                }
            }
            result
        }
        other => panic!("not first-order: {other:?}"),
    }
}

fn fol_grounding() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 6);
    let gen = GenConfig {
        max_depth: 3,
        constants: 3,
        predicates: vec![("A".into(), 1), ("B".into(), 2)],
        ..GenConfig::default()
    };
    let (mut entailed, mut refuted) = (0, 0);
    for i in 0..40 {
        let n_premises = rng.random_range(1..=2);
        let theory: Vec<Formula> = (0..n_premises)
            .map(|_| random_formula(&mut rng, LogicId::Fol, &gen))
            .collect();
        let goal = random_formula(&mut rng, LogicId::Fol, &gen);
        let mut dom: BTreeSet<String> = BTreeSet::new();
        for x in theory.iter().chain([&goal]) {
            dom.extend(x.constants());
        }
        if dom.is_empty() {
            dom.insert("c0".into());
        }
        let dom: Vec<String> = dom.into_iter().collect();
        let mut ground: Vec<(String, Vec<String>)> =
            dom.iter().map(|a| ("A".into(), vec![a.clone()])).collect();
        for a in &dom {
            for b in &dom {
                ground.push(("B".into(), vec![a.clone(), b.clone()]));
            }
        }
        let oracle_entails = (0u64..1 << ground.len()).all(|bits| {
            let rel: BTreeSet<_> = ground
                .iter()
                .enumerate()
                .filter(|(j, _)| bits >> j & 1 == 1)
                .map(|(_, g)| g.clone())
                .collect();
            let sat_theory = theory
                .iter()
                .all(|t| fol_eval(t, &rel, &dom, &mut Vec::new()));
            !(sat_theory && !fol_eval(&goal, &rel, &dom, &mut Vec::new()))
        });
        let c = check_entailment(LogicId::Fol, &theory, &goal, &ProverConfig::default())
            .map_err(|e| e.to_string())?;
        let engine_entails = match c.verdict {
            Verdict::Entailed => true,
            Verdict::Refuted => {
                confirm_countermodel(&c, &theory, &goal, Consequence::Global)?;
                false
            }
            v => return Err(format!("sequent {i}: verdict {v}")),
        };
        ensure(engine_entails == oracle_entails, || {
            let t: Vec<_> = theory.iter().map(|x| x.pretty()).collect();
            format!(
                "sequent {i}: {} |- {}: engine {engine_entails}, enumeration {oracle_entails}",
                t.join(", "),
                goal.pretty()
            )
        })?;
        if oracle_entails {
            entailed += 1;
        } else {
            refuted += 1;
        }
    }
    Ok(format!(
        "40 sequents agree ({entailed} entailed, {refuted} refuted)"
    ))
}

// 7 ---------------------------------------------------------------------

fn step_localization() -> Outcome {
    let cases = fixtures();
    let case = cases
        .iter()
        .find(|c| c.id == "bioethics-autonomy-competence")
        .ok_or("bioethics-autonomy-competence fixture missing")?;
    let gold = case.gold_for(LogicId::Kd).ok_or("no KD gold")?;
    ensure(gold.steps.len() == 4, || {
        format!("expected 4 steps, found {}", gold.steps.len())
    })?;
    let cfg = ProverConfig::default();
    let truncated = &gold.steps[..3];
    let out = locate_failed_step(LogicId::Kd, &gold.theory, truncated, &gold.goal, &cfg)
        .map_err(|e| e.to_string())?;
    let report = match &out.result {
        Localization::Failed(r) => r,
        other => return Err(format!("expected a failure, got {other:?}")),
    };
    // The only claim left is the hypothesis, so it is the minimal failing index.
    ensure(report.failed_index == 3, || {
        format!("failed index {}", report.failed_index)
    })?;
    ensure(
        out.checks
            .iter()
            .all(|c| c.index >= 3 || c.verdict != Some(Verdict::Refuted)),
        || "an earlier check was refuted".into(),
    )?;
    let mut context = gold.theory.clone();
    context.extend(truncated.iter().cloned());
    for t in &context {
        ensure(
            holds(&report.countermodel, t, Consequence::Global).unwrap(),
            || format!("countermodel violates {}", t.pretty()),
        )?;
    }
    ensure(
        !eval(&report.countermodel, report.failing_world, &gold.goal).unwrap(),
        || "countermodel satisfies the hypothesis".into(),
    )?;
    let full = locate_failed_step(LogicId::Kd, &gold.theory, &gold.steps, &gold.goal, &cfg)
        .map_err(|e| e.to_string())?;
    ensure(
        matches!(full.result, Localization::AllStepsEntailed),
        || format!("restored: {:?}", full.result),
    )?;
    Ok(format!(
        "fails at index 3 with a {}-world countermodel; restored chain entailed",
        report.countermodel.num_worlds()
    ))
}

// 8 ---------------------------------------------------------------------

/// Returns the gold chain with a contradictory theory.
struct Contradicting;

impl Formalizer for Contradicting {
    fn formalize(
        &self,
        problem: &ProblemDoc,
        logic: LogicId,
        _: Option<&Feedback>,
    ) -> Result<Formalization, FormalizeError> {
        let gold = problem.gold_for(logic).ok_or(FormalizeError::MissingGold {
            id: problem.id.clone(),
            logic,
        })?;
        let mut theory = gold.theory.clone();
        let injected = match logic {
            LogicId::Fol => Formula::pred("Injected", vec![Term::Const("k".into())]),
            _ => Formula::atom("injected"),
        };
        theory.push(injected.clone());
        theory.push(Formula::not(injected));
        Ok(Formalization {
            logic,
            theory,
            steps: gold.steps.clone(),
            goal: gold.goal.clone(),
            raw: String::new(),
        })
    }
}

fn pipeline_convergence() -> Outcome {
    let cfg = RunConfig {
        t: 3,
        ..RunConfig::deterministic()
    };
    let gap = FormalizerSpec::gap(None)
        .build()
        .map_err(|e| e.to_string())?;
    let mut runs = 0;
    for case in fixtures() {
        for &logic in case.gold.keys() {
            let o = run_case(&case, logic, gap.as_ref(), "gap-injecting-mock", &cfg)
                .map_err(|e| e.to_string())?;
            ensure(o.status.is_success() && o.iterations_used == 1, || {
                format!(
                    "{} [{logic}]: {} after {} refinements",
                    case.id, o.status, o.iterations_used
                )
            })?;
            let v = run_case(&case, logic, &Contradicting, "contradicting", &cfg)
                .map_err(|e| e.to_string())?;
            ensure(!v.status.is_success(), || {
                format!(
                    "{} [{logic}]: contradictory theory gave {}",
                    case.id, v.status
                )
            })?;
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} gap runs converged in 1 refinement; no contradictory theory verified"
    ))
}

// 9 ---------------------------------------------------------------------

fn harness_fidelity() -> Outcome {
    let cases = fixtures();
    let logics = [LogicId::Kd, LogicId::Fol];
    let specs = [FormalizerSpec::gold(), FormalizerSpec::gap(None)];
    let ev = evaluate(&cases, &logics, &specs, &EvalConfig::deterministic())
        .map_err(|e| e.to_string())?;
    // Hand count of the grid: cases carrying gold, per logic and domain.
    let mut expected: BTreeMap<(LogicId, Domain), usize> = BTreeMap::new();
    for c in &cases {
        for l in logics {
            if c.gold_for(l).is_some() {
                *expected.entry((l, c.domain)).or_insert(0) += 1;
            }
        }
    }
    ensure(ev.table.cells.len() == expected.len() * specs.len(), || {
        format!("{} cells", ev.table.cells.len())
    })?;
    for ((l, d), n) in &expected {
        for (label, iters) in [("gold-mock", 0.0), ("gap-injecting-mock", 1.0)] {
            let cell = ev
                .table
                .cell(*l, label, *d)
                .ok_or_else(|| format!("missing cell {l}/{label}/{d}"))?;
            ensure(cell.cases == *n, || {
                format!("{l}/{label}/{d}: {} cases, expected {n}", cell.cases)
            })?;
            ensure(cell.valid_pct() == 100.0, || {
                format!("{l}/{label}/{d}: valid {}", cell.valid_pct())
            })?;
            ensure(cell.avg_iterations() == iters, || {
                format!("{l}/{label}/{d}: iterations {}", cell.avg_iterations())
            })?;
            ensure(cell.syntax_err_pct() == 0.0, || {
                format!("{l}/{label}/{d}: syntax errors")
            })?;
        }
    }
    // Aggregation recomputed from the log alone.
    let mut recount: BTreeMap<(LogicId, String, Domain), (usize, usize, usize)> = BTreeMap::new();
    for r in &ev.log {
        let e = recount
            .entry((r.logic, r.formalizer.clone(), r.domain))
            .or_default();
        e.0 += 1;
        e.1 += r.status.is_success() as usize;
        e.2 += r.iterations_used;
    }
    for c in &ev.table.cells {
        let (n, ok, it) = recount[&(c.logic, c.formalizer.clone(), c.domain)];
        ensure(
            (c.cases, c.successes, c.iterations_total) == (n, ok, it),
            || format!("cell {}/{} mismatch", c.logic, c.domain),
        )?;
    }
    let csv = render_csv(&ev.table);
    let header = csv.lines().next().unwrap_or_default();
    ensure(
        header == "logic,formalizer,domain,cases,valid_pct,avg_iter,avg_solve_ms,syntax_err_pct",
        || format!("header `{header}`"),
    )?;
    Ok(format!(
        "{} cells match hand counts; CSV header exact",
        ev.table.cells.len()
    ))
}

// 10 --------------------------------------------------------------------

fn full_report(seed: u64) -> Result<String, String> {
    let cfg = EvalConfig {
        seed,
        jobs: Some(4),
        ..EvalConfig::deterministic()
    };
    let ev = evaluate(
        &fixtures(),
        &LogicId::ALL,
        &[FormalizerSpec::gold(), FormalizerSpec::gap(None)],
        &cfg,
    )
    .map_err(|e| e.to_string())?;
    let json = serde_json::to_string_pretty(&ev.table).map_err(|e| e.to_string())?;
    let back: MetricsTable = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    ensure(back == ev.table, || {
        "JSON report does not round-trip".into()
    })?;
    Ok(format!(
        "{}\n{}\n{}\n{}",
        render_csv(&ev.table),
        json,
        render_markdown(&ev.table),
        ev.log_lines()
    ))
}

fn round_trip_and_determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 10);
    for logic in LogicId::ALL {
        let gen = GenConfig {
            max_depth: 5,
            ..GenConfig::default()
        };
        for i in 0..1000 {
            let g = random_formula(&mut rng, logic, &gen);
            let text = g.pretty();
            let back =
                parse_formula(&text, logic).map_err(|e| format!("{logic} #{i} `{text}`: {e}"))?;
            ensure(back == g, || {
                format!("{logic} #{i}: `{text}` reparses differently")
            })?;
        }
    }
    let a = full_report(seed())?;
    let b = full_report(seed())?;
    ensure(a == b, || "two runs with the same seed differ".into())?;
    Ok(format!(
        "4000 formulas round-trip; identical reports ({} bytes)",
        a.len()
    ))
}

/// Name, runtime limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("logic soundness (KD)", 1, kd_soundness),
        ("oracle equivalence (KD)", 60, kd_oracle_equivalence),
        ("SAT core", 30, sat_core),
        ("dyadic semantics (DDLE)", 10, ddle_suite),
        ("Chisholm consistency", 30, chisholm_consistency),
        ("FOL grounding", 30, fol_grounding),
        ("failed-step localization", 5, step_localization),
        ("pipeline convergence", 10, pipeline_convergence),
        ("harness fidelity", 30, harness_fidelity),
        ("round-trip and determinism", 60, round_trip_and_determinism),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = match result {
            Ok(detail) if took > Duration::from_secs(limit) => Err(format!(
                "{detail}; took {:.2}s, limit {limit}s",
                took.as_secs_f64()
            )),
            r => r,
        };
        match result {
            Ok(detail) => println!(
                "PASS {:>2} {name} ({:.2}s < {limit}s): {detail}",
                i + 1,
                took.as_secs_f64()
            ),
            Err(why) => {
                failures += 1;
                println!(
                    "FAIL {:>2} {name} ({:.2}s, limit {limit}s): {why}",
                    i + 1,
                    took.as_secs_f64()
                );
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
