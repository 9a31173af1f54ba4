use std::hint::black_box;
use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use logiparam::benchmark::load_dataset;
use logiparam::formula::random_kd_formula;
use logiparam::pipeline::{run_case_with, FormalizerSpec, RunConfig};
use logiparam::prover::{check_entailment, ground_fol, kd_tableau, ProverConfig};
use logiparam::sat::{solve, Cnf, Lit};
use logiparam::semantics::{encode_bounded, EncodeMode};
use logiparam::{parse_formula, Formula, LogicId};

fn random_3sat(rng: &mut ChaCha8Rng, n: u32, ratio: f64) -> Cnf {
    let mut cnf = Cnf::with_vars(n);
    for _ in 0..(n as f64 * ratio) as usize {
        cnf.add_clause((0..3).map(|_| Lit::new(rng.random_range(1..=n), rng.random_bool(0.5))));
    }
    cnf
}

fn sat(c: &mut Criterion) {
    let mut g = c.benchmark_group("sat/3sat-threshold");
    for n in [20u32, 50, 100] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let instances: Vec<Cnf> = (0..8).map(|_| random_3sat(&mut rng, n, 4.26)).collect();
        g.bench_with_input(BenchmarkId::from_parameter(n), &instances, |b, xs| {
            b.iter(|| {
                xs.iter()
                    .map(|cnf| solve(black_box(cnf)).is_sat())
                    .filter(|s| *s)
                    .count()
            })
        });
    }
    g.finish();
}

fn kd_formulas() -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..32)
        .map(|_| random_kd_formula(&mut rng, 3, 2, 4))
        .collect()
}

fn kd_tableau_bench(c: &mut Criterion) {
    let fs = kd_formulas();
    c.bench_function("kd/tableau", |b| {
        b.iter(|| {
            fs.iter()
                .filter(|f| kd_tableau(black_box(f)).is_ok())
                .count()
        })
    });
}

fn kd_encode_solve(c: &mut Criterion) {
    let fs = kd_formulas();
    let mut g = c.benchmark_group("kd/encode+solve");
    for k in [1usize, 2, 3, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| {
                fs.iter()
                    .filter(|f| {
                        let (cnf, _) =
                            encode_bounded(LogicId::Kd, &[], EncodeMode::Refutation, Some(f), k)
                                .unwrap();
                        solve(&cnf).is_sat()
                    })
                    .count()
            })
        });
    }
    g.finish();
}

fn fol(c: &mut Criterion) {
    let l = LogicId::Fol;
    let theory: Vec<Formula> = [
        "forall x. (Philosopher(x) -> Human(x))",
        "forall x. (Human(x) -> Mortal(x))",
        "Philosopher(socrates)",
        "Philosopher(plato)",
        "forall x. forall y. (Teaches(x, y) -> Philosopher(y))",
        "Teaches(socrates, plato)",
    ]
    .iter()
    .map(|s| parse_formula(s, l).unwrap())
    .collect();
    let goal = parse_formula("exists y. (Teaches(socrates, y) & Mortal(y))", l).unwrap();
    c.bench_function("fol/ground", |b| {
        b.iter(|| ground_fol(black_box(&theory), Some(&goal)).unwrap())
    });
    let cfg = ProverConfig::deterministic(20_000_000);
    c.bench_function("fol/entail", |b| {
        b.iter(|| check_entailment(l, black_box(&theory), &goal, &cfg).unwrap())
    });
}

fn pipeline(c: &mut Criterion) {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let cases = load_dataset(&fixtures).expect("fixtures load");
    let cfg = RunConfig::deterministic();
    let mut g = c.benchmark_group("pipeline/gold");
    for logic in [LogicId::Kd, LogicId::Fol, LogicId::Ddle, LogicId::DdlCj] {
        let with_gold: Vec<_> = cases
            .iter()
            .filter(|p| p.gold_for(logic).is_some())
            .cloned()
            .collect();
        g.bench_with_input(BenchmarkId::from_parameter(logic), &with_gold, |b, xs| {
            b.iter(|| {
                xs.iter()
                    .map(|p| {
                        run_case_with(p, logic, &FormalizerSpec::gold(), &cfg)
                            .unwrap()
                            .iterations_used
                    })
                    .sum::<usize>()
            })
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    sat,
    kd_tableau_bench,
    kd_encode_solve,
    fol,
    pipeline
);
criterion_main!(benches);
