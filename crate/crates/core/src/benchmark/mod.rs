//! Dataset loading, grid evaluation and report emission.

mod report;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::formula::LogicId;
use crate::parser::{parse_problems, Domain, ErrorCategory, ParseError, ProblemDoc};
use crate::pipeline::{run_case, CaseOutcome, CaseStatus, FormalizerSpec, RunConfig};

pub use report::{emit_report, render_csv, render_markdown, ReportFormat, CSV_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}", render_parse_failures(.0))]
    Parse(Vec<(PathBuf, ParseError)>),
    #[error("duplicate case id `{id}` in {first} and {second}")]
    DuplicateId {
        id: String,
        first: PathBuf,
        second: PathBuf,
    },
    #[error("no cases found under {0}")]
    Empty(PathBuf),
}

fn render_parse_failures(errs: &[(PathBuf, ParseError)]) -> String {
    errs.iter()
        .map(|(p, e)| format!("{}: {e}", p.display()))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Files considered part of a dataset directory.
fn dataset_files(path: &Path) -> Result<Vec<PathBuf>, DatasetError> {
    let io = |source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    };
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files = Vec::new();
    let mut stack = vec![path.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).map_err(io)? {
            let p = entry.map_err(io)?.path();
            if p.is_dir() {
                stack.push(p);
            } else if matches!(
                p.extension().and_then(|e| e.to_str()),
                Some("json" | "jsonl")
            ) {
                files.push(p);
            }
        }
    }
    files.sort();
    Ok(files)
}

/// Loads a single problem file or every `.json`/`.jsonl` file below a
/// directory. Parse failures are collected across all files before
/// reporting.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Vec<ProblemDoc>, DatasetError> {
    let path = path.as_ref();
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    let mut seen: HashMap<String, PathBuf> = HashMap::new();
    for file in dataset_files(path)? {
        let text = fs::read_to_string(&file).map_err(|source| DatasetError::Io {
            path: file.clone(),
            source,
        })?;
        match parse_problems(&text) {
            Ok(docs) => {
                for doc in docs {
                    if let Some(first) = seen.insert(doc.id.clone(), file.clone()) {
                        return Err(DatasetError::DuplicateId {
                            id: doc.id,
                            first,
                            second: file,
                        });
                    }
                    cases.push(doc);
                }
            }
            Err(e) => failures.push((file, e)),
        }
    }
    if !failures.is_empty() {
        return Err(DatasetError::Parse(failures));
    }
    if cases.is_empty() {
        return Err(DatasetError::Empty(path.to_path_buf()));
    }
    Ok(cases)
}

pub fn domain_histogram(cases: &[ProblemDoc]) -> BTreeMap<Domain, usize> {
    let mut h = BTreeMap::new();
    for c in cases {
        *h.entry(c.domain).or_insert(0) += 1;
    }
    h
}

/// One line of the per-case log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub case_id: String,
    pub logic: LogicId,
    pub formalizer: String,
    pub domain: Domain,
    pub status: CaseStatus,
    pub iterations_used: usize,
    pub solving_time_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_category: Option<ErrorCategory>,
    /// Internal failure that prevented the case from running at all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CaseRecord {
    pub fn from_outcome(o: &CaseOutcome) -> Self {
        CaseRecord {
            case_id: o.case_id.clone(),
            logic: o.logic,
            formalizer: o.formalizer.clone(),
            domain: o.domain,
            status: o.status,
            iterations_used: o.iterations_used,
            solving_time_ms: o.solving_time_ms,
            error_category: o.error_category,
            error: None,
        }
    }
}

/// Aggregates for one (logic, formalizer, domain) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsCell {
    pub logic: LogicId,
    pub formalizer: String,
    pub domain: Domain,
    pub cases: usize,
    pub successes: usize,
    pub syntax_errors: usize,
    pub iterations_total: usize,
    /// Summed over successful cases only.
    pub solve_ms_total: f64,
}

impl MetricsCell {
    fn empty(logic: LogicId, formalizer: &str, domain: Domain) -> Self {
        MetricsCell {
            logic,
            formalizer: formalizer.to_string(),
            domain,
            cases: 0,
            successes: 0,
            syntax_errors: 0,
            iterations_total: 0,
            solve_ms_total: 0.0,
        }
    }

    fn add(&mut self, r: &CaseRecord) {
        self.cases += 1;
        self.iterations_total += r.iterations_used;
        if r.status.is_success() {
            self.successes += 1;
            self.solve_ms_total += r.solving_time_ms;
        }
        if r.status == CaseStatus::SyntacticError {
            self.syntax_errors += 1;
        }
    }

    fn merge(&mut self, other: &MetricsCell) {
        self.cases += other.cases;
        self.successes += other.successes;
        self.syntax_errors += other.syntax_errors;
        self.iterations_total += other.iterations_total;
        self.solve_ms_total += other.solve_ms_total;
    }

    pub fn valid_pct(&self) -> f64 {
        pct(self.successes, self.cases)
    }

    pub fn avg_iterations(&self) -> f64 {
        if self.cases == 0 {
            0.0
        } else {
            self.iterations_total as f64 / self.cases as f64
        }
    }

    /// `None` when no case in the cell succeeded.
    pub fn avg_solve_ms(&self) -> Option<f64> {
        (self.successes > 0).then(|| self.solve_ms_total / self.successes as f64)
    }

    pub fn syntax_err_pct(&self) -> f64 {
        pct(self.syntax_errors, self.cases)
    }
}

fn pct(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 * 100.0 / d as f64
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsTable {
    /// Sorted by (logic, formalizer, domain).
    pub cells: Vec<MetricsCell>,
}

impl MetricsTable {
    /// Single-threaded reduction over a case log.
    pub fn from_records(records: &[CaseRecord]) -> Self {
        let mut cells: BTreeMap<(LogicId, String, Domain), MetricsCell> = BTreeMap::new();
        for r in records {
            cells
                .entry((r.logic, r.formalizer.clone(), r.domain))
                .or_insert_with(|| MetricsCell::empty(r.logic, &r.formalizer, r.domain))
                .add(r);
        }
        MetricsTable {
            cells: cells.into_values().collect(),
        }
    }

    pub fn cell(&self, logic: LogicId, formalizer: &str, domain: Domain) -> Option<&MetricsCell> {
        self.cells
            .iter()
            .find(|c| c.logic == logic && c.formalizer == formalizer && c.domain == domain)
    }

    /// All domains of one (logic, formalizer) pair pooled together.
    pub fn overall(&self, logic: LogicId, formalizer: &str) -> Option<MetricsCell> {
        let mut it = self
            .cells
            .iter()
            .filter(|c| c.logic == logic && c.formalizer == formalizer);
        let mut acc = it.next()?.clone();
        for c in it {
            acc.merge(c);
        }
        Some(acc)
    }

    pub fn logics(&self) -> Vec<LogicId> {
        self.cells
            .iter()
            .map(|c| c.logic)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn formalizers(&self) -> Vec<String> {
        self.cells
            .iter()
            .map(|c| c.formalizer.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct EvalConfig {
    pub run: RunConfig,
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
    /// Permutes the scheduling order only; the log is sorted afterwards.
    pub seed: u64,
}

impl EvalConfig {
    pub fn deterministic() -> Self {
        EvalConfig {
            run: RunConfig::deterministic(),
            ..Default::default()
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("evaluation grid is empty: {0}")]
    EmptyGrid(&'static str),
    #[error("cannot build formalizer `{label}`: {message}")]
    Formalizer { label: String, message: String },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

pub struct Evaluation {
    pub table: MetricsTable,
    /// Sorted by (case id, logic, formalizer).
    pub log: Vec<CaseRecord>,
    /// Full traces, same order as `log`.
    pub outcomes: Vec<Option<CaseOutcome>>,
}

impl Evaluation {
    /// One JSON object per line.
    pub fn log_lines(&self) -> String {
        let mut s = String::new();
        for r in &self.log {
            s.push_str(&serde_json::to_string(r).expect("records serialize"));
            s.push('\n');
        }
        s
    }
}

/// Runs every (case, logic, formalizer) cell. Mock formalizers skip cases
/// without a gold formalization for the logic.
pub fn evaluate(
    dataset: &[ProblemDoc],
    logics: &[LogicId],
    specs: &[FormalizerSpec],
    config: &EvalConfig,
) -> Result<Evaluation, EvalError> {
    if logics.is_empty() {
        return Err(EvalError::EmptyGrid("no logics selected"));
    }
    if specs.is_empty() {
        return Err(EvalError::EmptyGrid("no formalizers selected"));
    }
    if dataset.is_empty() {
        return Err(EvalError::EmptyGrid("no cases"));
    }
    let logics: BTreeSet<LogicId> = logics.iter().copied().collect();
    let built = specs
        .iter()
        .map(|s| {
            s.build()
                .map(|f| (s, f))
                .map_err(|e| EvalError::Formalizer {
                    label: s.label().to_string(),
                    message: e.to_string(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut jobs = Vec::new();
    for case in dataset {
        for &logic in &logics {
            for (spec, f) in &built {
                if spec.requires_gold() && case.gold_for(logic).is_none() {
                    continue;
                }
                jobs.push((case, logic, *spec, f.clone()));
            }
        }
    }
    jobs.shuffle(&mut ChaCha8Rng::seed_from_u64(config.seed));

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.jobs {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| EvalError::Pool(e.to_string()))?;
    let mut results: Vec<(CaseRecord, Option<CaseOutcome>)> = pool.install(|| {
        jobs.par_iter()
            .map(|(case, logic, spec, f)| {
                match run_case(case, *logic, f.as_ref(), spec.label(), &config.run) {
                    Ok(o) => (CaseRecord::from_outcome(&o), Some(o)),
                    Err(e) => {
                        log::warn!("{} [{logic}, {}]: {e}", case.id, spec.label());
                        let record = CaseRecord {
                            case_id: case.id.clone(),
                            logic: *logic,
                            formalizer: spec.label().to_string(),
                            domain: case.domain,
                            status: CaseStatus::Failed,
                            iterations_used: 0,
                            solving_time_ms: 0.0,
                            error_category: None,
                            error: Some(e.to_string()),
                        };
                        (record, None)
                    }
                }
            })
            .collect()
    });
    results.sort_by(|(a, _), (b, _)| {
        (&a.case_id, a.logic, &a.formalizer).cmp(&(&b.case_id, b.logic, &b.formalizer))
    });
    let (log, outcomes): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok(Evaluation {
        table: MetricsTable::from_records(&log),
        log,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(domain: Domain, status: CaseStatus, iters: usize, ms: f64) -> CaseRecord {
        CaseRecord {
            case_id: format!("{domain}-{status}-{iters}-{ms}"),
            logic: LogicId::Kd,
            formalizer: "gold-mock".into(),
            domain,
            status,
            iterations_used: iters,
            solving_time_ms: ms,
            error_category: None,
            error: None,
        }
    }

    #[test]
    fn failed_cases_do_not_move_the_time_average() {
        let mut log = vec![
            record(Domain::Classical, CaseStatus::Verified, 0, 10.0),
            record(Domain::Classical, CaseStatus::VerifiedUpToBound, 2, 30.0),
        ];
        let before = MetricsTable::from_records(&log).cells[0].avg_solve_ms();
        log.push(record(Domain::Classical, CaseStatus::Failed, 3, 5000.0));
        let t = MetricsTable::from_records(&log);
        let c = &t.cells[0];
        assert_eq!(c.avg_solve_ms(), before);
        assert_eq!(c.avg_solve_ms(), Some(20.0));
        assert!((c.valid_pct() - 200.0 / 3.0).abs() < 1e-12);
        assert_eq!(c.avg_iterations(), 5.0 / 3.0);
    }

    #[test]
    fn no_success_means_no_time_average() {
        let t = MetricsTable::from_records(&[record(
            Domain::Default,
            CaseStatus::SyntacticError,
            0,
            1.0,
        )]);
        assert_eq!(t.cells[0].avg_solve_ms(), None);
        assert_eq!(t.cells[0].syntax_err_pct(), 100.0);
    }

    #[test]
    fn each_case_lands_in_one_domain_row() {
        let log: Vec<_> = Domain::ALL
            .iter()
            .map(|&d| record(d, CaseStatus::Failed, 1, 0.0))
            .collect();
        let t = MetricsTable::from_records(&log);
        assert_eq!(t.cells.len(), 5);
        assert!(t.cells.iter().all(|c| c.cases == 1));
        assert_eq!(t.overall(LogicId::Kd, "gold-mock").unwrap().cases, 5);
    }

    #[test]
    fn empty_grid_is_rejected() {
        let doc = crate::parser::parse_problem(
            r#"{"id":"x","domain":"classical","premise":"p.","hypothesis":"q.","explanation":["e."]}"#,
        )
        .unwrap();
        let specs = [FormalizerSpec::gold()];
        assert!(matches!(
            evaluate(
                std::slice::from_ref(&doc),
                &[],
                &specs,
                &EvalConfig::deterministic()
            ),
            Err(EvalError::EmptyGrid(_))
        ));
        assert!(matches!(
            evaluate(&[doc], &[LogicId::Kd], &[], &EvalConfig::deterministic()),
            Err(EvalError::EmptyGrid(_))
        ));
    }
}
