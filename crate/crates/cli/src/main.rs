use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use logiparam::benchmark::{
    domain_histogram, emit_report, evaluate, load_dataset, render_csv, EvalConfig, ReportFormat,
};
use logiparam::parser::{parse_problems, ParseError};
use logiparam::pipeline::{
    run_case_with, FormalizerKind, FormalizerSpec, RunConfig, TimingMode, DETERMINISTIC_EFFORT,
};
use logiparam::prover::{check_consistency, check_entailment, ProverConfig, VerdictCertificate};
use logiparam::semantics::Consequence;
use logiparam::{parse_formula, Formula, LogicId};

const EXIT_STATUS: &str =
    "Exit status: 0 on a positive answer (entailed, consistent, verified, evaluation done); \
1 on a negative or undecided verdict (refuted, inconsistent, unknown, failed case); \
2 on usage, input or I/O errors.";

/// Logic-parametric verification of natural-language explanations.
#[derive(Parser, Debug)]
#[command(name = "logiparam", version, about, long_about = None, after_help = EXIT_STATUS)]
struct Cli {
    /// More log output (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Seed for randomized scheduling; reports do not depend on it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse formulas (one per line) or a problem file and echo the result.
    Parse {
        file: PathBuf,
        #[arg(long, short)]
        logic: LogicId,
        /// Also print the syntax tree.
        #[arg(long)]
        ast: bool,
    },
    /// Decide whether a theory (one formula per line) is satisfiable.
    Consistency {
        theory: PathBuf,
        #[arg(long, short)]
        logic: LogicId,
        #[command(flatten)]
        prover: ProverArgs,
    },
    /// Decide whether a theory entails a goal; prints a countermodel on refutation.
    Prove {
        /// Theory file, one formula per line; omitted means the empty theory.
        theory: Option<PathBuf>,
        #[arg(long, short)]
        goal: String,
        #[arg(long, short)]
        logic: LogicId,
        #[command(flatten)]
        prover: ProverArgs,
    },
    /// Run one case (or every case of a file) through the refinement loop.
    Verify {
        problem: PathBuf,
        #[arg(long, short)]
        logic: LogicId,
        #[arg(long, short, default_value = "gold-mock")]
        formalizer: FormalizerKind,
        /// Only run the case with this id.
        #[arg(long)]
        case: Option<String>,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        remote: RemoteArgs,
        #[command(flatten)]
        prover: ProverArgs,
    },
    /// Evaluate a dataset over a grid of logics and formalizers.
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
struct EvalArgs {
    dataset: PathBuf,
    /// Comma-separated logics, e.g. KD,FOL.
    #[arg(long, value_delimiter = ',')]
    logics: Vec<LogicId>,
    /// Comma-separated formalizers.
    #[arg(long, value_delimiter = ',')]
    formalizer: Vec<FormalizerKind>,
    /// Report path; the format follows the extension unless --format is given.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Per-case log, one JSON object per line.
    #[arg(long)]
    log: Option<PathBuf>,
    /// TOML grid configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    remote: RemoteArgs,
    #[command(flatten)]
    prover: ProverArgs,
}

#[derive(Args, Debug, Default)]
struct ProverArgs {
    /// World bounds to sweep, e.g. 1,2,3.
    #[arg(long, value_delimiter = ',')]
    bounds: Option<Vec<usize>>,
    /// Wall-clock budget per check in milliseconds (0 disables it).
    #[arg(long)]
    budget_ms: Option<u64>,
    /// Effort budget per check (solver decisions plus propagations).
    #[arg(long)]
    max_effort: Option<u64>,
    #[arg(long, value_enum)]
    consequence: Option<ConsequenceArg>,
    /// Effort budgets only: verdicts and reported times are machine independent.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// Refinement budget.
    #[arg(long)]
    t: Option<usize>,
    /// Solving-time measurement.
    #[arg(long, value_enum)]
    timing: Option<TimingArg>,
    /// Step withheld by the gap-injecting mock (1-based).
    #[arg(long)]
    gap_step: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct RemoteArgs {
    /// Chat-completions endpoint (defaults to $LOGIPARAM_LLM_URL).
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    model: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConsequenceArg {
    Global,
    Local,
}

#[derive(Clone, Copy, Debug, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TimingArg {
    Wall,
    Effort,
}

impl From<TimingArg> for TimingMode {
    fn from(t: TimingArg) -> Self {
        match t {
            TimingArg::Wall => TimingMode::Wall,
            TimingArg::Effort => TimingMode::Effort,
        }
    }
}

/// Grid configuration accepted by `eval --config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    logics: Option<Vec<String>>,
    formalizers: Option<Vec<String>>,
    t: Option<usize>,
    jobs: Option<usize>,
    seed: Option<u64>,
    timing: Option<TimingArg>,
    deterministic: Option<bool>,
    bounds: Option<Vec<usize>>,
    budget_ms: Option<u64>,
    max_effort: Option<u64>,
    out: Option<PathBuf>,
    format: Option<String>,
    log: Option<PathBuf>,
    endpoint: Option<String>,
    model: Option<String>,
    gap_step: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {error}")]
    Parse { path: PathBuf, error: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Other(#[from] Box<dyn std::error::Error + Send + Sync>),
}

fn other(e: impl std::error::Error + Send + Sync + 'static) -> CliError {
    CliError::Other(Box::new(e))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// One formula per non-blank line; `#` starts a comment line.
fn read_theory(path: &Path, logic: LogicId) -> Result<Vec<Formula>, CliError> {
    read(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            parse_formula(l, logic).map_err(|e| CliError::Parse {
                path: path.to_path_buf(),
                error: e.in_field(format!("line {}", i + 1)),
            })
        })
        .collect()
}

impl ProverArgs {
    fn config(&self) -> ProverConfig {
        let mut cfg = if self.deterministic {
            ProverConfig::deterministic(self.max_effort.unwrap_or(DETERMINISTIC_EFFORT))
        } else {
            ProverConfig {
                max_effort: self.max_effort,
                ..ProverConfig::default()
            }
        };
        if let Some(ms) = self.budget_ms {
            cfg.check_budget = (ms > 0).then(|| Duration::from_millis(ms));
        }
        cfg.bounds = self.bounds.clone();
        cfg.consequence = self.consequence.map(|c| match c {
            ConsequenceArg::Global => Consequence::Global,
            ConsequenceArg::Local => Consequence::Local,
        });
        cfg
    }
}

fn run_config(run: &RunArgs, prover: &ProverArgs) -> RunConfig {
    let mut cfg = if prover.deterministic {
        RunConfig::deterministic()
    } else {
        RunConfig::default()
    };
    cfg.prover = prover.config();
    if let Some(t) = run.t {
        cfg.t = t;
    }
    if let Some(timing) = run.timing {
        cfg.timing = timing.into();
    }
    cfg
}

fn formalizer_spec(kind: FormalizerKind, run: &RunArgs, remote: &RemoteArgs) -> FormalizerSpec {
    let mut spec = FormalizerSpec::new(kind);
    spec.gap_step = run.gap_step;
    spec.endpoint = remote.endpoint.clone();
    spec.model = remote.model.clone();
    spec
}

fn verdict_exit(cert: &VerdictCertificate, positive: bool) -> ExitCode {
    print!("{}", cert.render());
    if positive {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_parse(file: &Path, logic: LogicId, ast: bool) -> Result<ExitCode, CliError> {
    let text = read(file)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let docs = parse_problems(&text).map_err(|error| CliError::Parse {
            path: file.to_path_buf(),
            error,
        })?;
        for d in &docs {
            println!(
                "case {} ({}): {} premise sentences, {} explanation steps",
                d.id,
                d.domain,
                d.premise_sentences().len(),
                d.explanation.len()
            );
            match d.gold_for(logic) {
                Some(g) => {
                    for f in &g.theory {
                        println!("  premise: {}", f.pretty());
                    }
                    for f in &g.steps {
                        println!("  step: {}", f.pretty());
                    }
                    println!("  goal: {}", g.goal.pretty());
                }
                None => println!("  no {logic} gold formalization"),
            }
        }
        return Ok(ExitCode::SUCCESS);
    }
    for f in read_theory(file, logic)? {
        println!("{}", f.pretty());
        if ast {
            println!("  {f:?}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(args: EvalArgs, seed: Option<u64>) -> Result<ExitCode, CliError> {
    let EvalArgs {
        dataset,
        logics,
        formalizer: formalizers,
        out,
        format,
        log,
        config,
        jobs,
        mut run,
        mut remote,
        mut prover,
    } = args;
    let grid: GridFile = match &config {
        Some(p) => toml::from_str(&read(p)?)
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        None => GridFile::default(),
    };
    let logics = if logics.is_empty() {
        grid.logics
            .unwrap_or_default()
            .iter()
            .map(|s| s.parse::<LogicId>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(e.to_string()))?
    } else {
        logics
    };
    let formalizers = if formalizers.is_empty() {
        grid.formalizers
            .unwrap_or_default()
            .iter()
            .map(|s| s.parse::<FormalizerKind>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::Usage)?
    } else {
        formalizers
    };
    if logics.is_empty() {
        return Err(CliError::Usage(
            "no logics given (use --logics or a config file)".into(),
        ));
    }
    if formalizers.is_empty() {
        return Err(CliError::Usage(
            "no formalizer given (use --formalizer or a config file)".into(),
        ));
    }
    run.t = run.t.or(grid.t);
    run.timing = run.timing.or(grid.timing);
    run.gap_step = run.gap_step.or(grid.gap_step);
    remote.endpoint = remote.endpoint.or(grid.endpoint);
    remote.model = remote.model.or(grid.model);
    prover.bounds = prover.bounds.or(grid.bounds);
    prover.budget_ms = prover.budget_ms.or(grid.budget_ms);
    prover.max_effort = prover.max_effort.or(grid.max_effort);
    prover.deterministic |= grid.deterministic.unwrap_or(false);
    let format = match (format, grid.format) {
        (Some(f), _) => Some(f),
        (None, Some(s)) => Some(s.parse::<ReportFormat>().map_err(CliError::Usage)?),
        (None, None) => None,
    };
    let out = out.or(grid.out);
    let log_path = log.or(grid.log);

    let cases = load_dataset(&dataset).map_err(other)?;
    let hist: Vec<String> = domain_histogram(&cases)
        .iter()
        .map(|(d, n)| format!("{d}={n}"))
        .collect();
    eprintln!("loaded {} cases ({})", cases.len(), hist.join(", "));

    let specs: Vec<FormalizerSpec> = formalizers
        .into_iter()
        .map(|k| formalizer_spec(k, &run, &remote))
        .collect();
    let cfg = EvalConfig {
        run: run_config(&run, &prover),
        jobs: jobs.or(grid.jobs),
        seed: seed.or(grid.seed).unwrap_or(0),
    };
    let ev = evaluate(&cases, &logics, &specs, &cfg).map_err(other)?;
    match &out {
        Some(path) => {
            let fmt = format.unwrap_or_else(|| ReportFormat::from_path(path));
            emit_report(&ev.table, fmt, path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", render_csv(&ev.table)),
    }
    if let Some(path) = &log_path {
        fs::write(path, ev.log_lines()).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    for l in ev.table.logics() {
        for f in ev.table.formalizers() {
            if let Some(c) = ev.table.overall(l, &f) {
                eprintln!(
                    "{:>6} {f:<20} {:>4} cases  valid {:>6.2}%  iterations {:.2}",
                    l.to_string(),
                    c.cases,
                    c.valid_pct(),
                    c.avg_iterations()
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Parse { file, logic, ast } => cmd_parse(&file, logic, ast),
        Command::Consistency {
            theory,
            logic,
            prover,
        } => {
            let theory = read_theory(&theory, logic)?;
            let cert = check_consistency(logic, &theory, &prover.config()).map_err(other)?;
            Ok(verdict_exit(
                &cert,
                cert.verdict == logiparam::prover::Verdict::Consistent,
            ))
        }
        Command::Prove {
            theory,
            goal,
            logic,
            prover,
        } => {
            let theory = match theory {
                Some(p) => read_theory(&p, logic)?,
                None => Vec::new(),
            };
            let goal = parse_formula(&goal, logic).map_err(|error| CliError::Parse {
                path: PathBuf::from("--goal"),
                error,
            })?;
            let cert = check_entailment(logic, &theory, &goal, &prover.config()).map_err(other)?;
            Ok(verdict_exit(&cert, cert.verdict.is_positive()))
        }
        Command::Verify {
            problem,
            logic,
            formalizer,
            case,
            run,
            remote,
            prover,
        } => {
            let text = read(&problem)?;
            let docs = parse_problems(&text).map_err(|error| CliError::Parse {
                path: problem.clone(),
                error,
            })?;
            let selected: Vec<_> = docs
                .iter()
                .filter(|d| case.as_ref().map_or(true, |c| &d.id == c))
                .collect();
            if selected.is_empty() {
                return Err(CliError::Usage(format!(
                    "no case `{}` in {}",
                    case.unwrap_or_default(),
                    problem.display()
                )));
            }
            let spec = formalizer_spec(formalizer, &run, &remote);
            let cfg = run_config(&run, &prover);
            let mut all_ok = true;
            for doc in selected {
                let o = run_case_with(doc, logic, &spec, &cfg).map_err(other)?;
                print!("{}", o.render_trace());
                all_ok &= o.status.is_success();
            }
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Eval(args) => cmd_eval(args, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
