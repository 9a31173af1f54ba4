use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::{MetricsCell, MetricsTable};

pub const CSV_HEADER: &str =
    "logic,formalizer,domain,cases,valid_pct,avg_iter,avg_solve_ms,syntax_err_pct";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

impl ReportFormat {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> ReportFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => ReportFormat::Json,
            Some("md" | "markdown") => ReportFormat::Markdown,
            _ => ReportFormat::Csv,
        }
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            other => Err(format!(
                "unknown report format `{other}` (expected csv, json or markdown)"
            )),
        }
    }
}

pub fn render_csv(m: &MetricsTable) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(','))
        .expect("in-memory write");
    for c in &m.cells {
        w.write_record([
            c.logic.to_string(),
            c.formalizer.clone(),
            c.domain.to_string(),
            c.cases.to_string(),
            format!("{:.2}", c.valid_pct()),
            format!("{:.2}", c.avg_iterations()),
            c.avg_solve_ms()
                .map(|v| format!("{v:.2}"))
                .unwrap_or_default(),
            format!("{:.2}", c.syntax_err_pct()),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

fn seconds(ms: Option<f64>) -> String {
    ms.map(|v| format!("{:.2}", v / 1000.0))
        .unwrap_or_else(|| "-".into())
}

pub fn render_markdown(m: &MetricsTable) -> String {
    let logics = m.logics();
    let formalizers = m.formalizers();
    type Metric = fn(&MetricsCell) -> String;
    let metrics: [(&str, Metric); 4] = [
        ("Success rate (%)", |c| format!("{:.2}", c.valid_pct())),
        ("Average refinement iterations", |c| {
            format!("{:.2}", c.avg_iterations())
        }),
        ("Average solving time over successful cases (s)", |c| {
            seconds(c.avg_solve_ms())
        }),
        ("Syntactic error rate (%)", |c| {
            format!("{:.2}", c.syntax_err_pct())
        }),
    ];
    let mut s = String::new();
    for (title, metric) in metrics {
        let _ = writeln!(s, "## {title}\n");
        let _ = writeln!(
            s,
            "| formalizer | {} |",
            logics
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(" | ")
        );
        let _ = writeln!(s, "|---|{}", "---|".repeat(logics.len()));
        for f in &formalizers {
            let row: Vec<String> = logics
                .iter()
                .map(|&l| {
                    m.overall(l, f)
                        .map(|c| metric(&c))
                        .unwrap_or_else(|| "-".into())
                })
                .collect();
            let _ = writeln!(s, "| {f} | {} |", row.join(" | "));
        }
        s.push('\n');
    }
    let _ = writeln!(s, "## Per-domain breakdown\n");
    let _ = writeln!(s, "| logic | formalizer | domain | cases | success (%) | iterations | solving time (s) | syntax errors (%) |");
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|");
    for c in &m.cells {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {:.2} | {:.2} | {} | {:.2} |",
            c.logic,
            c.formalizer,
            c.domain,
            c.cases,
            c.valid_pct(),
            c.avg_iterations(),
            seconds(c.avg_solve_ms()),
            c.syntax_err_pct()
        );
    }
    s
}

pub fn emit_report(
    m: &MetricsTable,
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> std::io::Result<()> {
    let body = match format {
        ReportFormat::Csv => render_csv(m),
        ReportFormat::Json => {
            serde_json::to_string_pretty(m).map_err(std::io::Error::other)? + "\n"
        }
        ReportFormat::Markdown => render_markdown(m),
    };
    fs::write(path, body)
}
