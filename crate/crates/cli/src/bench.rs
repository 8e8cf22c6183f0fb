//! Benchmark harness: run instance × schema combinations and tabulate the
//! solver's counters.

use std::path::{Path, PathBuf};
use std::time::Instant;

use ezcasp::ca::Semantics;
use ezcasp::engine::{solve_ca, EngineError, Schema, SchemaConfig};
use rayon::prelude::*;
use serde::Serialize;

use crate::app::load_input;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("line {line}: expected `instance<TAB>schema`")]
    Shape { line: usize },
    #[error("line {line}: unknown schema `{schema}`")]
    Schema { line: usize, schema: String },
}

/// One row of a bench spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub instance: PathBuf,
    pub schema: Schema,
}

/// Parse `instance<TAB>schema` lines; blank lines and `#` comments are
/// skipped and relative paths are resolved against `base`.
pub fn parse_spec(text: &str, base: &Path) -> Result<Vec<BenchRow>, SpecError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let [instance, schema] = line.split('\t').collect::<Vec<_>>()[..] else {
            return Err(SpecError::Shape { line: line_no });
        };
        let schema = schema.trim().parse().map_err(|_| SpecError::Schema {
            line: line_no,
            schema: schema.trim().to_string(),
        })?;
        rows.push(BenchRow {
            instance: base.join(instance.trim()),
            schema,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub instance: String,
    pub schema: String,
    pub semantics: String,
    /// `SAT(n)`, `UNSAT`, `budget-exceeded` or `error: …`.
    pub outcome: String,
    /// Extended answer sets found.
    pub answers: usize,
    pub wall_ms: f64,
    pub decisions: u64,
    pub propagations: u64,
    pub cp_checks: u64,
    pub learned: u64,
    pub restarts: u64,
}

impl RunReport {
    pub fn is_sat(&self) -> bool {
        self.outcome.starts_with("SAT")
    }
}

/// Solve one row with its own solver state.
pub fn run_row(
    row: &BenchRow,
    semantics: Semantics,
    limit: Option<u64>,
    step_budget: u64,
) -> RunReport {
    let name = row.instance.file_name().map_or_else(
        || row.instance.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    );
    let mut report = RunReport {
        instance: name,
        schema: row.schema.to_string(),
        semantics: semantics.to_string(),
        outcome: String::new(),
        answers: 0,
        wall_ms: 0.0,
        decisions: 0,
        propagations: 0,
        cp_checks: 0,
        learned: 0,
        restarts: 0,
    };
    let start = Instant::now();
    let cfg = SchemaConfig {
        limit,
        step_budget,
        ..SchemaConfig::new(row.schema, semantics)
    };
    let result = load_input(&row.instance).map(|input| solve_ca(&input.ca, &cfg));
    report.wall_ms = start.elapsed().as_secs_f64() * 1000.0;
    match result {
        Ok(Ok(out)) => {
            report.answers = out.answers.len();
            report.outcome = if out.is_unsat() {
                "UNSAT".into()
            } else {
                format!("SAT({})", out.answers.len())
            };
            let s = &out.stats;
            (report.decisions, report.propagations, report.cp_checks) =
                (s.decisions, s.propagations, s.cp_checks);
            (report.learned, report.restarts) = (s.learned, s.restarts);
        }
        Ok(Err(EngineError::StepBudget(_))) => report.outcome = "budget-exceeded".into(),
        Ok(Err(e)) => report.outcome = format!("error: {e}"),
        Err(e) => report.outcome = format!("error: {e:#}"),
    }
    report
}

/// Run every row in parallel; reports come back in spec order.
pub fn run_bench(
    rows: &[BenchRow],
    semantics: Semantics,
    limit: Option<u64>,
    step_budget: u64,
) -> Vec<RunReport> {
    rows.par_iter()
        .map(|r| run_row(r, semantics, limit, step_budget))
        .collect()
}

/// Fixed-width text table, one line per report.
pub fn table(reports: &[RunReport]) -> String {
    let mut s = format!(
        "{:<24} {:<6} {:<5} {:<16} {:>10} {:>9} {:>9} {:>7} {:>7} {:>8}\n",
        "instance",
        "schema",
        "sem",
        "outcome",
        "ms",
        "decisions",
        "props",
        "checks",
        "learned",
        "restarts"
    );
    for r in reports {
        s.push_str(&format!(
            "{:<24} {:<6} {:<5} {:<16} {:>10.1} {:>9} {:>9} {:>7} {:>7} {:>8}\n",
            r.instance,
            r.schema,
            r.semantics,
            r.outcome,
            r.wall_ms,
            r.decisions,
            r.propagations,
            r.cp_checks,
            r.learned,
            r.restarts
        ));
    }
    s
}
