//! Argument handling and the solve pipeline behind the `ezcasp` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ezcasp::asp::Lit;
use ezcasp::ca::{parse_ca, CaProgram, Semantics};
use ezcasp::engine::{solve_ca, Schema, SchemaConfig, Trace, DEFAULT_STEP_BUDGET};
use ezcasp::ground::{load, GroundConfig};
use ezcasp::lang::{pretty_print, EzProgram};
use ezcasp::oracle::{enumerate_answer_sets, validate_trace, OracleBounds};

use crate::bench::{parse_spec, run_bench, table};
use crate::clp::emit_clp;
use crate::output::format_answer;

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_ERROR: i32 = 1;

/// Overrides the default step budget.
pub const STEP_BUDGET_VAR: &str = "EZCASP_STEP_BUDGET";

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemaArg {
    Black,
    Grey,
    Clear,
}

impl From<SchemaArg> for Schema {
    fn from(s: SchemaArg) -> Schema {
        match s {
            SchemaArg::Black => Schema::Black,
            SchemaArg::Grey => Schema::Grey,
            SchemaArg::Clear => Schema::Clear,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SemanticsArg {
    Weak,
    Full,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Semantics {
        match s {
            SemanticsArg::Weak => Semantics::Weak,
            SemanticsArg::Full => Semantics::Full,
        }
    }
}

/// Constraint answer set solver for EZ programs.
///
/// Exit status: 10 when an extended answer set is found, 20 when there is
/// none, 1 on errors.
#[derive(Debug, Parser)]
#[command(name = "ezcasp", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every `instance<TAB>schema` pair of a spec file and print a table.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// EZ program, or a CA program when the name ends in `.ca`.
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "black")]
    schema: SchemaArg,
    #[arg(long, value_enum, default_value = "weak")]
    semantics: SemanticsArg,
    /// Number of extended answer sets to print, 0 for all.
    #[arg(short = 'n', default_value_t = 1)]
    n: u64,
    /// Clear-box: consult the CSP after this many decisions.
    #[arg(long, value_name = "K")]
    check_freq: Option<u32>,
    /// Print the ground program and stop.
    #[arg(long)]
    dump_ground: bool,
    /// Write the transition trace as JSON lines.
    #[arg(long, value_name = "FILE")]
    dump_trace: Option<PathBuf>,
    /// Write one CLP(FD) clause per answer set.
    #[arg(long, value_name = "FILE")]
    emit_clp: Option<PathBuf>,
    /// Check a trace file against the program; exit 0 when it is valid.
    #[arg(long, value_name = "FILE")]
    validate_trace: Option<PathBuf>,
    /// Enumerate by brute force instead of running the solver.
    #[arg(long)]
    oracle: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    spec: PathBuf,
    #[arg(long, value_enum, default_value = "weak")]
    semantics: SemanticsArg,
    /// Answer sets per run, 0 for all.
    #[arg(short = 'n', default_value_t = 1)]
    n: u64,
    /// Also write the rows as JSON lines.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

/// A program read from disk.
#[derive(Clone, Debug)]
pub struct Input {
    pub ca: CaProgram,
    /// The ground EZ program, absent for CA input.
    pub ground: Option<EzProgram>,
    pub warnings: Vec<String>,
}

/// Read an EZ program, or a CA program if the extension is `.ca`.
pub fn load_input(path: &Path) -> anyhow::Result<Input> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let at = || path.display().to_string();
    if path.extension().is_some_and(|e| e == "ca") {
        let ca = parse_ca(&text).with_context(at)?;
        return Ok(Input {
            ca,
            ground: None,
            warnings: Vec::new(),
        });
    }
    let loaded = load(&text, &GroundConfig::default()).with_context(at)?;
    let warnings = loaded.warnings.iter().map(ToString::to_string).collect();
    Ok(Input {
        ca: loaded.ca,
        ground: Some(loaded.ground),
        warnings,
    })
}

/// The step budget, from the environment when set.
pub fn step_budget() -> anyhow::Result<u64> {
    match std::env::var(STEP_BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{STEP_BUDGET_VAR}={v} is not a number")),
        Err(_) => Ok(DEFAULT_STEP_BUDGET),
    }
}

/// Run the command line and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match cli.command {
        Some(Command::Bench(b)) => bench(&b, out),
        None => solve(&cli.solve, out, err),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e:#}");
        EXIT_ERROR
    })
}

fn bench(args: &BenchArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let text = std::fs::read_to_string(&args.spec)
        .with_context(|| format!("cannot read {}", args.spec.display()))?;
    let base = args.spec.parent().unwrap_or(Path::new("."));
    let rows = parse_spec(&text, base).with_context(|| args.spec.display().to_string())?;
    let limit = (args.n > 0).then_some(args.n);
    let reports = run_bench(&rows, args.semantics.into(), limit, step_budget()?);
    write!(out, "{}", table(&reports))?;
    if let Some(path) = &args.json {
        let mut lines = String::new();
        for r in &reports {
            lines.push_str(&serde_json::to_string(r)?);
            lines.push('\n');
        }
        std::fs::write(path, lines).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(0)
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let Some(file) = &args.file else {
        bail!("no input file (see --help)")
    };
    let input = load_input(file)?;
    for w in &input.warnings {
        writeln!(err, "warning: {w}")?;
    }
    let ca = &input.ca;
    let semantics: Semantics = args.semantics.into();
    if args.dump_ground {
        match &input.ground {
            Some(g) => write!(out, "{}", pretty_print(g))?,
            None => write!(out, "{ca}")?,
        }
        return Ok(0);
    }
    if let Some(path) = &args.validate_trace {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let trace = Trace::from_jsonl(&text).with_context(|| path.display().to_string())?;
        return Ok(match validate_trace(&trace, ca) {
            Ok(r) => {
                writeln!(
                    out,
                    "valid: {} steps, {} learned, {} restarts, {} answers",
                    r.steps, r.learned, r.restarts, r.answers
                )?;
                0
            }
            Err(v) => {
                writeln!(err, "invalid trace: {v}")?;
                EXIT_ERROR
            }
        });
    }
    let limit = (args.n > 0).then_some(args.n);
    let answers: Vec<(Vec<Lit>, Vec<(String, i64)>)> = if args.oracle {
        let all = enumerate_answer_sets(ca, semantics, &OracleBounds::default())?;
        let flat = all
            .into_iter()
            .flat_map(|a| a.alphas.into_iter().map(move |alpha| (a.m.clone(), alpha)));
        flat.take(limit.map_or(usize::MAX, |n| n as usize))
            .collect()
    } else {
        let mut cfg = SchemaConfig {
            limit,
            step_budget: step_budget()?,
            trace: args.dump_trace.is_some(),
            ..SchemaConfig::new(args.schema.into(), semantics)
        };
        if let Some(k) = args.check_freq {
            cfg.check_freq = k;
        }
        let outcome = solve_ca(ca, &cfg)?;
        if let (Some(path), Some(trace)) = (&args.dump_trace, &outcome.trace) {
            write_file(path, &trace.to_jsonl())?;
        }
        outcome
            .answers
            .into_iter()
            .map(|a| (a.m, a.alpha))
            .collect()
    };
    for (m, alpha) in &answers {
        writeln!(out, "{}", format_answer(ca, m, alpha))?;
    }
    if let Some(path) = &args.emit_clp {
        let mut text = String::new();
        let mut last: Option<&Vec<Lit>> = None;
        for (m, _) in &answers {
            if last != Some(m) {
                text.push_str(&emit_clp(ca, m, semantics)?);
                text.push('\n');
                last = Some(m);
            }
        }
        write_file(path, &text)?;
    }
    if answers.is_empty() {
        writeln!(out, "UNSATISFIABLE")?;
        Ok(EXIT_UNSAT)
    } else {
        Ok(EXIT_SAT)
    }
}
