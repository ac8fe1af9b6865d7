//! The `ccsv` command line: parse models, export transition systems, check
//! trace equivalence and modal properties, and list bounded traces.
//!
//! Exit codes: 0 success / holds / equivalent, 1 fails / inequivalent,
//! 2 usage, parse or semantic error, 3 state limit or unguarded recursion.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use ccsv_core::ast::{render_trace, Model};
use ccsv_core::equivalence::{bounded_traces, Side};
use ccsv_core::parser::{parse_formula, parse_model, print_model};
use ccsv_core::semantics::{build_lts, to_dot, ExploreLimits, Lts};
use ccsv_core::verify::{run_eq, run_mc, Outcome, RunError, Verdict};
use ccsv_core::SemanticsError;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ccsv",
    version,
    about = "Trace equivalence and mu-calculus checking for value-passing CCS"
)]
struct Cli {
    /// Stop exploring after this many states.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_states: u64,
    /// Print a single JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide weak trace equivalence of two processes.
    Eq {
        model: PathBuf,
        p: String,
        q: String,
    },
    /// Check a modal mu-calculus formula at a process.
    Mc {
        model: PathBuf,
        process: String,
        #[command(flatten)]
        formula: FormulaSource,
    },
    /// Explore a process and write its transition system as GraphViz.
    Lts {
        model: PathBuf,
        process: String,
        /// Output path; `-` writes to standard output.
        #[arg(long)]
        dot: PathBuf,
    },
    /// List the observable traces of a process up to a length.
    Traces {
        model: PathBuf,
        process: String,
        #[arg(long)]
        depth: usize,
    },
    /// Parse a model and print it in canonical layout.
    Fmt { model: PathBuf },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct FormulaSource {
    /// The formula text.
    #[arg(long)]
    formula: Option<String>,
    /// A file holding the formula.
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

/// The machine-readable result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states_a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states_b: Option<usize>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{path}:{source}")]
    Source {
        path: PathBuf,
        source: ccsv_core::SourceError,
    },
    #[error("formula:{0}")]
    Formula(ccsv_core::SourceError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        let limit = match self {
            CliError::Run(e) => e.is_resource_limit(),
            CliError::Semantics(e) => matches!(e, SemanticsError::UnguardedRecursion(_)),
            _ => false,
        };
        if limit {
            EXIT_LIMIT
        } else {
            EXIT_ERROR
        }
    }
}

/// Runs the command line with the given arguments (program name excluded),
/// writing to the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Like [`run`], with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("ccsv")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_ERROR
                }
            };
        }
    };
    let json = cli.json;
    let start = Instant::now();
    match execute(cli, out, err) {
        Ok(mut report) => {
            report.elapsed_ms = u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX);
            if json {
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&report).expect("report serialises")
                );
            }
            if Verdict::parse(&report.verdict).is_some_and(Verdict::is_negative) {
                EXIT_NEGATIVE
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })
}

fn load_model(path: &Path) -> Result<Model, CliError> {
    parse_model(&read(path)?).map_err(|source| CliError::Source {
        path: path.to_owned(),
        source,
    })
}

fn report(command: &str, outcome: &Outcome) -> RunReport {
    RunReport {
        command: command.into(),
        verdict: outcome.verdict.to_string(),
        witness: outcome.witness.clone(),
        states_a: outcome.states.first().copied(),
        states_b: outcome.states.get(1).copied(),
        elapsed_ms: 0,
    }
}

fn ok_report(command: &str, states: usize) -> RunReport {
    RunReport {
        command: command.into(),
        verdict: Verdict::Ok.to_string(),
        witness: None,
        states_a: Some(states),
        states_b: None,
        elapsed_ms: 0,
    }
}

/// Builds an LTS for inspection commands. Truncation is not an error here:
/// the partial system is still useful, so it is only reported.
fn explore(
    model: &Model,
    process: &str,
    limits: &ExploreLimits,
    err: &mut dyn Write,
) -> Result<Lts, CliError> {
    let lts = build_lts(model, process, limits)?;
    if lts.is_truncated() {
        let _ = writeln!(
            err,
            "warning: exploration of {process} stopped at {} states; the result is partial",
            lts.num_states()
        );
    }
    Ok(lts)
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<RunReport, CliError> {
    let limits =
        ExploreLimits::with_max_states(usize::try_from(cli.max_states).unwrap_or(usize::MAX));
    let text = !cli.json;
    match cli.command {
        Command::Eq { model, p, q } => {
            let outcome = run_eq(&load_model(&model)?, &p, &q, &limits)?;
            if text {
                let _ = writeln!(out, "{}", outcome.verdict);
                let _ = writeln!(
                    out,
                    "states: {p} {}, {q} {}",
                    outcome.states[0], outcome.states[1]
                );
                if let Some(w) = &outcome.witness {
                    let (has, lacks) = match outcome.witness_side {
                        Some(Side::Second) => (&q, &p),
                        _ => (&p, &q),
                    };
                    let _ = writeln!(out, "witness: {w} (a trace of {has} but not of {lacks})");
                }
            }
            Ok(report("eq", &outcome))
        }
        Command::Mc {
            model,
            process,
            formula,
        } => {
            let m = load_model(&model)?;
            let source = match (formula.formula, formula.formula_file) {
                (Some(f), _) => f,
                (None, Some(path)) => read(&path)?,
                (None, None) => unreachable!("clap requires one formula source"),
            };
            let f = parse_formula(&source).map_err(CliError::Formula)?;
            let outcome = run_mc(&m, &process, &f, &limits)?;
            if text {
                let _ = writeln!(out, "{}", outcome.verdict);
                let _ = writeln!(out, "states: {process} {}", outcome.states[0]);
                if let Some(w) = &outcome.witness {
                    let _ = writeln!(out, "counterexample: {w}");
                }
            }
            Ok(report("mc", &outcome))
        }
        Command::Lts {
            model,
            process,
            dot,
        } => {
            let lts = explore(&load_model(&model)?, &process, &limits, err)?;
            let rendered = to_dot(&lts);
            if dot.as_os_str() == "-" {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                fs::write(&dot, rendered).map_err(|source| CliError::Write {
                    path: dot.clone(),
                    source,
                })?;
                if text {
                    let _ = writeln!(
                        out,
                        "{process}: {} states, {} transitions written to {}",
                        lts.num_states(),
                        lts.transitions().len(),
                        dot.display()
                    );
                }
            }
            Ok(ok_report("lts", lts.num_states()))
        }
        Command::Traces {
            model,
            process,
            depth,
        } => {
            let lts = explore(&load_model(&model)?, &process, &limits, err)?;
            if text {
                for t in bounded_traces(&lts, depth) {
                    let line = if t.is_empty() {
                        "(empty)".to_string()
                    } else {
                        render_trace(&t)
                    };
                    let _ = writeln!(out, "{line}");
                }
            }
            Ok(ok_report("traces", lts.num_states()))
        }
        Command::Fmt { model } => {
            let m = load_model(&model)?;
            if text {
                let _ = write!(out, "{}", print_model(&m));
            }
            Ok(RunReport {
                command: "fmt".into(),
                verdict: Verdict::Ok.to_string(),
                witness: None,
                states_a: None,
                states_b: None,
                elapsed_ms: 0,
            })
        }
    }
}
