//! Bundled models and the expected-results manifest that pins them.
//!
//! The manifest is line oriented with tab-separated fields:
//!
//! ```text
//! model    command  args               verdict       witness             states
//! bb84.ccs eq       BB84p Spec         inequivalent  choose(0).'keep(1)  N,3
//! ```
//!
//! `args` is `P Q` for `eq` and `P FORMULA` for `mc`. Empty optional
//! fields are written `-`. Blank lines and lines starting with `#` are
//! ignored.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ast::Model;
use crate::batch::{self, Execution};
use crate::parser::{parse_formula, parse_model};
use crate::semantics::ExploreLimits;
use crate::verify::{run_eq, run_mc, Outcome, RunError, Verdict};

/// The BB84 model as shipped in `corpus/bb84.ccs`.
pub const BB84_MODEL: &str = include_str!("../../../corpus/bb84.ccs");
pub const MANIFEST: &str = include_str!("../../../corpus/manifest");

/// Location of the corpus directory in a source checkout.
pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ManifestCommand {
    Eq { left: String, right: String },
    Mc { process: String, formula: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    /// 1-based line in the manifest; used as the entry identifier.
    pub line: usize,
    pub model: String,
    pub command: ManifestCommand,
    pub verdict: Verdict,
    pub witness: Option<String>,
    pub states: Option<Vec<usize>>,
}

impl ManifestEntry {
    pub fn describe(&self) -> String {
        match &self.command {
            ManifestCommand::Eq { left, right } => format!("{} eq {left} {right}", self.model),
            ManifestCommand::Mc { process, formula } => {
                format!("{} mc {process} {formula}", self.model)
            }
        }
    }
}

fn optional(field: &str) -> Option<&str> {
    match field.trim() {
        "" | "-" => None,
        s => Some(s),
    }
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>, CorpusError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let bad = |message: String| CorpusError::Manifest { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if !(4..=6).contains(&fields.len()) {
            return Err(bad(format!(
                "expected 4 to 6 tab-separated fields, found {}",
                fields.len()
            )));
        }
        let args = fields[2].trim();
        let command = match fields[1].trim() {
            "eq" => {
                let names: Vec<&str> = args.split_whitespace().collect();
                let [left, right] = names[..] else {
                    return Err(bad("eq takes exactly two process names".into()));
                };
                ManifestCommand::Eq {
                    left: left.into(),
                    right: right.into(),
                }
            }
            "mc" => {
                let Some((process, formula)) = args.split_once(char::is_whitespace) else {
                    return Err(bad("mc takes a process name and a formula".into()));
                };
                ManifestCommand::Mc {
                    process: process.into(),
                    formula: formula.trim().into(),
                }
            }
            other => return Err(bad(format!("unknown command `{other}`"))),
        };
        let verdict = Verdict::parse(fields[3].trim())
            .ok_or_else(|| bad(format!("unknown verdict `{}`", fields[3].trim())))?;
        let witness = fields.get(4).and_then(|f| optional(f)).map(String::from);
        let states = match fields.get(5).and_then(|f| optional(f)) {
            None => None,
            Some(s) => Some(
                s.split(',')
                    .map(|n| n.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| bad(format!("bad state count: {e}")))?,
            ),
        };
        entries.push(ManifestEntry {
            line,
            model: fields[0].trim().into(),
            command,
            verdict,
            witness,
            states,
        });
    }
    Ok(entries)
}

/// Runs one entry against an already parsed model.
pub fn replay(
    entry: &ManifestEntry,
    model: &Model,
    limits: &ExploreLimits,
) -> Result<Outcome, RunError> {
    match &entry.command {
        ManifestCommand::Eq { left, right } => run_eq(model, left, right, limits),
        ManifestCommand::Mc { process, formula } => {
            run_mc(model, process, &parse_formula(formula)?, limits)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryReport {
    pub line: usize,
    pub description: String,
    pub passed: bool,
    /// Empty on success, otherwise what differed.
    pub detail: String,
}

fn compare(entry: &ManifestEntry, outcome: &Outcome) -> Vec<String> {
    let mut diffs = Vec::new();
    if outcome.verdict != entry.verdict {
        diffs.push(format!(
            "verdict {} (expected {})",
            outcome.verdict, entry.verdict
        ));
    }
    if outcome.witness != entry.witness {
        diffs.push(format!(
            "witness {} (expected {})",
            outcome.witness.as_deref().unwrap_or("-"),
            entry.witness.as_deref().unwrap_or("-")
        ));
    }
    if let Some(expected) = &entry.states {
        if *expected != outcome.states {
            diffs.push(format!(
                "state counts {:?} (expected {expected:?})",
                outcome.states
            ));
        }
    }
    diffs
}

/// Replays every manifest entry in `dir` through the library and compares
/// verdicts, witnesses and state counts exactly.
pub fn verify_manifest(dir: &Path) -> Result<Vec<EntryReport>, CorpusError> {
    verify_manifest_with(dir, Execution::default())
}

pub fn verify_manifest_with(dir: &Path, exec: Execution) -> Result<Vec<EntryReport>, CorpusError> {
    let read = |path: PathBuf| {
        fs::read_to_string(&path).map_err(|source| CorpusError::Io { path, source })
    };
    let entries = parse_manifest(&read(dir.join("manifest"))?)?;

    let mut models: HashMap<&str, Result<Model, String>> = HashMap::new();
    for e in &entries {
        if !models.contains_key(e.model.as_str()) {
            let text = read(dir.join(&e.model))?;
            models.insert(&e.model, parse_model(&text).map_err(|err| err.to_string()));
        }
    }

    let limits = ExploreLimits::default();
    Ok(batch::map(exec, &entries, |entry| {
        let detail = match &models[entry.model.as_str()] {
            Err(e) => format!("model does not parse: {e}"),
            Ok(model) => match replay(entry, model, &limits) {
                Err(e) => format!("error: {e}"),
                Ok(outcome) => compare(entry, &outcome).join("; "),
            },
        };
        EntryReport {
            line: entry.line,
            description: entry.describe(),
            passed: detail.is_empty(),
            detail,
        }
    }))
}
