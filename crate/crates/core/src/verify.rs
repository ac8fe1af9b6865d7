//! The two end-to-end checks shared by the command line and the corpus
//! manifest: equivalence of two processes and model checking of one.

use std::fmt;

use thiserror::Error;

use crate::ast::{render_trace, Formula, Model};
use crate::equivalence::{trace_equivalent, Side};
use crate::error::{CheckError, SemanticsError, SourceError};
use crate::logic::{check, diamond_witness};
use crate::semantics::{build_lts, ExploreLimits, Lts};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    Equivalent,
    Inequivalent,
    Ok,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Equivalent => "equivalent",
            Verdict::Inequivalent => "inequivalent",
            Verdict::Ok => "ok",
        }
    }

    pub fn parse(s: &str) -> Option<Verdict> {
        Some(match s {
            "holds" => Verdict::Holds,
            "fails" => Verdict::Fails,
            "equivalent" => Verdict::Equivalent,
            "inequivalent" => Verdict::Inequivalent,
            "ok" => Verdict::Ok,
            _ => return None,
        })
    }

    /// True for verdicts reporting that a property or equivalence failed.
    pub fn is_negative(self) -> bool {
        matches!(self, Verdict::Fails | Verdict::Inequivalent)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("parse error: {0}")]
    Parse(#[from] SourceError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

impl RunError {
    /// State-limit and divergence problems, as opposed to malformed input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            RunError::Semantics(SemanticsError::UnguardedRecursion(_))
                | RunError::Check(CheckError::Truncated)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub verdict: Verdict,
    /// Rendered label sequence, e.g. `choose(0).'keep(1)`.
    pub witness: Option<String>,
    /// Number of states of each LTS involved.
    pub states: Vec<usize>,
    /// For equivalence checks: the side that has the witness trace.
    pub witness_side: Option<Side>,
}

/// Builds the LTS of `root`, refusing truncated results.
pub fn build_complete(model: &Model, root: &str, limits: &ExploreLimits) -> Result<Lts, RunError> {
    let lts = build_lts(model, root, limits)?;
    if lts.is_truncated() {
        return Err(CheckError::Truncated.into());
    }
    Ok(lts)
}

pub fn run_eq(
    model: &Model,
    left: &str,
    right: &str,
    limits: &ExploreLimits,
) -> Result<Outcome, RunError> {
    let a = build_complete(model, left, limits)?;
    let b = build_complete(model, right, limits)?;
    let v = trace_equivalent(&a, &b)?;
    Ok(Outcome {
        verdict: if v.equivalent {
            Verdict::Equivalent
        } else {
            Verdict::Inequivalent
        },
        witness: v.witness.as_deref().map(render_trace),
        states: vec![a.num_states(), b.num_states()],
        witness_side: v.witness_side,
    })
}

/// Model checks `formula` at the initial state of `process`. When a formula
/// without diamonds or fixpoints fails, the witness is a path realising its
/// dual, i.e. a counterexample.
pub fn run_mc(
    model: &Model,
    process: &str,
    formula: &Formula,
    limits: &ExploreLimits,
) -> Result<Outcome, RunError> {
    let lts = build_complete(model, process, limits)?;
    let holds = check(&lts, formula)?;
    let witness = if holds {
        None
    } else {
        let dual = formula.dual();
        if dual.is_existential() {
            diamond_witness(&lts, &dual)?.map(|w| render_trace(&w))
        } else {
            None
        }
    };
    Ok(Outcome {
        verdict: if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        witness,
        states: vec![lts.num_states()],
        witness_side: None,
    })
}
