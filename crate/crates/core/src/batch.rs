//! Batch evaluation of independent checks.
//!
//! With the `parallel` feature (enabled by default) [`Execution::Parallel`]
//! spreads work over the rayon thread pool. Without the feature every batch
//! runs sequentially on the calling thread. Results always come back in
//! input order, so both modes produce identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::ast::{Formula, Model};
use crate::equivalence::{trace_equivalent, EqVerdict};
use crate::error::{CheckError, SemanticsError};
use crate::logic::check;
use crate::semantics::{build_lts, ExploreLimits, Lts};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run batches in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Applies `f` to every item, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

pub fn build_all(
    model: &Model,
    roots: &[&str],
    limits: &ExploreLimits,
    exec: Execution,
) -> Vec<Result<Lts, SemanticsError>> {
    map(exec, roots, |root| build_lts(model, root, limits))
}

pub fn check_all(
    lts: &Lts,
    formulas: &[Formula],
    exec: Execution,
) -> Vec<Result<bool, CheckError>> {
    map(exec, formulas, |f| check(lts, f))
}

pub fn trace_equivalent_all(
    pairs: &[(&Lts, &Lts)],
    exec: Execution,
) -> Vec<Result<EqVerdict, CheckError>> {
    map(exec, pairs, |(a, b)| trace_equivalent(a, b))
}
