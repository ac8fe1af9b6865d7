use std::fmt;

use thiserror::Error;

/// Evaluation of a value or boolean expression that still has a free
/// variable. Only reachable when a caller skips substitution.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound value variable `{0}`")]
    Unbound(String),
}

/// A lexical, syntactic or static-semantic error in model or formula text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SourceError {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("no definition named `{0}`")]
    RootNotFound(String),
    #[error("`{name}` takes {arity} parameter(s); only parameterless definitions can be explored")]
    RootHasParams { name: String, arity: usize },
    #[error("unguarded recursion: `{0}` unfolded too often without passing an action prefix")]
    UnguardedRecursion(String),
    #[error("call to unknown definition `{0}`")]
    UnknownDefinition(String),
    #[error("`{name}` called with {found} argument(s), expects {expected}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("state is not ground: {0}")]
    NotGround(#[from] EvalError),
}

/// Errors from the equivalence and logic checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("transition system was truncated at the state limit; refusing to check it")]
    Truncated,
    #[error("formula has unbound variable `{0}`")]
    OpenFormula(String),
    #[error("witnesses are only produced for formulas built from tt, ff, &&, || and diamonds")]
    NotExistential,
}
