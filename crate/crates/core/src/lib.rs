//! Modelling and verification toolkit for value-passing CCS.
//!
//! Models are parsed from text ([`parser`]), expanded into finite labeled
//! transition systems ([`semantics`]), and analysed either by weak trace
//! equivalence ([`equivalence`]) or by modal mu-calculus model checking
//! ([`logic`]).
//!
//! ```
//! use ccsv_core::{parser, semantics, equivalence};
//!
//! let model = parser::parse_model(ccsv_core::corpus::BB84_MODEL).unwrap();
//! let limits = semantics::ExploreLimits::default();
//! let bb84 = semantics::build_lts(&model, "BB84", &limits).unwrap();
//! let spec = semantics::build_lts(&model, "Spec", &limits).unwrap();
//! assert!(equivalence::trace_equivalent(&bb84, &spec).unwrap().equivalent);
//! ```

pub mod ast;
pub mod batch;
pub mod corpus;
pub mod equivalence;
pub mod error;
pub mod logic;
pub mod parser;
pub mod semantics;
pub mod verify;

pub use ast::{Formula, GroundLabel, LabelPattern, Model, ProcessTerm, Value};
pub use error::{CheckError, EvalError, SemanticsError, SourceError};
pub use semantics::{ExploreLimits, Lts};
