//! Contextual behavioural metrics over quantales.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod bounds;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod lts;
pub mod mlts;
pub mod quantale;
pub mod report;
pub mod solver;

pub use algebra::{build_term_lts, verify_composition, ComposeConfig, Operator, ProcessTerm, TermLts};
pub use bounds::Bounds;
pub use error::{Error, Result};
pub use lts::{load_lts, load_lts_documents, validate_immediate_metric, ImmediatePolicy, ProcessLts};
pub use mlts::{load_mlts, load_mlts_documents, validate_mlts, Mlts, SimPreorder, Term, TermId, Universe};
pub use quantale::{FiniteQuantale, Mode, Quantale, QuantaleValue};
pub use report::{Entry, Report, Status};
pub use solver::{MetricValue, ParamBisimFamily, Workbench};
