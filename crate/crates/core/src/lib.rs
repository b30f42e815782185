//! NP-SPEC front end, ASP translator and reference semantics.
//!
//! The pipeline is [`frontend::parse`] → [`analyzer::analyze`] →
//! [`translator::translate`] → [`translator::emit_dialect`]. The [`oracle`]
//! module solves specs directly by guess enumeration and checks translated
//! programs with a naive grounder, so the two routes can be compared.

pub mod analyzer;
pub mod cli;
pub mod corpus;
pub mod diagnostics;
pub mod frontend;
pub mod oracle;
pub mod translator;
pub mod value;

pub use diagnostics::{Diagnostic, Error, ExitCode, Result};
