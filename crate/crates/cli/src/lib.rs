//! A small declarative language for exact checks on Cartan systems.
//!
//! ```text
//! algebra g = catalog("so", 1, 4)
//! split s = desitter(g, 4)
//! check desitter(s)
//! ```

pub mod ast;
pub mod builtin;
pub mod parse;
pub mod report;
pub mod run;

pub use ast::{render, SpecDocument, Statement, StatementKind};
pub use parse::{parse_document, ParseError, ParseErrorKind};
pub use report::{CheckReport, CheckResult, Status};
pub use run::{run_document, RunOptions};
