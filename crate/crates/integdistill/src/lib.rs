//! Static integration analysis for MiniOO sources.
//!
//! The pipeline parses `.moo` files, resolves classes and inherited fields,
//! computes flow-insensitive def/use sets of class fields per method, and
//! from those derives:
//!
//! - parameter-coupling methods and constructors,
//! - integration test paths (method call sequences) grown from def-use
//!   relations between same-class methods,
//! - invocation points (cross-class call sites) with user-defined
//!   classification and per-class/per-method counts,
//! - class metrics and usage analytics,
//! - timing-probe instrumentation that wraps invocation points and can be
//!   stripped back out.

pub mod ast;
pub mod coupling;
pub mod instrument;
pub mod invocations;
pub mod lexer;
pub mod parser;
pub mod pathgen;
pub mod pipeline;
pub mod report;
pub mod semantic;
