//! Datalog with unrestricted negation, quantifiers and recursive
//! aggregation, evaluated under founded and constraint semantics.

pub mod ast;
pub mod cli;
pub mod corpus;
pub mod declare;
pub mod depgraph;
pub mod error;
pub mod eval;
pub mod ground;
pub mod oracle;
pub mod parser;
pub mod report;
pub mod semantics;
pub mod transform;
pub mod value;

pub use ast::{Program, Rule};
pub use error::{Error, Result};
pub use parser::parse;
