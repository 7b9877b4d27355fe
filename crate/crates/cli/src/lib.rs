//! Command-line front end for `deligne-core`: expression grammar, instance
//! files and JSON reports.

pub mod commands;
pub mod eval;
pub mod expr;
pub mod instance;
pub mod report;
