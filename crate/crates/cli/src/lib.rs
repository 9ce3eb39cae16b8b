//! Command-line front end for `textile-core`: reads system descriptions,
//! runs the structural checks and K-theory computations, and writes JSON or
//! aligned-text reports.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;
