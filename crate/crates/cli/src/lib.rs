//! Document formats and command line for `coxring-core`.

pub mod commands;
pub mod document;
pub mod fixtures;
pub mod grammar;
