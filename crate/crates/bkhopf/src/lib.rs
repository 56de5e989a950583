//! File formats and the command-line front end for `bkhopf-core`.

pub mod cli;
pub mod format;
