//! File formats, parallel execution and the command line for `pegscope`.

pub mod cli;
pub mod curve_file;
pub mod format;
pub mod par;
pub mod svg;
pub mod tables;
