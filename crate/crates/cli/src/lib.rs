//! File formats, reports and the command-line front end.

pub mod commands;
pub mod demo;
pub mod error;
pub mod format;
pub mod report;
