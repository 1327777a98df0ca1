//! Library side of the `hyperpack` command-line tool.

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;
