//! Command-line front end for `icnls-core`: configuration, JSON and CSV
//! persistence, parameter scans and the verification suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod scan;
pub mod suite;
