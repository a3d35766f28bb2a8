//! File formats, reports and the command-line front end for the
//! `bistochastic` privacy library.

pub mod cli;
pub mod config;
pub mod dataset_io;
pub mod error;
pub mod matrix_io;
pub mod report;
pub mod table1;
pub mod tuning;

pub use error::{CliError, ExitCode, Result};
