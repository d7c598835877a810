//! Command-line front end: builds the table of simple algebras, runs the
//! verification suites, searches for and checks isomorphism certificates,
//! and reads and writes algebra files.

pub mod analyze;
pub mod app;
pub mod claims;
pub mod files;
pub mod report;
pub mod source;
pub mod table;

use std::fmt;

pub use app::{run, Cli};
pub use claims::{verify_claims, ClaimParams, ClaimReport, Status, Suite};
pub use files::{export_algebra, import_algebra, AlgebraFile, CertificateFile, FileError};
pub use report::Format;
pub use table::{generate_table, render_table, TableRanges, TableRow};

/// Exit status for usage and input errors.
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input; exit status 3.
    Usage(String),
    /// A library call failed on input it accepted.
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
