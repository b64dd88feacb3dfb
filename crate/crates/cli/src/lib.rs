//! Command-line front end for `gklandau`: configuration, verification
//! suites, reports and CSV exports.

pub mod config;
pub mod export;
pub mod report;
pub mod suites;

pub use config::{ConfigError, Format, RunConfig};
pub use report::{Quantity, ReportEntry};
pub use suites::{run_suite, Suite};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILED: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const IO: i32 = 3;
}

pub fn write_report<W: std::io::Write>(entries: &[ReportEntry], format: Format, w: W) -> std::io::Result<()> {
    match format {
        Format::Json => report::write_json(entries, w),
        Format::Csv => report::write_csv(entries, w),
    }
}
