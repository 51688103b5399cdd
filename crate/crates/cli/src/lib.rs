//! File formats, reports, test-system generation and the example suite
//! around [`minnorm_core`].

pub mod emit;
pub mod format;
pub mod generate;
pub mod suite;

pub use emit::{emit_report, exit_code, OracleComparison, ReportFormat};
pub use format::{parse_system, write_system, ParseError};
pub use suite::run_paper_suite;
