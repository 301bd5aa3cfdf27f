//! Orchestration and reporting behind the `lcrec` binary.

pub mod claims;
pub mod cone;
pub mod error;
pub mod report;
pub mod samples;
pub mod text;

pub use error::{CliError, CliResult};
pub use report::{analyze, analyze_text, AnalysisReport, AnalyzeOptions, Overall};
