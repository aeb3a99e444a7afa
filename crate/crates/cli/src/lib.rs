//! Document parsing, the example corpus and command reports behind the `nilcalc` binary.

pub mod commands;
pub mod corpus;
pub mod document;
pub mod error;
pub mod report;

pub use commands::{parse_xi, run_command, Command, Config};
pub use corpus::{corpus_generate, resolve_source};
pub use document::{parse_algebra, AlgebraDocument, ParsedAlgebra};
pub use error::{CliError, CliResult};
pub use report::AnalysisReport;
