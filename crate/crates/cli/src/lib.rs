//! Batch front end for the period-polynomial verifier: input discovery,
//! parallel execution and report serialization.

pub mod output;
pub mod report;
pub mod run;

pub use report::{FormReport, Report};
pub use run::{CliError, Format, RunConfig};
