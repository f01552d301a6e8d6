//! Experiment driver for `qctree`: seeded lemma suites, witnesses and
//! schema-versioned JSON documents.

pub mod config;
pub mod doc;
pub mod error;
mod float;
pub mod gen;
pub mod lemmas;
pub mod oracle;
pub mod suite;

pub use config::{ExperimentConfig, Tolerances, TrialParams};
pub use error::CliError;
pub use suite::{replay, run_suite, Report, SuiteReport, Witness};
