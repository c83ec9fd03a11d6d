//! Verification suites: a fixed registry of statements, each mapped to a
//! checklist of numerical checks with thresholds read from a
//! [`SuiteConfig`], plus report persistence.

pub mod config;
pub mod registry;
pub mod run;
mod suites;
pub mod verdict;

pub use config::{Depths, Schedules, SuiteConfig, Tolerances};
pub use registry::TheoremId;
pub use run::{run_suite, verify, write_report, SuiteReport};
pub use verdict::{Evidence, Status, Table, TheoremVerdict};
