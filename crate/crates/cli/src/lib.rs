//! Command-line front end for the velgauge workbench: experiment
//! configuration ingestion, suite orchestration and report emission.
//!
//! Subcommands:
//!
//! * `verify-algebra [--algebra NAME]` — structure-constant checks, with a
//!   per-triple Jacobi table as CSV,
//! * `run <config>` — the selected suites in dependency order
//!   (algebra → lattice → fields → noether → reduction),
//! * `convergence <config> --resolutions 8,16` — error-ratio table across a
//!   resolution ladder,
//! * `reduce-akt <config>` — comparison against the independently coded
//!   space-time-gauge reference.
//!
//! Global flags: `--out <dir>`, `--seed <u64>`, `--dump-fields`,
//! `--list-checks`. Exit codes: 0 all asserted checks pass, 1 a check
//! failed, 2 configuration or validation error.

#![allow(clippy::needless_range_loop)]
#![allow(clippy::manual_is_multiple_of)]

pub mod config;
pub mod error;
pub mod output;
pub mod registry;
pub mod suites;

pub use config::ExperimentConfig;
pub use error::CliError;
