//! Command-line plumbing: seeded generators, JSON reports, the invariant
//! suite and argument dispatch.

pub mod cli;
pub mod report;
pub mod rng;
pub mod verify;

pub use cli::cli_dispatch;
pub use report::{emit_report, Report, RunConfig};
pub use rng::{random_set, SeededRng};
