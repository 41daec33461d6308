//! Quadratic Fourier analysis on F_5^n.
//!
//! Gowers uniformity norms, progression-counting operators, quadratic
//! phases, quadratic factors and the regularity decompositions built on
//! them, all evaluated exactly at small n.

pub mod error;
pub mod field;
pub mod fourier;
pub mod gowers;
pub mod progressions;
pub mod quadratic;
pub mod factors;
pub mod decompose;
pub mod harness;

pub use error::{QfError, Result};
