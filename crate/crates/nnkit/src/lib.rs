//! Std companion to `nnkit-core`: deterministic dataset generation, the
//! engine benchmark, report and points-file I/O. The `nnkit` binary fronts
//! all of it.

pub mod bench;
pub mod error;
pub mod gen;
pub mod points_io;
pub mod report;

pub use error::HarnessError;
