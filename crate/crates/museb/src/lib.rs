//! JSON file formats and the `museb` command-line frontend.

pub mod cli;
pub mod format;

pub use format::{FamilyFile, FormatError, MatrixFile};
