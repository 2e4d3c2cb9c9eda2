//! File formats, reports and the acceptance suite behind the `subline`
//! command-line tool. The mathematics lives in `subline-core`.

pub mod matrix_file;
pub mod report;
pub mod selftest;
pub mod setspec;

pub use matrix_file::{parse_matrix, write_matrix, ParseError};
pub use report::{classify, ClassificationReport, Verdict};
pub use setspec::{parse_setspec, SetSpecError};
