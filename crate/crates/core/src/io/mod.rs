//! Documents, reports and the command-line driver.

pub mod cli;
pub mod coefficient;
pub mod document;
pub mod report;

pub use coefficient::{parse_coefficient, CoefficientError};
pub use document::{load_document, parse_document, AlgebraDocument, DocumentError, LoadedDocument};
