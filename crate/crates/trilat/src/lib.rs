//! Lattice complex hyperbolic triangle groups over exact cyclotomic
//! arithmetic: the form and generators, word evaluation, isometry
//! classification, mirror stabilizers and their trace fields.

pub mod catalog;
pub mod classify;
pub mod forms;
pub mod report;
pub mod stabilizer;
pub mod tracefield;
pub mod words;

use cyclo::CycloError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrilatError {
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error("singular matrix")]
    Singular,
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("data error: {0}")]
    Data(String),
    #[error("unknown group {0}")]
    UnknownGroup(String),
    #[error("symbol {sym} is not available in family {family}")]
    Unavailable { sym: char, family: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub use catalog::{catalog, Catalog, Family, GroupInstance};
pub use forms::{HermitianForm, Mat3, Vec3};
pub use words::Word;
