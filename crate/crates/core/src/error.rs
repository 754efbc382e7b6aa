use thiserror::Error;

use crate::recovery::Condition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed polynomial: {0}")]
    MalformedPolynomial(String),

    #[error("malformed matrix: {rows} rows, row {bad_row} has {cols} entries")]
    MalformedMatrix {
        rows: usize,
        bad_row: usize,
        cols: usize,
    },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("bad derivative request: {0}")]
    BadRequest(String),

    #[error("division by zero")]
    DivisionByZero,

    /// A recovery theorem's hypotheses did not hold. `conditions` records
    /// everything evaluated up to and including the failing check.
    #[error("not certified: {condition}")]
    NotCertified {
        condition: String,
        conditions: Vec<Condition>,
    },
}
