use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument {value} outside domain ({reason})")]
    Domain {
        function: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("2m = {two_m} and 2s = {two_s} differ in parity")]
    Parity { two_m: i32, two_s: i32 },

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("invalid system parameters: {0}")]
    InvalidParams(String),

    #[error("point lies on the focal segment; spheroidal coordinates are degenerate")]
    DegenerateGeometry,

    #[error("tridiagonal eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
