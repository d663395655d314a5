//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by construction and evaluation routines.
///
/// Structural problems (shape, symmetry) and invariant violations are kept
/// as separate variants so callers can distinguish "bad input file" from
/// "numerically broken state".
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric: max |A - A^T| entry = {max_asymmetry:.3e}")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("second-moment diagonal entry {index} is {value}, must equal 1")]
    UnitDiagonal { index: usize, value: f64 },

    #[error("correlator {index} is {value}, outside [-1, 1]")]
    CorrelatorRange { index: usize, value: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.6e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("{what} = {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },

    #[error("{what} has a non-real expectation: |imag| = {imag:.3e}")]
    NumericalIntegrity { what: &'static str, imag: f64 },

    #[error("state is not normalized: |norm - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("observable is not Hermitian: max |O - O^H| entry = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("observable is not dichotomic: max |O^2 - I| entry = {deviation:.3e}")]
    NotDichotomic { deviation: f64 },

    #[error("setting index {index} out of range: party has {count} settings")]
    SettingIndex { index: usize, count: usize },

    #[error("unsupported scenario: {0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
