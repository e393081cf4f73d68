use thiserror::Error;

/// Errors raised by the matrix kernel, the involution machinery and the flow
/// combinators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square but had shape {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is singular")]
    Singular,

    #[error("computation diverged (overflow or non-finite intermediate)")]
    Diverged,

    #[error("eigenvalue {re:.6e}{im:+.6e}i lies on the closed negative real axis")]
    LogDomain { re: f64, im: f64 },

    #[error("matrix is not involutive: |S^2 - I|_F = {residual:.3e}")]
    NotInvolutive { residual: f64 },

    #[error("matrix is not 2-cyclic with respect to S: |SPS + P|_F = {residual:.3e}")]
    NotTwoCyclic { residual: f64 },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("{op} does not support truncation order {order} (allowed: {allowed})")]
    UnsupportedOrder {
        op: &'static str,
        order: u32,
        allowed: &'static str,
    },

    #[error("function undefined on the spectrum: {0}")]
    FunctionDomain(String),

    #[error("step count {n_steps} is not a multiple of the macro-step period {period}")]
    PeriodMismatch { n_steps: usize, period: usize },

    #[error("need at least {required} usable ladder points, found {usable}")]
    InsufficientData { usable: usize, required: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
