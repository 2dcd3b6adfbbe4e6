use thiserror::Error;

/// Errors raised by the advection laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: need at least 2 cells, got {0}")]
    InvalidGrid(usize),
    #[error("invalid CFL number {p}/{q}: {reason}")]
    InvalidCfl {
        p: u64,
        q: u64,
        reason: &'static str,
    },
    #[error("invalid advection speed {0}: must be finite and positive")]
    InvalidSpeed(f64),
    #[error("invalid cell [{x_l}, {x_r}]: left end must be below right end")]
    InvalidCell { x_l: f64, x_r: f64 },
    #[error("invalid delta {delta}: must lie in (0, {limit})")]
    InvalidDelta { delta: f64, limit: f64 },
    #[error("grid with {m} cells is too small for a stencil of half-width {half_width}")]
    GridTooSmall { m: usize, half_width: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("initial profile `{0}` has no derivative; the direct strategy needs one")]
    MissingDerivative(String),
    #[error("no real eigenvalue with modulus in (0, 1)")]
    EigenNotFound,
    #[error("eigenvector does not realize branch pattern {expected}; realized {realized}")]
    PatternNotRealized { expected: String, realized: String },
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
    #[error("unknown initial profile `{0}`")]
    UnknownProfile(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("empty sweep: {0}")]
    EmptySweep(&'static str),
    #[error("need at least {needed} records, got {got}")]
    TooFewRecords { needed: usize, got: usize },
    #[error("target error {target} not bracketed at t_f = {t_f}")]
    TargetNotBracketed { target: f64, t_f: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
