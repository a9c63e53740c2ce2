use thiserror::Error;

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Numeric,
    NonConvergence,
}

impl ErrorCategory {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Config => 2,
            ErrorCategory::Numeric => 3,
            ErrorCategory::NonConvergence => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid exponent p = {0} (need p > 2)")]
    Exponent(f64),
    #[error("no admissible sample: {0}")]
    EmptySample(String),
    #[error("quadrature did not reach the requested accuracy: estimated error {error:e}, partial value {partial}")]
    Accuracy { partial: f64, error: f64 },
    #[error("series truncation error: tail bound {bound:e} exceeds {limit:e}")]
    Truncation { bound: f64, limit: f64 },
    #[error("trajectories {first} and {second} collide (separation {separation:e}) near c = {c_re}{c_im:+}i")]
    Collision {
        first: usize,
        second: usize,
        separation: f64,
        c_re: f64,
        c_im: f64,
    },
    #[error("fixed-point iteration did not converge after {iterations} iterations (last residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },
    #[error("injectivity violation: {0}")]
    Injectivity(String),
    #[error("invalid Beltrami field: {0}")]
    InvalidBeltrami(String),
    #[error("point outside the unit ball (norm {0})")]
    OutsideBall(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("germ is not normalized parabolic: {0}")]
    NotParabolic(String),
    #[error("petal too small: {0}")]
    PetalTooSmall(String),
    #[error("Newton inversion failed near w = {re}{im:+}i: {reason}")]
    Inversion { re: f64, im: f64, reason: String },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed input {path}: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Config(_)
            | Error::Io { .. }
            | Error::Parse { .. }
            | Error::Exponent(_)
            | Error::Precondition(_)
            | Error::Shape(_)
            | Error::InsufficientData(_) => ErrorCategory::Config,
            Error::NonConvergence { .. } => ErrorCategory::NonConvergence,
            _ => ErrorCategory::Numeric,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
