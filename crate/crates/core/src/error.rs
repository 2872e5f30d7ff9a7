use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid eta quotient: {0}")]
    InvalidEtaQuotient(String),

    #[error("invalid newform spec: {0}")]
    InvalidSpec(String),

    #[error("invalid precision budget: {0}")]
    InvalidBudget(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("metadata mismatch for {field}: declared {declared}, file has {found}")]
    MetadataMismatch {
        field: &'static str,
        declared: String,
        found: String,
    },

    #[error("coefficients are not normalized: a(1) = {0}, expected 1")]
    Normalization(String),

    #[error("q-expansion has {available} coefficients but {required} are required")]
    TruncationTooShort { required: usize, available: usize },

    #[error("coefficients fail Hecke validation: {0}")]
    Hecke(String),

    #[error("numerical inconsistency: {0}")]
    Inconsistency(String),

    #[error("sign is ambiguous: residual {plus:e} for +1, {minus:e} for -1")]
    AmbiguousSign { plus: f64, minus: f64 },

    #[error("identity check failed: residual {residual:e} exceeds tolerance {tolerance:e}")]
    IdentityFailure { residual: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finder did not converge after {iterations} iterations (max residual {max_residual:e})")]
    NonConvergence {
        iterations: usize,
        max_residual: f64,
        best: Vec<(f64, f64)>,
    },

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("phase equation has {solutions} solutions for index {index}; the angle is not unique")]
    AngleAmbiguity { index: usize, solutions: usize },

    #[error("root/angle matching failed: {0}")]
    Matching(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Coarse classification used for process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad or unreadable input.
    Input,
    /// The computation disagrees with itself.
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidEtaQuotient(_)
            | Error::InvalidSpec(_)
            | Error::InvalidBudget(_)
            | Error::Parse { .. }
            | Error::MetadataMismatch { .. }
            | Error::Normalization(_)
            | Error::TruncationTooShort { .. }
            | Error::Hecke(_)
            | Error::Domain(_)
            | Error::Range(_)
            | Error::Io { .. } => ErrorKind::Input,
            Error::Inconsistency(_)
            | Error::AmbiguousSign { .. }
            | Error::IdentityFailure { .. }
            | Error::NonConvergence { .. }
            | Error::AngleAmbiguity { .. }
            | Error::Matching(_) => ErrorKind::Numerical,
        }
    }
}
