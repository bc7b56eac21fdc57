use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace {trace:.15} differs from 1")]
    NotNormalized { trace: f64 },

    #[error("negative eigenvalue {eigenvalue:.3e}")]
    NotPositive { eigenvalue: f64 },

    #[error("Kraus operators are not trace preserving (completeness error {error:.3e})")]
    NotCptp { error: f64 },

    #[error("observable projectors are invalid: {0}")]
    InvalidObservable(String),

    #[error("bases are not mutually unbiased (overlap error {error:.3e})")]
    NotMutuallyUnbiased { error: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("function undefined at eigenvalue {eigenvalue:.6e}")]
    FunctionUndefined { eigenvalue: f64 },

    #[error("post-selection probability {probability:.3e} below floor; conditional state unavailable")]
    ProbabilityBelowFloor { probability: f64 },

    #[error("eigendecomposition did not converge")]
    EigenFailure,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
