use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point} lies outside the open unit disc")]
    Domain { point: Complex64 },

    #[error("{what} is singular at {point}")]
    Singular {
        what: &'static str,
        point: Complex64,
    },

    #[error("mapping is not sense-preserving at {point}")]
    NotSensePreserving { point: Complex64 },

    #[error("point {point} is beyond the reliable radius {radius} of a truncated series")]
    Precision { point: Complex64, radius: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("mapping cannot be normalized: {0}")]
    Normalization(String),

    #[error("evaluation failed at {point}: {source}")]
    Evaluation {
        point: Complex64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid mapping descriptor at {path}: {message}")]
    Descriptor { path: String, message: String },

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parameter(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Parameter {
            name,
            value,
            reason,
        }
    }

    pub(crate) fn at(self, point: Complex64) -> Self {
        match self {
            e @ Error::Evaluation { .. } => e,
            other => Error::Evaluation {
                point,
                source: Box::new(other),
            },
        }
    }
}
