use thiserror::Error;

/// Errors raised by estimators, samplers, loaders and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("column {column} is constant; ranks are undefined")]
    ConstantColumn { column: usize },

    #[error("capability error: {0}")]
    Capability(String),

    #[error("parameter out of range: {0}")]
    ParamRange(String),

    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("unknown experiment {0}")]
    UnknownExperiment(u32),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("degenerate block: {0}")]
    DegenerateBlock(String),

    #[error("singular conditioning covariance")]
    SingularConditioning,

    #[error("residuals have zero variance")]
    DegenerateResiduals,

    #[error("rank denominator is zero")]
    DegenerateRanks,

    #[error("schema error: {0}")]
    Schema(String),

    #[error("window mismatch: {0}")]
    WindowMismatch(String),

    #[error("normalization reference values coincide")]
    NormalizationDegenerate,

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by numerically degenerate inputs rather than
    /// bad arguments.
    pub fn is_numeric_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::ConstantColumn { .. }
                | Error::DegenerateGeometry(_)
                | Error::DegenerateBlock(_)
                | Error::SingularConditioning
                | Error::DegenerateResiduals
                | Error::DegenerateRanks
                | Error::NotPositiveDefinite
                | Error::NormalizationDegenerate
        )
    }
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
