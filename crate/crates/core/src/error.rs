use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("polygon is not simple: edges {0} and {1} intersect")]
    NonSimplePolygon(usize, usize),

    #[error("rasterization produced an empty mask")]
    EmptyMask,

    #[error("rasterized mask is not 4-connected ({components} components)")]
    DisconnectedMask { components: usize },

    #[error("resolution {0} is below the minimum of {1} cells per unit length")]
    ResolutionTooLow(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error(
        "linear solver did not converge after {iterations} iterations (residual {residual:.3e})"
    )]
    LinearSolve { iterations: usize, residual: f64 },

    #[error("eigensolver did not converge; achieved residuals {residuals:?}")]
    EigenNonConvergence { residuals: Vec<f64> },

    #[error("weight overflow: 2*B*phi_max = {0:.1} exceeds the double-precision range; reduce B")]
    WeightOverflow(f64),

    #[error("{0}")]
    Unsupported(String),

    #[error("domain file line {line}: {message}")]
    DomainFile { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
