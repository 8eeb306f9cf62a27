use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("infeasible bounds: {0}")]
    InfeasibleBounds(String),

    #[error("out of region: component {component} = {value} violates bound {bound}")]
    OutOfRegion {
        component: usize,
        value: f64,
        bound: f64,
    },

    /// Wraps a pointwise failure with the index of the offending support point.
    #[error("{source} (at point {index})")]
    AtPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("singular design: {0} has a singular information matrix")]
    SingularDesign(String),

    #[error("all starts singular: every probed weight vector gave a singular information matrix")]
    AllStartsSingular,

    #[error("malformed JSON: {0}")]
    MalformedJson(String),
}

impl Error {
    pub(crate) fn at_point(index: usize, err: Error) -> Self {
        Error::AtPoint {
            index,
            source: Box::new(err),
        }
    }
}
