use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Quadrature or an iterative method ran out of budget. `estimate` is the
    /// best value available when it stopped.
    #[error("{what} did not converge (best estimate {estimate:e}, relative error {rel_error:e})")]
    NonConvergence {
        what: String,
        estimate: f64,
        rel_error: f64,
    },

    #[error("empty version space: M0 = 0")]
    EmptyVersionSpace,

    #[error("curve point {index} failed: {source}")]
    CurvePoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("all {0} datasets exhausted the rejection budget")]
    AllDatasetsExhausted(usize),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
