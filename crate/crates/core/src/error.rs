use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("degenerate dataset: {0}")]
    DegenerateDataset(String),

    #[error("correlation matrix not positive definite up to nugget {nugget:e}")]
    IllConditioned { nugget: f64 },

    #[error("hyperparameter fit failed: {0}")]
    FitFailed(FitDiagnostics),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("adaptive iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn at_iteration(self, iteration: usize) -> Self {
        Error::AtIteration {
            iteration,
            source: Box::new(self),
        }
    }
}

/// What the swarm saw when every candidate failed to factorize.
#[derive(Debug, Clone)]
pub struct FitDiagnostics {
    pub samples: usize,
    pub evaluated: usize,
    pub max_nugget: f64,
    pub min_pairwise_distance: f64,
}

impl fmt::Display for FitDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} candidates on {} samples ill-conditioned at nugget {:e} (min pairwise distance {:e})",
            self.evaluated, self.samples, self.max_nugget, self.min_pairwise_distance
        )
    }
}

/// Failure while asking a black box for a response.
#[derive(Debug, Error)]
pub enum EvalError {
    #[error("non-finite response {value} at {point:?}")]
    NonFinite { point: Vec<f64>, value: f64 },

    #[error("no response within {millis} ms to request {request:?}")]
    Timeout { request: String, millis: u128 },

    #[error("black-box process exited before answering {request:?}")]
    Exited { request: String },

    #[error("unparseable response {line:?} to request {request:?}")]
    Protocol { request: String, line: String },

    #[error("black-box i/o: {0}")]
    Io(#[from] std::io::Error),
}
