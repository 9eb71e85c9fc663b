use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("basis size {size} exceeds limit {limit} (modes = {modes}, max_total = {max_total}, max_per_mode = {max_per_mode})")]
    Capacity {
        size: u128,
        limit: usize,
        modes: usize,
        max_total: usize,
        max_per_mode: usize,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range: {what}")]
    Range { index: usize, what: String },

    #[error("no convergence after {iterations} iterations (best residual {best_residual:e})")]
    NotConverged { iterations: usize, best_residual: f64 },

    #[error("step size underflow at t = {time} (step {step:e}, error estimate {error_estimate:e})")]
    StepUnderflow {
        time: f64,
        step: f64,
        error_estimate: f64,
    },

    #[error("truncation leakage {measured:e} exceeds bound {bound:e}; increase max_total / max_per_mode")]
    Leakage { measured: f64, bound: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound:e}")]
    Quadrature { estimate: f64, error_bound: f64 },

    #[error("fit residual {residual:e} above limit {limit:e}")]
    Fit { residual: f64, limit: f64 },

    #[error("absorbed mass {lost:e} above limit {limit:e}")]
    MassLoss { lost: f64, limit: f64 },

    #[error("series truncated at n = {n_max} with relative tail {tail:e}")]
    SeriesTail { n_max: usize, tail: f64 },

    #[error("worker panicked: {0}")]
    Panic(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
