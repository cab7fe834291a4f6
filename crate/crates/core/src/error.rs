use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Shapes of games, strategies, signals or schemes do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A probability vector or conditional distribution is malformed.
    #[error("invalid distribution: {0}")]
    Distribution(String),

    /// An argument is outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quantity that must line up with the game (e.g. the state marginal) does not.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A requested computation would exceed a configured size cap.
    #[error("capacity exceeded: {what} needs {needed}, cap is {cap}")]
    Capacity { what: String, needed: f64, cap: f64 },

    /// The rate is too small for the scheme's codebook to cover the state.
    #[error("infeasible rate: R = {rate} < I(U;S) = {required}")]
    InfeasibleRate { rate: f64, required: f64 },

    /// A search found no feasible point.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The linear program solver could not finish.
    #[error("linear program failed: {0}")]
    Lp(String),
}

pub type Result<T> = std::result::Result<T, Error>;
