use alloc::string::String;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what} exceeds the configured cap ({size} > {cap})")]
    SizeCapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid stochastic matrix: {0}")]
    InvalidStochasticMatrix(String),
    #[error("chain has {0} closed communicating classes; the stationary law is not unique")]
    NotIrreducible(usize),
    #[error("support mismatch: Q({0},{1}) > 0 but W({1}|{0}) = 0")]
    SupportMismatch(usize, usize),
    #[error("word too short: second-order types need length >= 2, got {0}")]
    WordTooShort(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("argument {0} outside the domain [0, 1]")]
    DomainError(f64),
    #[error("solver did not converge: {0}")]
    SolverDiverged(String),
    #[error("linear maximisation oracle failed: {0}")]
    OracleFailure(String),
    #[error("no subset reaches mass {requested} (total mass {available})")]
    InfeasibleMass { requested: f64, available: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn cap_check(what: &'static str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::SizeCapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}
