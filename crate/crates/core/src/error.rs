use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m†| = {0:e})")]
    NonHermitian(f64),
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("eigenvalue {0:e} is below the PSD tolerance")]
    NegativeEigenvalue(f64),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("bad subsystem index: {0}")]
    BadIndex(String),
    #[error("bad dimensions: {0}")]
    BadDims(String),
    #[error("bad arity: {0}")]
    BadArity(String),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error("sequence is not sorted nonincreasing")]
    NotSorted,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no root in (0, √2]: {0}")]
    NoRoot(String),
    #[error("degenerate value {0}: expected a value strictly inside (0, 1)")]
    DegenerateValue(f64),
    #[error("bad audit spec: {0}")]
    BadSpec(String),
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error("state file: {0}")]
    StateFile(String),
}

impl Error {
    /// True for failures that depend on the sampled state rather than on the
    /// caller's parameters. The audit harness counts these as trials whose
    /// hypotheses do not hold.
    pub fn is_state_precondition(&self) -> bool {
        matches!(
            self,
            Error::PreconditionFailed(_) | Error::NoRoot(_) | Error::DegenerateValue(_)
        )
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
