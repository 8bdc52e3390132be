//! Error type shared by every fallible operation in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of quantile construction and evaluation.
///
/// `Domain` marks arguments outside a function's mathematical domain and is
/// always a caller error. `Accuracy` means a series or quadrature failed to
/// reach the requested tolerance within its iteration budget; the partial
/// result is deliberately withheld. The ODE-solver variants signal that the
/// integration left the regime where the computed map is a valid quantile
/// transform.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested tolerance not reached within the iteration budget.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// The integrated map stopped being strictly increasing (`Q' <= 0`),
    /// indicating blow-up or inconsistent initial data.
    #[error("monotonicity lost during ODE solve: {0}")]
    MonotonicityLoss(String),

    /// Non-finite or absurdly large state encountered.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Parameter region recognized but deliberately not implemented.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A reference-oracle computation failed to converge. This is test
    /// infrastructure failing, not a property of the code under test.
    #[error("oracle failure: {0}")]
    OracleFailure(String),

    /// Evaluation outside the grid of a solved map.
    #[error("evaluation outside solved range: {0}")]
    OutOfRange(String),
}
