use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    /// The posterior mean only exists when `D + b > 1`.
    #[error("posterior mean undefined: D + b = {0} must exceed 1")]
    UndefinedPosteriorMean(f64),
    /// The Lindley closed form takes a logarithm whose argument went
    /// non-positive for the given `(c, D, estimate)`.
    #[error("Linex estimate undefined: log argument {0} is not positive")]
    LinexLogDomain(f64),
    /// Signals that the configured significand width was insufficient
    /// rather than silently clamping a bad result.
    #[error("precision failure: {0}")]
    Precision(String),
    #[error("degenerate plan: {0}")]
    DegeneratePlan(String),
    #[error("iteration cap exceeded: {0}")]
    IterationCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
