use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{0}` must be nonzero")]
    ZeroParameter(&'static str),

    #[error("parameter `{0}` must be finite")]
    NonFiniteParameter(&'static str),

    #[error("fractional order q = {0} is outside the admissible range")]
    OrderOutOfRange(f64),

    /// A state coordinate was NaN or infinite. `step` is set when the
    /// failure happened inside an integration run.
    #[error("non-finite state{}", .step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    NonFiniteState { step: Option<usize> },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("argument {0} is outside the domain of the Gamma function")]
    DomainError(f64),

    /// The QR iteration exhausted its budget. `partial` holds the
    /// eigenvalues that had already deflated.
    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize, partial: Vec<Complex64> },

    #[error("rule {rule} does not apply to equilibrium (k = {k}, m = {m})")]
    RuleFamilyMismatch { rule: &'static str, k: f64, m: f64 },

    #[error("invalid integrator setting: {0}")]
    InvalidConfig(String),

    #[error("config line {line}: {message}")]
    ConfigParse { line: usize, message: String },
}
