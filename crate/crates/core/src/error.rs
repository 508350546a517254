use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter, grid, or schedule violates its construction invariants.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Every fuzzy rule activation underflowed to zero, so the basis vector
    /// cannot be normalized. Usually means the state left the grid span by a
    /// large margin or the widths are far too small.
    #[error("fuzzy basis activation underflowed to zero (state outside grid reach)")]
    DegenerateActivation,

    /// The model-based controller would divide by a near-zero input gain.
    #[error("plant input gain {gain:e} is too close to zero for model-based control")]
    SingularGain { gain: f64 },

    /// A non-finite value appeared during integration.
    #[error("simulation diverged (non-finite value) at t = {t}")]
    Divergence { t: f64 },

    /// An operation that needs trajectory data was given an empty log.
    #[error("operation requires a non-empty trajectory log")]
    EmptyLog,
}
