use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation would have produced or consumed a NaN/Inf value.
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    /// The zero binary form was passed where a nonzero one is required.
    #[error("zero form passed to {0}")]
    ZeroForm(&'static str),

    /// Tangent-to-identity constructors require order k >= 2.
    #[error("map order k must be >= 2, got {0}")]
    BadOrder(u32),

    /// A small divisor |lambda^j - lambda| below tolerance blocks the
    /// linearizing recursion.
    #[error("small divisor at index {index}: |lambda^j - lambda| = {value:.3e}")]
    SmallDivisor { index: u32, value: f64 },

    /// Empirical calibration (half-plane constant or petal radius) exhausted
    /// its budget without passing verification.
    #[error("calibration failed: {0}")]
    CalibrationFailed(String),

    /// The sample point lies in the singular locus of the curve.
    #[error("sample point is singular: both partials of g vanish")]
    SingularSample,

    /// No non-degenerate characteristic direction exists at the base point.
    #[error("no non-degenerate characteristic direction at base point")]
    DegenerateDirection,

    /// The direction-fiber relation degenerates for p = q.
    #[error("degenerate cusp family: p = q = {0}")]
    DegenerateFamily(u32),

    /// Two tracked roots approached within resolution during continuation.
    #[error("root tracking ambiguity at loop step {step}: separation {separation:.3e}")]
    TrackingAmbiguity { step: usize, separation: f64 },

    /// Text that could not be parsed as a polynomial or complex literal.
    #[error("parse error: {0}")]
    Parse(String),

    /// A documented precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
