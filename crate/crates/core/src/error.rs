use thiserror::Error;

pub type Result<T> = std::result::Result<T, PhaseError>;

#[derive(Debug, Error)]
pub enum PhaseError {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A scenario violates one of its named invariants.
    #[error("scenario invalid: {invariant}")]
    ScenarioInvalid { invariant: String },

    #[error("singular point: {0}")]
    Singular(String),

    #[error("numerical blow-up: {0}")]
    NumericalBlowup(String),

    /// Crossing characteristics in the semiclassical apparatus evolution.
    #[error("WKB breakdown: {0}")]
    WkbBreakdown(String),

    #[error("quadrature did not reach tolerance: {0}")]
    Tolerance(String),

    #[error("insufficient range: {0}")]
    InsufficientRange(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl PhaseError {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Self::Malformed(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Self::Domain(msg.into())
    }

    pub(crate) fn invalid(invariant: impl Into<String>) -> Self {
        Self::ScenarioInvalid {
            invariant: invariant.into(),
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Self::NumericalBlowup(_)
                | Self::WkbBreakdown(_)
                | Self::Tolerance(_)
                | Self::InsufficientRange(_)
        )
    }
}
