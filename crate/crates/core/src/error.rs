use thiserror::Error;

pub type Result<T> = std::result::Result<T, TrimError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrimError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The distribution does not satisfy the continuity / strict increase
    /// hypothesis needed to build `F0 ∘ F⁻¹`.
    #[error("unsupported distribution: {0}")]
    UnsupportedDistribution(String),

    /// Gaussian parameters outside the two families with a closed form.
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    /// An optimizer sits on (or within tolerance of) a clamp boundary.
    #[error("boundary degenerate: {0}")]
    BoundaryDegenerate(String),

    #[error("degenerate case: {0}")]
    DegenerateCase(String),

    #[error("threshold {threshold} not attained for alpha below {alpha_max}")]
    NotAttained { threshold: f64, alpha_max: f64 },
}

impl TrimError {
    /// Stable name of the variant, used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            TrimError::InvalidInput(_) => "InvalidInput",
            TrimError::UnsupportedDistribution(_) => "UnsupportedDistribution",
            TrimError::UnsupportedCase(_) => "UnsupportedCase",
            TrimError::BoundaryDegenerate(_) => "BoundaryDegenerate",
            TrimError::DegenerateCase(_) => "DegenerateCase",
            TrimError::NotAttained { .. } => "NotAttained",
        }
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(TrimError::InvalidInput(msg.into()))
}
