use thiserror::Error;

/// Errors raised by the frame, process, two-qubit, Bell and oracle layers.
///
/// Variant names double as the error names reported by the command-line tool.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("BlochOutOfBall: |s| = {norm} exceeds 1")]
    BlochOutOfBall { norm: f64 },

    #[error("InvalidState: {0}")]
    InvalidState(String),

    #[error("NotOrthogonal: max |O^T O - I| = {residual:e}")]
    NotOrthogonal { residual: f64 },

    #[error("BallNotPreserved: sampled image norm {norm} exceeds 1")]
    BallNotPreserved { norm: f64 },

    #[error("NotUnitAxis: |a| = {norm}")]
    NotUnitAxis { norm: f64 },

    #[error("NormalizationViolated: |sum of m vectors| = {residual:e}")]
    NormalizationViolated { residual: f64 },

    #[error("DimensionMismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("NotQuasiStochastic: column {column} sums to {sum}")]
    NotQuasiStochastic { column: usize, sum: f64 },

    #[error("NotARotation: {0}")]
    NotARotation(String),

    #[error("NotPositive: minimum entry {min_entry:e}")]
    NotPositive { min_entry: f64 },

    #[error("InvalidSettings: {0}")]
    InvalidSettings(String),

    #[error("InvalidBehavior: {0}")]
    InvalidBehavior(String),

    #[error("SignalingDetected: marginal mismatch {residual:e}")]
    SignalingDetected { residual: f64 },

    #[error("DegenerateDenominator: p(b1b1', b2b2') = {value:e}")]
    DegenerateDenominator { value: f64 },

    #[error("NegativeDistribution: entry {index} = {value:e}")]
    NegativeDistribution { index: usize, value: f64 },

    #[error("InvalidDensity: {0}")]
    InvalidDensity(String),

    #[error("InvalidInput: {0}")]
    InvalidInput(String),
}

impl Error {
    /// The bare error name, e.g. `"NotARotation"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::BlochOutOfBall { .. } => "BlochOutOfBall",
            Error::InvalidState(_) => "InvalidState",
            Error::NotOrthogonal { .. } => "NotOrthogonal",
            Error::BallNotPreserved { .. } => "BallNotPreserved",
            Error::NotUnitAxis { .. } => "NotUnitAxis",
            Error::NormalizationViolated { .. } => "NormalizationViolated",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotQuasiStochastic { .. } => "NotQuasiStochastic",
            Error::NotARotation(_) => "NotARotation",
            Error::NotPositive { .. } => "NotPositive",
            Error::InvalidSettings(_) => "InvalidSettings",
            Error::InvalidBehavior(_) => "InvalidBehavior",
            Error::SignalingDetected { .. } => "SignalingDetected",
            Error::DegenerateDenominator { .. } => "DegenerateDenominator",
            Error::NegativeDistribution { .. } => "NegativeDistribution",
            Error::InvalidDensity(_) => "InvalidDensity",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
