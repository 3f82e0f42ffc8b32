use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    #[error("{what} is not normalized: |norm² − 1| = {deviation:e}")]
    NotNormalized { what: &'static str, deviation: f64 },

    #[error("phase path jumps by {gap} rad between samples {index} and {}", index + 1)]
    Branch { index: usize, gap: f64 },

    #[error("states {index} and {next} are orthogonal (|overlap| = {overlap:e}), phase undefined")]
    Orthogonal { index: usize, next: usize, overlap: f64 },

    #[error("adiabaticity parameter χ̇T = {epsilon:e} exceeds the hard bound {bound:e}")]
    Adiabaticity { epsilon: f64, bound: f64 },

    #[error("scale factor is not positive at t = {t} s (χ = {chi})")]
    NonPositiveScale { t: f64, chi: f64 },

    #[error("χ̇T = {value} is outside (−1, 1)")]
    OutOfDomain { value: f64 },

    #[error("outside the first-order regime: {quantity} = {value:e} exceeds {bound:e}")]
    Regime { quantity: &'static str, value: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput { field, reason: reason.into() }
    }

    /// True for refusals caused by leaving a numerical validity regime, as
    /// opposed to malformed input.
    pub fn is_regime_refusal(&self) -> bool {
        matches!(
            self,
            Error::Adiabaticity { .. }
                | Error::NonPositiveScale { .. }
                | Error::OutOfDomain { .. }
                | Error::Regime { .. }
        )
    }
}

pub(crate) fn ensure_finite(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(field, format!("must be finite, got {value}")))
    }
}
