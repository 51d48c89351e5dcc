use thiserror::Error;

pub type Result<T> = std::result::Result<T, VawtError>;

/// Failure taxonomy shared by the library, the CLI (exit code 2) and the
/// HTTP service (status 422).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum VawtError {
    /// An input lies outside the domain of a formula.
    #[error("{field}: {message}")]
    Domain { field: &'static str, message: String },

    /// An input or request is malformed independent of the model.
    #[error("{field}: {message}")]
    Validation { field: &'static str, message: String },

    /// The model is well defined but no design meets the target.
    #[error("infeasible design: {message}")]
    Infeasible { message: String },
}

impl VawtError {
    pub fn domain(field: &'static str, message: impl Into<String>) -> Self {
        VawtError::Domain {
            field,
            message: message.into(),
        }
    }

    pub fn validation(field: &'static str, message: impl Into<String>) -> Self {
        VawtError::Validation {
            field,
            message: message.into(),
        }
    }

    pub fn infeasible(message: impl Into<String>) -> Self {
        VawtError::Infeasible {
            message: message.into(),
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            VawtError::Domain { .. } => "domain_error",
            VawtError::Validation { .. } => "validation_error",
            VawtError::Infeasible { .. } => "infeasible_design",
        }
    }

    /// Name of the offending input, when one can be singled out.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            VawtError::Domain { field, .. } | VawtError::Validation { field, .. } => Some(field),
            VawtError::Infeasible { .. } => None,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            VawtError::Domain { message, .. }
            | VawtError::Validation { message, .. }
            | VawtError::Infeasible { message } => message,
        }
    }
}

pub(crate) fn require_positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(VawtError::domain(field, format!("must be a positive finite number, got {value}")))
    }
}

pub(crate) fn require_non_negative(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(VawtError::domain(field, format!("must be a non-negative finite number, got {value}")))
    }
}
