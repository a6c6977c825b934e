//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    /// Two values live over different algebras or have incompatible shapes.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A domain precondition was violated (non-Hermitian input, negative
    /// element passed to a square root, point outside a domain, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Piecewise-polynomial domains disagree.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// Polynomial degree exceeded the per-piece cap.
    #[error("degree cap exceeded: degree {degree} > {cap}")]
    DegreeCap { degree: usize, cap: usize },

    /// A map submitted as adjointable failed the module-linearity check.
    #[error("map is not module-linear: worst residual {residual:.3e}")]
    NotModuleLinear { residual: f64 },

    /// Malformed spec string (algebra descriptor, module spec, domain, ...).
    #[error("parse error: {0}")]
    Parse(String),

    /// An invariant the implementation guarantees internally was violated.
    /// Reaching this is a bug, not a property failure.
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

impl CoreError {
    pub fn is_internal(&self) -> bool {
        matches!(self, CoreError::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
