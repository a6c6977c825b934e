//! Named tolerances used by the numerical backend.
//!
//! All tolerances are relative to `max(1, scale)` where the scale is the
//! norm of the input under test. The exact polynomial backend never
//! consults them.

use std::collections::BTreeMap;

use crate::error::{CoreError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermitian-ness test: `norm(a - a*) <= herm * max(1, norm(a))`.
    pub herm: f64,
    /// Positivity slack for the smallest eigenvalue.
    pub pos: f64,
    /// Eigendecomposition reconstruction residual.
    pub eig: f64,
    /// Square-root reconstruction residual.
    pub sqrt: f64,
    /// Scalar norm identities (C*-identity, submultiplicativity, ...).
    pub norm: f64,
    /// Exact-zero test for elements.
    pub zero: f64,
    /// Right-invariance residual for generated submodules.
    pub sub: f64,
    /// Operator-level identities (adjoints, theta identities, ...).
    pub op: f64,
    /// Operator-norm identities, relative.
    pub opnorm: f64,
    /// Probe-estimated isometry checks, relative.
    pub iso: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-9,
            pos: 1e-9,
            eig: 1e-10,
            sqrt: 1e-10,
            norm: 1e-9,
            zero: 1e-12,
            sub: 1e-8,
            op: 1e-8,
            opnorm: 1e-6,
            iso: 1e-3,
        }
    }
}

impl Tolerances {
    /// Apply named overrides, e.g. from `--tol op=1e-7` CLI flags.
    pub fn with_overrides(mut self, overrides: &BTreeMap<String, f64>) -> Result<Self> {
        for (name, value) in overrides {
            if !value.is_finite() || *value < 0.0 {
                return Err(CoreError::Parse(format!(
                    "tolerance {name} must be a finite nonnegative number"
                )));
            }
            match name.as_str() {
                "herm" => self.herm = *value,
                "pos" => self.pos = *value,
                "eig" => self.eig = *value,
                "sqrt" => self.sqrt = *value,
                "norm" => self.norm = *value,
                "zero" => self.zero = *value,
                "sub" => self.sub = *value,
                "op" => self.op = *value,
                "opnorm" => self.opnorm = *value,
                "iso" => self.iso = *value,
                other => {
                    return Err(CoreError::Parse(format!("unknown tolerance name: {other}")));
                }
            }
        }
        Ok(self)
    }
}

/// Relative scale guard: every tolerance comparison is against
/// `tol * max(1, scale)`.
pub fn rel(scale: f64) -> f64 {
    scale.abs().max(1.0)
}
