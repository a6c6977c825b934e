//! Verification workbench for Hilbert C*-modules.
//!
//! Two backends carry the computations:
//!
//! * a **finite-dimensional backend**: C*-algebras given as direct sums of
//!   complex matrix blocks, Hilbert modules over them, and the full
//!   adjointable-operator calculus, all in double precision with explicit
//!   tolerances;
//! * an **exact backend**: piecewise polynomials with rational coefficients
//!   on unions of closed rational intervals, a dense unital *-subalgebra of
//!   the continuous functions, where the classical counterexamples
//!   (orthogonal complements that vanish, Pythagoras failing, a bounded
//!   module map with no adjoint) are certified with zero floating-point
//!   arithmetic.
//!
//! On top of the backends sit property suites for the standard theorems
//! (Cauchy-Schwarz, the C*-identity for operator algebras, theta-operator
//! identities, self-duality and the Riesz description of the dual, the
//! linking algebra) and a gallery of self-verifying counterexample demos.

pub mod algebra;
pub mod duality;
pub mod error;
pub mod gallery;
pub mod grammar;
pub mod linalg;
pub mod linking;
pub mod module;
pub mod operator;
pub mod polyfun;
pub mod report;
pub mod rng;
pub mod suites;
pub mod tolerances;

pub use algebra::{AlgElement, AlgebraDescriptor, PositivityVerdict, Spectrum};
pub use error::{CoreError, Result};
pub use tolerances::Tolerances;
