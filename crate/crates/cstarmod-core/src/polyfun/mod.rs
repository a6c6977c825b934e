//! Exact backend: piecewise polynomials with rational coefficients on
//! finite unions of closed rational intervals.

pub mod piecewise;
pub mod poly;
pub mod rat;
pub mod sturm;
pub mod supnorm;

pub use piecewise::{
    annihilator_is_trivial, AnnihilatorCertificate, IntervalUnion, PiecewisePoly,
    PointEvaluation, DEGREE_CAP,
};
pub use poly::{CPoly, RatPoly};
pub use rat::{parse_rat, rat, rat_int, CRat, Rat};
pub use supnorm::Enclosure;
