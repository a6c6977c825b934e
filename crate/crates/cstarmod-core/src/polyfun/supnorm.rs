//! Certified sup-norm enclosures for rational polynomials on closed
//! intervals: candidates are the endpoints and the critical points, with
//! critical points isolated by Sturm bisection and enclosed by interval
//! evaluation.

use num_traits::{Signed, Zero};

use super::poly::RatPoly;
use super::rat::{pow10_neg, rat_to_f64, Rat};
use super::sturm::{isolate_roots, refine, RootLocation};
use crate::error::{CoreError, Result};

/// Certified rational enclosure `lo <= value <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rat,
    pub hi: Rat,
}

impl Enclosure {
    pub fn exact(v: Rat) -> Self {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn approx(&self) -> f64 {
        rat_to_f64(&((&self.lo + &self.hi) / Rat::from_integer(2.into())))
    }

    /// Enclosure of `|.|` applied to this interval.
    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Enclosure {
                lo: -self.hi.clone(),
                hi: -self.lo.clone(),
            }
        } else {
            let hi = if -self.lo.clone() > self.hi {
                -self.lo.clone()
            } else {
                self.hi.clone()
            };
            Enclosure { lo: Rat::zero(), hi }
        }
    }

    /// Join for suprema: encloses `max` of the two enclosed values.
    pub fn join_max(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: if self.lo > other.lo {
                self.lo.clone()
            } else {
                other.lo.clone()
            },
            hi: if self.hi > other.hi {
                self.hi.clone()
            } else {
                other.hi.clone()
            },
        }
    }
}

impl std::fmt::Display for Enclosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// Enclosure of `max_{t in [l, r]} |p(t)|` with width at most `target`.
///
/// The maximum of `|p|` on a closed interval is attained at an endpoint or
/// at a critical point; endpoints evaluate exactly, critical points are
/// bracketed by Sturm bisection and the bracket is shrunk until the interval
/// evaluation of `p` over it is tighter than `target`.
pub fn sup_abs_on_interval(p: &RatPoly, l: &Rat, r: &Rat, target: &Rat) -> Result<Enclosure> {
    assert!(l <= r);
    if p.degree().unwrap_or(0) == 0 {
        let v = p.eval(l).abs();
        return Ok(Enclosure::exact(v));
    }
    let mut best = Enclosure::exact(p.eval(l).abs());
    if r > l {
        best = best.join_max(&Enclosure::exact(p.eval(r).abs()));
        let deriv = p.derivative();
        let (roots, refinable) = isolate_roots(&deriv, l, r);
        for loc in roots {
            let enc = enclose_at_root(p, &refinable, loc, target)?;
            best = best.join_max(&enc.abs());
        }
    }
    Ok(best)
}

/// Enclosure of `p` at a located root of its derivative, refined until the
/// enclosure width drops below `target`.
fn enclose_at_root(
    p: &RatPoly,
    derivative_sf: &RatPoly,
    mut loc: RootLocation,
    target: &Rat,
) -> Result<Enclosure> {
    let mut width = pow10_neg(14);
    for _attempt in 0..24 {
        loc = refine(derivative_sf, loc, &width);
        match &loc {
            RootLocation::Exact(x) => return Ok(Enclosure::exact(p.eval(x))),
            RootLocation::Bracket(a, b) => {
                let (lo, hi) = p.interval_eval(a, b);
                if &(&hi - &lo) <= target {
                    return Ok(Enclosure { lo, hi });
                }
                width = &width * pow10_neg(6);
            }
        }
    }
    Err(CoreError::Internal(
        "critical-point enclosure failed to reach the requested width".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::super::rat::{rat, rat_int};
    use super::*;

    fn p(coeffs: &[(i64, i64)]) -> RatPoly {
        RatPoly::new(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn linear_sup_is_exact() {
        // |t - 1/2| on [0,1]: candidates at both endpoints give 1/2 exactly
        let q = p(&[(-1, 2), (1, 1)]);
        let enc = sup_abs_on_interval(&q, &rat_int(0), &rat_int(1), &pow10_neg(12)).unwrap();
        assert!(enc.is_exact());
        assert_eq!(enc.lo, rat(1, 2));
    }

    #[test]
    fn interior_maximum_is_enclosed() {
        // t - t^2 on [0, 1]: maximum 1/4 at t = 1/2 (an exact critical point)
        let q = p(&[(0, 1), (1, 1), (-1, 1)]);
        let enc = sup_abs_on_interval(&q, &rat_int(0), &rat_int(1), &pow10_neg(12)).unwrap();
        assert!(enc.contains(&rat(1, 4)));
        assert!(enc.width() <= pow10_neg(12));
    }

    #[test]
    fn irrational_maximum_within_width() {
        // p = t^3 - t on [0, 1]: |p| maximal at t = 1/sqrt(3),
        // value 2/(3 sqrt(3)) = 2 sqrt(3)/9, irrational
        let q = p(&[(0, 1), (-1, 1), (0, 1), (1, 1)]);
        let enc = sup_abs_on_interval(&q, &rat_int(0), &rat_int(1), &pow10_neg(12)).unwrap();
        assert!(enc.width() <= pow10_neg(12));
        let truth = 2.0 * 3.0_f64.sqrt() / 9.0;
        assert!((enc.approx() - truth).abs() < 1e-10);
    }

    #[test]
    fn constant_is_exact() {
        let q = p(&[(7, 3)]);
        let enc = sup_abs_on_interval(&q, &rat_int(2), &rat_int(3), &pow10_neg(12)).unwrap();
        assert!(enc.is_exact());
        assert_eq!(enc.lo, rat(7, 3));
    }

    #[test]
    fn degenerate_point_interval() {
        let q = p(&[(0, 1), (1, 1)]); // t
        let x = rat(5, 7);
        let enc = sup_abs_on_interval(&q, &x, &x, &pow10_neg(12)).unwrap();
        assert!(enc.is_exact());
        assert_eq!(enc.lo, rat(5, 7));
    }
}
