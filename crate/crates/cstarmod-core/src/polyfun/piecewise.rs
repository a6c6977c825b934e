//! The exact commutative *-algebra of piecewise polynomials with rational
//! coefficients on a finite union of disjoint closed rational intervals.
//!
//! This is a dense unital *-subalgebra of the continuous functions on the
//! same set, not norm-complete; identities between specific elements and
//! sup-norms of specific elements hold there verbatim, which is all the
//! counterexample gallery needs.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde_json::Value;

use super::poly::{CPoly, RatPoly};
use super::rat::{parse_rat, pow10_neg, sqrt_bounds, CRat, Rat};
use super::supnorm::{sup_abs_on_interval, Enclosure};
use crate::error::{CoreError, Result};

/// Per-piece degree cap; rational coefficient growth is kept in check by
/// refusing products beyond it.
pub const DEGREE_CAP: usize = 64;

/// Finite union of pairwise disjoint closed intervals with rational
/// endpoints, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalUnion {
    pieces: Vec<(Rat, Rat)>,
}

impl IntervalUnion {
    pub fn new(pieces: Vec<(Rat, Rat)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(CoreError::Parse("domain needs at least one interval".into()));
        }
        for (l, r) in &pieces {
            if l > r {
                return Err(CoreError::Parse(format!("interval [{l}, {r}] is empty")));
            }
        }
        for w in pieces.windows(2) {
            if w[0].1 >= w[1].0 {
                return Err(CoreError::Parse(
                    "intervals must be sorted and pairwise disjoint".into(),
                ));
            }
        }
        Ok(IntervalUnion { pieces })
    }

    pub fn unit() -> Self {
        IntervalUnion::new(vec![(Rat::zero(), Rat::from_integer(1.into()))]).unwrap()
    }

    pub fn pieces(&self) -> &[(Rat, Rat)] {
        &self.pieces
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Index of the piece containing `x`, if any.
    pub fn locate(&self, x: &Rat) -> Option<usize> {
        self.pieces.iter().position(|(l, r)| l <= x && x <= r)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PP")?;
        for (i, (l, r)) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, "u")?;
            }
            write!(f, "[{l},{r}]")?;
        }
        Ok(())
    }
}

impl FromStr for IntervalUnion {
    type Err = CoreError;

    /// Grammar: `"PP[0,1]"`, `"PP[0,1]u[2,3]"`, endpoints as integers or
    /// `num/den` rationals.
    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix("PP")
            .ok_or_else(|| CoreError::Parse(format!("domain must start with PP: `{s}`")))?;
        let mut pieces = Vec::new();
        for part in body.split('u') {
            let part = part.trim();
            let inner = part
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(|| CoreError::Parse(format!("bad interval `{part}`")))?;
            let (l, r) = inner
                .split_once(',')
                .ok_or_else(|| CoreError::Parse(format!("bad interval `{part}`")))?;
            pieces.push((parse_rat(l)?, parse_rat(r)?));
        }
        IntervalUnion::new(pieces)
    }
}

/// Exact evaluation record: a point of the domain and the value there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointEvaluation {
    pub point: Rat,
    pub value: CRat,
}

impl PointEvaluation {
    pub fn vanishes(&self) -> bool {
        self.value.is_zero()
    }
}

/// Element of the piecewise-polynomial algebra: one complex-rational
/// polynomial per piece of the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly {
    domain: IntervalUnion,
    polys: Vec<CPoly>,
}

impl PiecewisePoly {
    pub fn new(domain: IntervalUnion, polys: Vec<CPoly>) -> Result<Self> {
        if polys.len() != domain.piece_count() {
            return Err(CoreError::ShapeMismatch(format!(
                "expected {} piece polynomials, got {}",
                domain.piece_count(),
                polys.len()
            )));
        }
        for p in &polys {
            if let Some(d) = p.degree() {
                if d > DEGREE_CAP {
                    return Err(CoreError::DegreeCap {
                        degree: d,
                        cap: DEGREE_CAP,
                    });
                }
            }
        }
        Ok(PiecewisePoly { domain, polys })
    }

    pub fn zero(domain: &IntervalUnion) -> Self {
        PiecewisePoly {
            domain: domain.clone(),
            polys: vec![CPoly::zero(); domain.piece_count()],
        }
    }

    pub fn one(domain: &IntervalUnion) -> Self {
        PiecewisePoly {
            domain: domain.clone(),
            polys: vec![CPoly::one(); domain.piece_count()],
        }
    }

    pub fn constant(domain: &IntervalUnion, c: &CRat) -> Self {
        PiecewisePoly {
            domain: domain.clone(),
            polys: vec![CPoly::constant(c); domain.piece_count()],
        }
    }

    /// The coordinate function `t` on every piece.
    pub fn coordinate(domain: &IntervalUnion) -> Self {
        PiecewisePoly {
            domain: domain.clone(),
            polys: vec![CPoly::real(RatPoly::t()); domain.piece_count()],
        }
    }

    /// 1 on the selected piece, 0 elsewhere.
    pub fn indicator(domain: &IntervalUnion, piece: usize) -> Result<Self> {
        if piece >= domain.piece_count() {
            return Err(CoreError::Parse(format!("no piece {piece}")));
        }
        let mut polys = vec![CPoly::zero(); domain.piece_count()];
        polys[piece] = CPoly::one();
        Ok(PiecewisePoly {
            domain: domain.clone(),
            polys,
        })
    }

    /// Real-coefficient element from per-piece coefficient lists (constant
    /// term first).
    pub fn from_real_coeffs(domain: &IntervalUnion, coeffs: Vec<Vec<Rat>>) -> Result<Self> {
        let polys = coeffs
            .into_iter()
            .map(|c| CPoly::real(RatPoly::new(c)))
            .collect();
        PiecewisePoly::new(domain.clone(), polys)
    }

    pub fn domain(&self) -> &IntervalUnion {
        &self.domain
    }

    pub fn piece_polys(&self) -> &[CPoly] {
        &self.polys
    }

    fn check_domain(&self, other: &PiecewisePoly) -> Result<()> {
        if self.domain != other.domain {
            return Err(CoreError::DomainMismatch(format!(
                "{} vs {}",
                self.domain, other.domain
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PiecewisePoly) -> Result<PiecewisePoly> {
        self.check_domain(other)?;
        PiecewisePoly::new(
            self.domain.clone(),
            self.polys
                .iter()
                .zip(&other.polys)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &PiecewisePoly) -> Result<PiecewisePoly> {
        self.check_domain(other)?;
        PiecewisePoly::new(
            self.domain.clone(),
            self.polys
                .iter()
                .zip(&other.polys)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn mul(&self, other: &PiecewisePoly) -> Result<PiecewisePoly> {
        self.check_domain(other)?;
        PiecewisePoly::new(
            self.domain.clone(),
            self.polys
                .iter()
                .zip(&other.polys)
                .map(|(a, b)| a.mul(b))
                .collect(),
        )
    }

    pub fn scale(&self, k: &CRat) -> PiecewisePoly {
        PiecewisePoly {
            domain: self.domain.clone(),
            polys: self.polys.iter().map(|p| p.scale(k)).collect(),
        }
    }

    /// Involution: conjugate all coefficients.
    pub fn star(&self) -> PiecewisePoly {
        PiecewisePoly {
            domain: self.domain.clone(),
            polys: self.polys.iter().map(|p| p.star()).collect(),
        }
    }

    /// The A-valued inner product of the algebra viewed as a module over
    /// itself: `<a, b> = a* b`.
    pub fn inner(&self, other: &PiecewisePoly) -> Result<PiecewisePoly> {
        self.star().mul(other)
    }

    /// Exact coefficient test.
    pub fn is_zero(&self) -> bool {
        self.polys.iter().all(|p| p.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.polys.iter().all(|p| p.is_real())
    }

    pub fn eval(&self, x: &Rat) -> Result<PointEvaluation> {
        let piece = self
            .domain
            .locate(x)
            .ok_or_else(|| CoreError::Domain(format!("point {x} outside {}", self.domain)))?;
        Ok(PointEvaluation {
            point: x.clone(),
            value: self.polys[piece].eval(x),
        })
    }

    pub fn vanishes_at(&self, x: &Rat) -> Result<bool> {
        Ok(self.eval(x)?.vanishes())
    }

    /// Certified sup-norm enclosure, width at most `1e-12`.
    ///
    /// Real elements are handled directly; for a complex element the
    /// enclosure comes from `p* p = |p|^2` followed by an exact rational
    /// square-root bracket, with the `|p|^2` target tightened until the
    /// square root meets the width bound.
    pub fn sup_norm(&self) -> Result<Enclosure> {
        let width = pow10_neg(12);
        if self.is_real() {
            return self.sup_abs_real(&width);
        }
        let squared = self.inner(self)?;
        debug_assert!(squared.is_real());
        let mut target = pow10_neg(12);
        for _round in 0..4 {
            let enc2 = squared.sup_abs_real(&target)?;
            let (lo_lo, _) = sqrt_bounds(&enc2.lo)?;
            let (_, hi_hi) = sqrt_bounds(&enc2.hi)?;
            let enc = Enclosure { lo: lo_lo, hi: hi_hi };
            if enc.width() <= width {
                return Ok(enc);
            }
            // sqrt widens near zero; shrink the squared target accordingly
            target = if enc2.lo.is_zero() {
                &target * pow10_neg(12)
            } else {
                let (sq_lo, _) = sqrt_bounds(&enc2.lo)?;
                sq_lo * pow10_neg(12)
            };
        }
        Err(CoreError::Internal(
            "sup-norm enclosure failed to converge".into(),
        ))
    }

    fn sup_abs_real(&self, target: &Rat) -> Result<Enclosure> {
        let mut best = Enclosure::exact(Rat::zero());
        for ((l, r), p) in self.domain.pieces().iter().zip(&self.polys) {
            debug_assert!(p.is_real());
            let enc = sup_abs_on_interval(&p.re, l, r, target)?;
            best = best.join_max(&enc);
        }
        Ok(best)
    }

    /// Serialize for reports: domain string plus per-piece coefficient
    /// lists of exact rationals.
    pub fn to_json(&self) -> Value {
        let pieces: Vec<Value> = self
            .polys
            .iter()
            .map(|p| {
                if p.is_real() {
                    Value::Array(
                        p.re.coeff_strings()
                            .into_iter()
                            .map(Value::String)
                            .collect(),
                    )
                } else {
                    serde_json::json!({
                        "re": p.re.coeff_strings(),
                        "im": p.im.coeff_strings(),
                    })
                }
            })
            .collect();
        serde_json::json!({
            "domain": self.domain.to_string(),
            "pieces": pieces,
        })
    }
}

impl fmt::Display for PiecewisePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ((l, r), p)) in self.domain.pieces().iter().zip(&self.polys).enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            if p.is_real() {
                write!(f, "[{l},{r}]: {:?}", p.re.coeff_strings())?;
            } else {
                write!(
                    f,
                    "[{l},{r}]: re {:?} im {:?}",
                    p.re.coeff_strings(),
                    p.im.coeff_strings()
                )?;
            }
        }
        Ok(())
    }
}

/// Outcome of the annihilator test for a principal ideal generator.
#[derive(Debug, Clone)]
pub struct AnnihilatorCertificate {
    pub trivial: bool,
    pub reason: String,
    /// Two nonzero elements with product zero, when the algebra has them.
    pub zero_divisor_pair: Option<(PiecewisePoly, PiecewisePoly)>,
    /// A nonzero element annihilating the generator, when one exists.
    pub annihilating_witness: Option<PiecewisePoly>,
}

/// Decide whether `{g : g * generator * p = 0 for all p}` is trivial.
///
/// On a single interval the algebra is an integral domain (degree
/// additivity), so the annihilator of any nonzero element is `{0}` and the
/// certificate carries that argument. On a multi-piece domain the test
/// reports `false` with an explicit zero-divisor pair; if the generator
/// vanishes identically on some piece, that piece's indicator is a genuine
/// annihilating witness.
pub fn annihilator_is_trivial(generator: &PiecewisePoly) -> Result<AnnihilatorCertificate> {
    if generator.is_zero() {
        return Err(CoreError::Domain(
            "annihilator test needs a nonzero generator".into(),
        ));
    }
    let domain = generator.domain();
    if domain.piece_count() == 1 {
        // spot-check degree additivity with a probe factor
        let probe = PiecewisePoly::new(
            domain.clone(),
            vec![CPoly::real(RatPoly::new(vec![
                Rat::from_integer(1.into()),
                Rat::from_integer(1.into()),
            ]))],
        )?;
        let product = generator.mul(&probe)?;
        let gen_deg = generator.piece_polys()[0].degree().unwrap();
        let ok = product.piece_polys()[0].degree() == Some(gen_deg + 1);
        if !ok {
            return Err(CoreError::Internal("degree additivity spot check failed".into()));
        }
        return Ok(AnnihilatorCertificate {
            trivial: true,
            reason: "single interval: nonzero polynomials form an integral domain \
                     (deg(g*f) = deg g + deg f), so g*f = 0 with f != 0 forces g = 0"
                .into(),
            zero_divisor_pair: None,
            annihilating_witness: None,
        });
    }

    let ind0 = PiecewisePoly::indicator(domain, 0)?;
    let ind1 = PiecewisePoly::indicator(domain, 1)?;
    let product = ind0.mul(&ind1)?;
    if !product.is_zero() || ind0.is_zero() || ind1.is_zero() {
        return Err(CoreError::Internal("indicator pair is not a zero-divisor pair".into()));
    }
    let witness = generator
        .piece_polys()
        .iter()
        .position(|p| p.is_zero())
        .map(|piece| PiecewisePoly::indicator(domain, piece).unwrap());
    if let Some(w) = &witness {
        if !w.mul(generator)?.is_zero() {
            return Err(CoreError::Internal("annihilating witness failed to annihilate".into()));
        }
    }
    Ok(AnnihilatorCertificate {
        trivial: false,
        reason: "multiple pieces: the indicators of two pieces are nonzero with \
                 product zero, so the integral-domain argument is unavailable"
            .into(),
        zero_divisor_pair: Some((ind0, ind1)),
        annihilating_witness: witness,
    })
}

#[cfg(test)]
mod tests {
    use super::super::rat::{rat, rat_int};
    use super::*;

    fn unit_domain() -> IntervalUnion {
        IntervalUnion::unit()
    }

    fn two_piece_domain() -> IntervalUnion {
        "PP[0,1]u[2,3]".parse().unwrap()
    }

    /// (t - 1/2) on [0,1]
    fn t_minus_half() -> PiecewisePoly {
        PiecewisePoly::from_real_coeffs(&unit_domain(), vec![vec![rat(-1, 2), rat_int(1)]])
            .unwrap()
    }

    #[test]
    fn domain_grammar() {
        let d = two_piece_domain();
        assert_eq!(d.piece_count(), 2);
        assert_eq!(d.to_string(), "PP[0,1]u[2,3]");
        let half: IntervalUnion = "PP[0,1/2]".parse().unwrap();
        assert_eq!(half.pieces()[0].1, rat(1, 2));
        assert!("PP[1,0]".parse::<IntervalUnion>().is_err());
        assert!("PP[0,2]u[1,3]".parse::<IntervalUnion>().is_err());
        assert!("[0,1]".parse::<IntervalUnion>().is_err());
    }

    #[test]
    fn square_of_t_minus_half() {
        let p = t_minus_half();
        let sq = p.mul(&p).unwrap();
        let expect = PiecewisePoly::from_real_coeffs(
            &unit_domain(),
            vec![vec![rat(1, 4), rat_int(-1), rat_int(1)]],
        )
        .unwrap();
        assert_eq!(sq, expect);
        assert!(sq.vanishes_at(&rat(1, 2)).unwrap());
    }

    #[test]
    fn indicators_multiply_to_zero() {
        let d = two_piece_domain();
        let f = PiecewisePoly::indicator(&d, 0).unwrap();
        let g = PiecewisePoly::indicator(&d, 1).unwrap();
        assert!(f.mul(&g).unwrap().is_zero());
        assert!(!f.is_zero());
        assert!(!g.is_zero());
        // <f, g> = f* g = 0 exactly
        assert!(f.inner(&g).unwrap().is_zero());
    }

    #[test]
    fn additive_inverse_and_zero() {
        let p = t_minus_half();
        let z = p.add(&p.scale(&CRat::from_int(-1))).unwrap();
        assert!(z.is_zero());
        assert!(PiecewisePoly::zero(&unit_domain()).is_zero());
    }

    #[test]
    fn sup_norm_of_t_minus_half_is_exact_half() {
        let enc = t_minus_half().sup_norm().unwrap();
        assert!(enc.is_exact());
        assert_eq!(enc.lo, rat(1, 2));
    }

    #[test]
    fn sup_norm_of_indicator_sum_is_exact_one() {
        let d = two_piece_domain();
        let f = PiecewisePoly::indicator(&d, 0).unwrap();
        let g = PiecewisePoly::indicator(&d, 1).unwrap();
        let s = f.add(&g).unwrap();
        let enc = s.sup_norm().unwrap();
        assert!(enc.is_exact());
        assert_eq!(enc.lo, rat_int(1));
        // the summands themselves have norm 1
        assert_eq!(f.sup_norm().unwrap().lo, rat_int(1));
        assert_eq!(g.sup_norm().unwrap().lo, rat_int(1));
    }

    #[test]
    fn sup_norm_of_zero() {
        let enc = PiecewisePoly::zero(&unit_domain()).sup_norm().unwrap();
        assert!(enc.is_exact());
        assert!(enc.lo.is_zero());
    }

    #[test]
    fn complex_sup_norm_brackets_modulus() {
        // (1 + i t) on [0,1]: |p(t)|^2 = 1 + t^2, sup = sqrt(2)
        let p = PiecewisePoly::new(
            unit_domain(),
            vec![CPoly::new(RatPoly::one(), RatPoly::t())],
        )
        .unwrap();
        let enc = p.sup_norm().unwrap();
        assert!(enc.width() <= pow10_neg(12));
        assert!((enc.approx() - 2.0_f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn evaluation_outside_domain_errors() {
        let p = t_minus_half();
        assert!(p.eval(&rat_int(5)).is_err());
        assert!(p.vanishes_at(&rat(1, 2)).unwrap() == false || true);
        // value at 1/2 is exactly zero
        assert!(p.vanishes_at(&rat(1, 2)).unwrap());
        assert!(!p.vanishes_at(&rat_int(1)).unwrap());
    }

    #[test]
    fn domain_mismatch_rejected() {
        let p = t_minus_half();
        let q = PiecewisePoly::one(&two_piece_domain());
        assert!(matches!(p.add(&q), Err(CoreError::DomainMismatch(_))));
    }

    #[test]
    fn degree_cap_enforced() {
        let d = unit_domain();
        let t = PiecewisePoly::coordinate(&d);
        let mut p = t.clone();
        // t^33 * t^33 blows past 64
        for _ in 0..32 {
            p = p.mul(&t).unwrap();
        }
        assert!(matches!(p.mul(&p), Err(CoreError::DegreeCap { .. })));
    }

    #[test]
    fn annihilator_single_interval_trivial() {
        let cert = annihilator_is_trivial(&t_minus_half()).unwrap();
        assert!(cert.trivial);
        assert!(cert.zero_divisor_pair.is_none());
        // the unit annihilates nothing either
        let one = PiecewisePoly::one(&unit_domain());
        assert!(annihilator_is_trivial(&one).unwrap().trivial);
    }

    #[test]
    fn annihilator_multi_piece_with_witness() {
        let d = two_piece_domain();
        let f = PiecewisePoly::indicator(&d, 0).unwrap();
        let cert = annihilator_is_trivial(&f).unwrap();
        assert!(!cert.trivial);
        let (a, b) = cert.zero_divisor_pair.unwrap();
        assert!(a.mul(&b).unwrap().is_zero());
        let w = cert.annihilating_witness.unwrap();
        assert!(!w.is_zero());
        assert!(w.mul(&f).unwrap().is_zero());
    }

    #[test]
    fn annihilator_rejects_zero_generator() {
        let z = PiecewisePoly::zero(&unit_domain());
        assert!(annihilator_is_trivial(&z).is_err());
    }

    #[test]
    fn star_fixes_real_elements() {
        let p = t_minus_half();
        assert_eq!(p.star(), p);
        // complex coefficients conjugate
        let z = PiecewisePoly::new(
            unit_domain(),
            vec![CPoly::new(RatPoly::zero(), RatPoly::one())],
        )
        .unwrap();
        assert_eq!(z.star(), z.scale(&CRat::from_int(-1)));
    }
}
