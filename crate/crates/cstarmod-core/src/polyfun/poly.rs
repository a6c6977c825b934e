//! Univariate polynomials with exact rational coefficients, plus the
//! complex-coefficient pairing used by the piecewise algebra.

use num_traits::{Signed, Zero};

use super::rat::{CRat, Rat};

/// Real-coefficient polynomial; `coeffs[k]` multiplies `t^k`, no trailing
/// zeros (the zero polynomial has an empty list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        RatPoly::new(vec![c])
    }

    pub fn one() -> Self {
        RatPoly::constant(Rat::from_integer(1.into()))
    }

    /// The coordinate polynomial `t`.
    pub fn t() -> Self {
        RatPoly::new(vec![Rat::zero(), Rat::from_integer(1.into())])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(Rat::zero);
            out.push(a + b);
        }
        RatPoly::new(out)
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rat) -> RatPoly {
        if k.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(k.into()))
                .collect(),
        )
    }

    /// Exact polynomial division: `(quotient, remainder)`.
    pub fn divrem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &lead;
            if !factor.is_zero() {
                quo[k] = factor.clone();
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    let idx = k + j;
                    rem[idx] = &rem[idx] - &(c * &factor);
                }
            }
            rem.pop();
        }
        (RatPoly::new(quo), RatPoly::new(rem))
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading().unwrap().clone();
        a.scale(&(Rat::from_integer(1.into()) / lead))
    }

    /// Square-free part `p / gcd(p, p')`; same real roots, all simple.
    pub fn squarefree_part(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        let (q, r) = self.divrem(&g);
        debug_assert!(r.is_zero(), "gcd must divide exactly");
        q
    }

    /// Exact range enclosure of `p([lo, hi])` by interval Horner.
    pub fn interval_eval(&self, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
        assert!(lo <= hi);
        let mut acc_lo = Rat::zero();
        let mut acc_hi = Rat::zero();
        for c in self.coeffs.iter().rev() {
            // [acc_lo, acc_hi] * [lo, hi] + c
            let products = [
                &acc_lo * lo,
                &acc_lo * hi,
                &acc_hi * lo,
                &acc_hi * hi,
            ];
            let mut new_lo = products[0].clone();
            let mut new_hi = products[0].clone();
            for p in &products[1..] {
                if p < &new_lo {
                    new_lo = p.clone();
                }
                if p > &new_hi {
                    new_hi = p.clone();
                }
            }
            acc_lo = new_lo + c;
            acc_hi = new_hi + c;
        }
        (acc_lo, acc_hi)
    }

    /// Coefficient list as `"num/den"` strings, constant term first; used in
    /// reports and certificates.
    pub fn coeff_strings(&self) -> Vec<String> {
        if self.is_zero() {
            return vec!["0".into()];
        }
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// Sign of the evaluation at `x`: -1, 0, or 1.
    pub fn sign_at(&self, x: &Rat) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }
}

/// Polynomial with complex rational coefficients, stored as a pair of real
/// polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CPoly {
    pub re: RatPoly,
    pub im: RatPoly,
}

impl CPoly {
    pub fn new(re: RatPoly, im: RatPoly) -> Self {
        CPoly { re, im }
    }

    pub fn real(re: RatPoly) -> Self {
        CPoly {
            re,
            im: RatPoly::zero(),
        }
    }

    pub fn zero() -> Self {
        CPoly::real(RatPoly::zero())
    }

    pub fn one() -> Self {
        CPoly::real(RatPoly::one())
    }

    pub fn constant(c: &CRat) -> Self {
        CPoly {
            re: RatPoly::constant(c.re.clone()),
            im: RatPoly::constant(c.im.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        match (self.re.degree(), self.im.degree()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0).max(b.unwrap_or(0))),
        }
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        CPoly {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        CPoly {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        CPoly {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn scale(&self, k: &CRat) -> CPoly {
        self.mul(&CPoly::constant(k))
    }

    /// Conjugate the coefficients.
    pub fn star(&self) -> CPoly {
        CPoly {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn eval(&self, x: &Rat) -> CRat {
        CRat::new(self.re.eval(x), self.im.eval(x))
    }
}
