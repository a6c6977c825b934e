//! Certified real-root isolation for rational polynomials via Sturm
//! sequences and sign bisection.

use num_traits::Zero;

use super::poly::RatPoly;
use super::rat::Rat;

/// Where a root lives: exactly at a rational point, or strictly inside a
/// bracket whose endpoint signs differ (exactly one simple root inside).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootLocation {
    Exact(Rat),
    Bracket(Rat, Rat),
}

/// Canonical Sturm chain of a square-free polynomial. Each element is
/// rescaled by a positive rational so coefficients stay small; positive
/// scaling preserves the sign pattern.
pub fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![normalize(p.clone()), normalize(p.derivative())];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
        chain.push(normalize(r.neg()));
    }
    chain
}

fn normalize(p: RatPoly) -> RatPoly {
    match p.leading() {
        Some(lead) => {
            let scale = if lead < &Rat::zero() {
                -lead.clone()
            } else {
                lead.clone()
            };
            p.scale(&(Rat::from_integer(1.into()) / scale))
        }
        None => p,
    }
}

fn variations(chain: &[RatPoly], x: &Rat) -> usize {
    let mut count = 0;
    let mut last: i8 = 0;
    for p in chain {
        let s = p.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots(chain: &[RatPoly], a: &Rat, b: &Rat) -> usize {
    variations(chain, a).saturating_sub(variations(chain, b))
}

/// Isolate the distinct real roots of `q` in the closed interval `[l, r]`.
///
/// Exact rational roots come back as `Exact`; the rest as sign-change
/// brackets each containing exactly one simple root. Brackets refer to the
/// returned deflated square-free polynomial (exact roots divided out), which
/// is the polynomial to refine against.
pub fn isolate_roots(q: &RatPoly, l: &Rat, r: &Rat) -> (Vec<RootLocation>, RatPoly) {
    assert!(!q.is_zero(), "cannot isolate roots of the zero polynomial");
    assert!(l <= r);
    let mut found = Vec::new();
    let mut work = q.squarefree_part();

    if l == r {
        if work.sign_at(l) == 0 {
            found.push(RootLocation::Exact(l.clone()));
        }
        return (found, work);
    }

    // deflate exact roots as they are discovered, then re-run the sweep
    'restart: loop {
        if work.degree().unwrap_or(0) == 0 {
            return (found, work);
        }
        // endpoint roots are deflated immediately so Sturm counts apply to
        // the open interval
        for endpoint in [l, r] {
            if work.sign_at(endpoint) == 0 {
                found.push(RootLocation::Exact(endpoint.clone()));
                work = deflate(&work, endpoint);
                continue 'restart;
            }
        }
        let chain = sturm_chain(&work);
        let mut brackets = Vec::new();
        let mut stack = vec![(l.clone(), r.clone())];
        while let Some((a, b)) = stack.pop() {
            let n = count_roots(&chain, &a, &b);
            if n == 0 {
                continue;
            }
            if n == 1 {
                debug_assert!(work.sign_at(&a) * work.sign_at(&b) < 0);
                brackets.push(RootLocation::Bracket(a, b));
                continue;
            }
            let mid = (&a + &b) / Rat::from_integer(2.into());
            if work.sign_at(&mid) == 0 {
                found.push(RootLocation::Exact(mid.clone()));
                work = deflate(&work, &mid);
                continue 'restart;
            }
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
        found.extend(brackets);
        return (found, work);
    }
}

fn deflate(p: &RatPoly, root: &Rat) -> RatPoly {
    let linear = RatPoly::new(vec![-root.clone(), Rat::from_integer(1.into())]);
    let (q, rem) = p.divrem(&linear);
    debug_assert!(rem.is_zero(), "deflation at a non-root");
    q
}

/// Shrink a sign-change bracket below `max_width` by bisection. May upgrade
/// to `Exact` when a midpoint lands on the root.
pub fn refine(sf: &RatPoly, loc: RootLocation, max_width: &Rat) -> RootLocation {
    match loc {
        RootLocation::Exact(x) => RootLocation::Exact(x),
        RootLocation::Bracket(mut a, mut b) => {
            let mut sa = sf.sign_at(&a);
            debug_assert!(sa != 0 && sf.sign_at(&b) != 0);
            while &(&b - &a) > max_width {
                let mid = (&a + &b) / Rat::from_integer(2.into());
                let sm = sf.sign_at(&mid);
                if sm == 0 {
                    return RootLocation::Exact(mid);
                }
                if sm == sa {
                    a = mid;
                    sa = sm;
                } else {
                    b = mid;
                }
            }
            RootLocation::Bracket(a, b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat::{pow10_neg, rat, rat_int};
    use super::*;

    fn p(coeffs: &[(i64, i64)]) -> RatPoly {
        RatPoly::new(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn isolates_two_known_roots() {
        // (t - 1/4)(t - 3/4) = t^2 - t + 3/16
        let q = p(&[(3, 16), (-1, 1), (1, 1)]);
        let (roots, _) = isolate_roots(&q, &rat_int(0), &rat_int(1));
        assert_eq!(roots.len(), 2);
        for loc in &roots {
            match loc {
                RootLocation::Exact(x) => {
                    assert!(x == &rat(1, 4) || x == &rat(3, 4));
                }
                RootLocation::Bracket(a, b) => {
                    let hits = [rat(1, 4), rat(3, 4)];
                    assert!(hits.iter().any(|r| a < r && r < b));
                }
            }
        }
    }

    #[test]
    fn exact_root_at_midpoint_and_endpoint() {
        // roots at the endpoint 0 and at 1/2
        let q = p(&[(0, 1), (-1, 2), (1, 1)]); // t(t - 1/2)
        let (roots, work) = isolate_roots(&q, &rat_int(0), &rat_int(1));
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&RootLocation::Exact(rat_int(0))));
        // the interior root is bracketed; refinement lands on it exactly
        let other = roots
            .iter()
            .find(|loc| **loc != RootLocation::Exact(rat_int(0)))
            .unwrap();
        let refined = refine(&work, other.clone(), &pow10_neg(14));
        assert_eq!(refined, RootLocation::Exact(rat(1, 2)));
    }

    #[test]
    fn no_roots_reports_empty() {
        let q = p(&[(1, 1), (0, 1), (1, 1)]); // t^2 + 1
        assert!(isolate_roots(&q, &rat_int(-5), &rat_int(5)).0.is_empty());
    }

    #[test]
    fn multiple_root_counted_once() {
        let lin = p(&[(-1, 3), (1, 1)]); // t - 1/3
        let sq = lin.mul(&lin);
        let (roots, _) = isolate_roots(&sq, &rat_int(0), &rat_int(1));
        assert_eq!(roots.len(), 1);
    }

    #[test]
    fn refine_narrows_to_width() {
        // sqrt(2)/2 is a root of 2t^2 - 1
        let q = p(&[(-1, 1), (0, 1), (2, 1)]);
        let (roots, work) = isolate_roots(&q, &rat_int(0), &rat_int(1));
        assert_eq!(roots.len(), 1);
        let width = pow10_neg(14);
        let refined = refine(&work, roots[0].clone(), &width);
        match refined {
            RootLocation::Bracket(a, b) => {
                assert!(&b - &a <= width);
                // root stays inside
                assert!(q.sign_at(&a) * q.sign_at(&b) < 0);
            }
            RootLocation::Exact(_) => panic!("irrational root cannot be exact"),
        }
    }
}
