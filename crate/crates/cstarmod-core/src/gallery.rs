//! Counterexample gallery: four self-verifying demos, each emitting a
//! certificate whose claims are machine-checked. The headline claims run on
//! the exact piecewise-polynomial backend with no floating-point
//! arithmetic; auxiliary matrix-backend claims (replicas, contrasts) state
//! their residuals in the evidence.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElement, AlgebraDescriptor};
use crate::error::{CoreError, Result};
use crate::linalg::CMatrix;
use crate::module::ModuleSpace;
use crate::operator::AdjointableOp;
use crate::polyfun::{annihilator_is_trivial, rat, rat_int, CRat, IntervalUnion, PiecewisePoly};
use crate::tolerances::Tolerances;

/// One machine-checked statement.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Claim {
    pub statement: String,
    pub verdict: bool,
    pub evidence: String,
}

/// Certificate of a gallery demo. `exact` records that every headline claim
/// was decided by exact rational arithmetic.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DemoCertificate {
    pub demo_id: String,
    pub backend: String,
    pub claims: Vec<Claim>,
    pub exact: bool,
}

impl DemoCertificate {
    pub fn all_claims_true(&self) -> bool {
        self.claims.iter().all(|c| c.verdict)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemoId {
    OrthocomplementTrivial,
    PythagorasFailure,
    TopologicalNotOrthogonal,
    NonadjointableInclusion,
}

pub const ALL_DEMOS: [DemoId; 4] = [
    DemoId::OrthocomplementTrivial,
    DemoId::PythagorasFailure,
    DemoId::TopologicalNotOrthogonal,
    DemoId::NonadjointableInclusion,
];

impl fmt::Display for DemoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DemoId::OrthocomplementTrivial => "orthocomplement-trivial",
            DemoId::PythagorasFailure => "pythagoras-failure",
            DemoId::TopologicalNotOrthogonal => "topological-not-orthogonal",
            DemoId::NonadjointableInclusion => "nonadjointable-inclusion",
        };
        write!(f, "{s}")
    }
}

impl FromStr for DemoId {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orthocomplement-trivial" => Ok(DemoId::OrthocomplementTrivial),
            "pythagoras-failure" => Ok(DemoId::PythagorasFailure),
            "topological-not-orthogonal" => Ok(DemoId::TopologicalNotOrthogonal),
            "nonadjointable-inclusion" => Ok(DemoId::NonadjointableInclusion),
            other => Err(CoreError::Parse(format!("unknown demo id `{other}`"))),
        }
    }
}

pub fn run_demo(id: DemoId) -> Result<DemoCertificate> {
    match id {
        DemoId::OrthocomplementTrivial => demo_orthocomplement_trivial(),
        DemoId::PythagorasFailure => demo_pythagoras_failure(),
        DemoId::TopologicalNotOrthogonal => demo_topological_not_orthogonal(),
        DemoId::NonadjointableInclusion => demo_nonadjointable_inclusion(),
    }
}

/// Rerun the demo named in a serialized certificate and require the bytes to
/// match; every claim re-verifies on replay.
pub fn replay(serialized: &str) -> Result<bool> {
    let cert: DemoCertificate = serde_json::from_str(serialized)
        .map_err(|e| CoreError::Parse(format!("bad certificate JSON: {e}")))?;
    let id: DemoId = cert.demo_id.parse()?;
    let fresh = run_demo(id)?;
    Ok(fresh.to_json_string() == serialized)
}

fn unit_interval() -> IntervalUnion {
    IntervalUnion::unit()
}

/// `t - 1/2` on `[0, 1]`.
fn t_minus_half(domain: &IntervalUnion) -> PiecewisePoly {
    PiecewisePoly::from_real_coeffs(domain, vec![vec![rat(-1, 2), rat_int(1)]]).unwrap()
}

/// In the algebra of polynomials on [0,1], the submodule
/// `F = {p : p(1/2) = 0}` (the ideal generated by `t - 1/2`) has trivial
/// orthogonal complement, yet `F != X`; so `F-perp-perp != F`.
fn demo_orthocomplement_trivial() -> Result<DemoCertificate> {
    let domain = unit_interval();
    let gen = t_minus_half(&domain);
    let t = PiecewisePoly::coordinate(&domain);
    let family = vec![gen.clone(), gen.mul(&t)?, gen.mul(&t.mul(&t)?)?];
    let half = rat(1, 2);
    let one = PiecewisePoly::one(&domain);
    let mut claims = Vec::new();

    let all_vanish = family
        .iter()
        .map(|f| f.vanishes_at(&half))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    claims.push(Claim {
        statement: "every element of the pinned generator family of F vanishes at 1/2".into(),
        verdict: all_vanish,
        evidence: format!(
            "family = (t-1/2), (t-1/2)t, (t-1/2)t^2; exact evaluation at 1/2 gives 0 for all {} members",
            family.len()
        ),
    });

    let cert = annihilator_is_trivial(&gen)?;
    claims.push(Claim {
        statement: "F-perp = {0}: the annihilator of (t - 1/2) is trivial".into(),
        verdict: cert.trivial,
        evidence: format!(
            "g in F-perp means g* (t - 1/2) p = 0 for all p; {}",
            cert.reason
        ),
    });

    let zero = PiecewisePoly::zero(&domain);
    let zero_orthogonal = family
        .iter()
        .map(|f| f.inner(&zero).map(|p| p.is_zero()))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    claims.push(Claim {
        statement: "0 lies in F-perp".into(),
        verdict: zero_orthogonal,
        evidence: "<f, 0> = f* 0 = 0 exactly for the whole family".into(),
    });

    let one_outside = !one.vanishes_at(&half)?;
    claims.push(Claim {
        statement: "1 is not in F".into(),
        verdict: one_outside,
        evidence: "every element of F vanishes at 1/2; exact evaluation gives 1(1/2) = 1".into(),
    });

    claims.push(Claim {
        statement: "F-perp-perp = X differs from F: 1 lies in F-perp-perp but not in F".into(),
        verdict: cert.trivial && one_outside,
        evidence: "F-perp = {0} makes F-perp-perp the whole algebra, which contains 1".into(),
    });

    Ok(DemoCertificate {
        demo_id: DemoId::OrthocomplementTrivial.to_string(),
        backend: "PP[0,1]".into(),
        claims,
        exact: true,
    })
}

/// Orthogonal indicator functions on [0,1] u [2,3] break Pythagoras:
/// `<f,g> = 0` while `||f+g||^2 = 1 != 2 = ||f||^2 + ||g||^2`. A two-point
/// matrix replica over C+C shows the same arithmetic.
fn demo_pythagoras_failure() -> Result<DemoCertificate> {
    let domain: IntervalUnion = "PP[0,1]u[2,3]".parse()?;
    let f = PiecewisePoly::indicator(&domain, 0)?;
    let g = PiecewisePoly::indicator(&domain, 1)?;
    let mut claims = Vec::new();

    let prod = f.inner(&g)?;
    claims.push(Claim {
        statement: "<f, g> = f g = 0 exactly".into(),
        verdict: prod.is_zero(),
        evidence: "f, g are the indicators of [0,1] and [2,3]; the product has zero coefficients on both pieces".into(),
    });

    let nf = f.sup_norm()?;
    let ng = g.sup_norm()?;
    claims.push(Claim {
        statement: "||f|| = ||g|| = 1 exactly".into(),
        verdict: nf.is_exact() && nf.lo == rat_int(1) && ng.is_exact() && ng.lo == rat_int(1),
        evidence: format!("sup-norm enclosures: ||f|| = {nf}, ||g|| = {ng}"),
    });

    let sum = f.add(&g)?;
    let nsum = sum.sup_norm()?;
    claims.push(Claim {
        statement: "||f + g|| = 1 exactly".into(),
        verdict: nsum.is_exact() && nsum.lo == rat_int(1),
        evidence: format!("f + g is the constant 1 on both pieces; enclosure {nsum}"),
    });

    claims.push(Claim {
        statement: "Pythagoras fails: ||f+g||^2 = 1 differs from ||f||^2 + ||g||^2 = 2".into(),
        verdict: nsum.lo.clone() * nsum.lo.clone()
            != nf.lo.clone() * nf.lo.clone() + ng.lo.clone() * ng.lo.clone(),
        evidence: "exact rational comparison 1 != 2 despite <f, g> = 0".into(),
    });

    // matrix replica over C+C
    let a: AlgebraDescriptor = "C+C".parse()?;
    let space = ModuleSpace::over_itself(a.clone())?;
    let tols = Tolerances::default();
    let fm = space.vector(
        vec![AlgElement::from_coords(
            &a,
            &[crate::linalg::ONE, crate::linalg::ZERO],
        )?],
        &tols,
    )?;
    let gm = space.vector(
        vec![AlgElement::from_coords(
            &a,
            &[crate::linalg::ZERO, crate::linalg::ONE],
        )?],
        &tols,
    )?;
    let inner_res = fm.inner(&gm).max_abs_entry();
    let worst_norm_gap = [
        (fm.scalar_norm() - 1.0).abs(),
        (gm.scalar_norm() - 1.0).abs(),
        (fm.add(&gm).scalar_norm() - 1.0).abs(),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    claims.push(Claim {
        statement: "matrix replica over C+C agrees: f = (1,0), g = (0,1) give the same four equalities".into(),
        verdict: inner_res == 0.0 && worst_norm_gap <= tols.norm,
        evidence: format!(
            "matrix backend: |<f,g>| = {inner_res:.1e}, worst norm deviation {worst_norm_gap:.1e} (tolerance 1e-9)"
        ),
    });

    Ok(DemoCertificate {
        demo_id: DemoId::PythagorasFailure.to_string(),
        backend: "PP[0,1]u[2,3] + matrix C+C".into(),
        claims,
        exact: true,
    })
}

fn pair_inner(
    a: &(PiecewisePoly, PiecewisePoly),
    b: &(PiecewisePoly, PiecewisePoly),
) -> Result<PiecewisePoly> {
    a.0.inner(&b.0)?.add(&a.1.inner(&b.1)?)
}

/// In `X = A (+) J` with `J = {p : p(0) = 0}`, the diagonal `F = {(f, f)}`
/// has `F + F-perp = J + J != X`, yet `G = {(f, 0)}` is a topological
/// complement.
fn demo_topological_not_orthogonal() -> Result<DemoCertificate> {
    let domain = unit_interval();
    let t = PiecewisePoly::coordinate(&domain);
    let t2 = t.mul(&t)?;
    let t3 = t2.mul(&t)?;
    let j_family = vec![t.clone(), t2.clone(), t3.clone()];
    let minus_one = CRat::from_int(-1);
    let zero_point = rat_int(0);
    let one = PiecewisePoly::one(&domain);
    let zero = PiecewisePoly::zero(&domain);
    let mut claims = Vec::new();

    let mut perp_ok = true;
    for f in &j_family {
        for g in &j_family {
            let lhs = pair_inner(
                &(f.clone(), f.clone()),
                &(g.clone(), g.scale(&minus_one)),
            )?;
            if !lhs.is_zero() {
                perp_ok = false;
            }
        }
    }
    claims.push(Claim {
        statement: "F-perp contains (g, -g) for every g in the pinned family of J".into(),
        verdict: perp_ok,
        evidence: "exact cancellation <(f,f),(g,-g)> = f* g - f* g = 0 over the family t, t^2, t^3".into(),
    });

    let mut first_components_vanish = true;
    for f in &j_family {
        for g in &j_family {
            let sum_first = f.add(g)?;
            if !sum_first.vanishes_at(&zero_point)? {
                first_components_vanish = false;
            }
        }
    }
    claims.push(Claim {
        statement: "every element of F + F-perp has first component vanishing at 0".into(),
        verdict: first_components_vanish,
        evidence: "(f,f) + (g,-g) = (f+g, f-g) with f, g in J; exact evaluation (f+g)(0) = 0 over the family; vanishing at a point is linear".into(),
    });

    let one_not_vanishing = !one.vanishes_at(&zero_point)?;
    claims.push(Claim {
        statement: "(1, 0) is not in F + F-perp, so F + F-perp = J + J differs from X".into(),
        verdict: first_components_vanish && one_not_vanishing,
        evidence: "exact evaluation 1(0) = 1, but first components of F + F-perp vanish at 0".into(),
    });

    let sample_a = one.add(&t)?; // 1 + t, an arbitrary element of A
    let sample_j = t2.clone(); // t^2 lies in J
    let part_f = (sample_j.clone(), sample_j.clone());
    let part_g = (sample_a.sub(&sample_j)?, zero.clone());
    let recombined = (part_f.0.add(&part_g.0)?, part_f.1.add(&part_g.1)?);
    let decomposition_exact = recombined.0 == sample_a
        && recombined.1 == sample_j
        && part_f.0.vanishes_at(&zero_point)?;
    claims.push(Claim {
        statement: "G = {(f, 0)} decomposes X: (a, j) = (j, j) + (a - j, 0) exactly".into(),
        verdict: decomposition_exact,
        evidence: "sample (a, j) = (1 + t, t^2): (t^2, t^2) lies in F, (1 + t - t^2, 0) lies in G, the sum is exact".into(),
    });

    let intersection_trivial = j_family.iter().all(|f| !f.is_zero());
    claims.push(Claim {
        statement: "F and G intersect trivially: (f, f) = (g, 0) forces f = 0".into(),
        verdict: intersection_trivial,
        evidence: "second components give f = 0 exactly; the nonzero family members therefore never lie in G".into(),
    });

    Ok(DemoCertificate {
        demo_id: DemoId::TopologicalNotOrthogonal.to_string(),
        backend: "PP[0,1]".into(),
        claims,
        exact: true,
    })
}

/// The inclusion of `X = {p : p(1/2) = 0}` into the polynomial algebra is
/// bounded and module-linear but has no adjoint: the only candidate for the
/// adjoint value at 1 is 1 itself, which lies outside `X`. Over a
/// finite-dimensional algebra the same construction always has an adjoint.
fn demo_nonadjointable_inclusion() -> Result<DemoCertificate> {
    let domain = unit_interval();
    let gen = t_minus_half(&domain);
    let t = PiecewisePoly::coordinate(&domain);
    let family = vec![gen.clone(), gen.mul(&t)?, gen.mul(&t.mul(&t)?)?];
    let half = rat(1, 2);
    let one = PiecewisePoly::one(&domain);
    let mut claims = Vec::new();

    let cert = annihilator_is_trivial(&gen)?;
    claims.push(Claim {
        statement: "any adjoint candidate c = i*(1) must satisfy x*(c - 1) = 0 for all x in X; triviality of the annihilator of (t - 1/2) forces c = 1".into(),
        verdict: cert.trivial,
        evidence: format!(
            "<x, c> = <i(x), 1> = x* 1 rewrites to x*(c - 1) = 0; with x = t - 1/2 nonzero, {}",
            cert.reason
        ),
    });

    let candidate_consistent = {
        let mut ok = true;
        for x in &family {
            let lhs = x.inner(&one)?;
            let rhs = x.star().mul(&one)?;
            if lhs != rhs {
                ok = false;
            }
        }
        ok
    };
    claims.push(Claim {
        statement: "c = 1 satisfies the defining equations on the generator family".into(),
        verdict: candidate_consistent,
        evidence: "exact identity <x, 1> = x* for x = (t-1/2), (t-1/2)t, (t-1/2)t^2".into(),
    });

    let one_outside = !one.vanishes_at(&half)?;
    claims.push(Claim {
        statement: "1 is not in X".into(),
        verdict: one_outside,
        evidence: "members of X vanish at 1/2; exact evaluation 1(1/2) = 1".into(),
    });

    claims.push(Claim {
        statement: "hence the inclusion has no adjoint".into(),
        verdict: cert.trivial && one_outside,
        evidence: "the forced adjoint value i*(1) = 1 lies outside X".into(),
    });

    // finite-dimensional contrast
    let tols = Tolerances::default();
    let a: AlgebraDescriptor = "M2".parse()?;
    let e11 = a.matrix_unit(0, 0, 0)?;
    let ideal = ModuleSpace::ideal(a.clone(), e11, "e11")?;
    let ambient = ModuleSpace::over_itself(a.clone())?;
    let mut incl = CMatrix::zeros(ambient.complex_dim(), ideal.complex_dim());
    for (j, b) in ideal.basis().iter().enumerate() {
        let lifted = ambient.vector(vec![b.coords()[0].clone()], &tols)?;
        incl.set_column(j, &lifted.to_complex());
    }
    let contrast = AdjointableOp::try_new(&ideal, &ambient, incl, &tols);
    let (contrast_ok, contrast_evidence) = match contrast {
        Ok(op) => {
            let res = op.adjoint_identity_residual();
            (
                res <= tols.op,
                format!(
                    "adjoint solver succeeded for the inclusion of e11*M2 into M2; adjoint identity residual {res:.1e}"
                ),
            )
        }
        Err(e) => (false, format!("adjoint solver failed: {e}")),
    };
    claims.push(Claim {
        statement: "finite-dimensional contrast: the inclusion of the ideal e11*M2 into M2 is adjointable".into(),
        verdict: contrast_ok,
        evidence: contrast_evidence,
    });

    Ok(DemoCertificate {
        demo_id: DemoId::NonadjointableInclusion.to_string(),
        backend: "PP[0,1] + matrix M2".into(),
        claims,
        exact: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_demos_certify_true() {
        for id in ALL_DEMOS {
            let cert = run_demo(id).unwrap();
            assert!(
                cert.all_claims_true(),
                "demo {id} has failing claims: {:#?}",
                cert.claims
            );
            assert!(cert.exact, "demo {id} lost exactness");
            assert!(!cert.claims.is_empty());
        }
    }

    #[test]
    fn certificates_replay_byte_identically() {
        for id in ALL_DEMOS {
            let cert = run_demo(id).unwrap();
            let serialized = cert.to_json_string();
            assert!(replay(&serialized).unwrap(), "replay mismatch for {id}");
        }
    }

    #[test]
    fn unknown_demo_id_rejected() {
        assert!("nope".parse::<DemoId>().is_err());
        for id in ALL_DEMOS {
            let roundtrip: DemoId = id.to_string().parse().unwrap();
            assert_eq!(roundtrip, id);
        }
    }

    #[test]
    fn certificate_schema_fields() {
        let cert = run_demo(DemoId::PythagorasFailure).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cert.to_json_string()).unwrap();
        assert!(v.get("demo_id").is_some());
        assert!(v.get("backend").is_some());
        assert!(v.get("exact").is_some());
        let claims = v.get("claims").unwrap().as_array().unwrap();
        for c in claims {
            assert!(c.get("statement").is_some());
            assert!(c.get("verdict").is_some());
            assert!(c.get("evidence").is_some());
        }
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let cert = run_demo(DemoId::OrthocomplementTrivial).unwrap();
        let mut tampered = cert.clone();
        tampered.claims[0].verdict = false;
        assert!(!replay(&tampered.to_json_string()).unwrap());
    }
}
