//! The dual module: bounded module-linear functionals into the algebra,
//! the embedding `x -> <x, .>`, self-duality over finite-dimensional
//! algebras, the double dual, and the Riesz description of the compact
//! functionals.
//!
//! Conventions for the dual's module structure: `(alpha a)(x) = a* alpha(x)`
//! and the scalar action conjugates, `(lambda alpha)(x) = conj(lambda)
//! alpha(x)`; with these the embedding is complex-linear.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgElement, AlgebraDescriptor};
use crate::error::{CoreError, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::module::{ModuleSpace, ModuleVector, RANK_EPS};
use crate::operator::compact_ideal;
use crate::tolerances::{rel, Tolerances};

/// A complex-linear, module-linear map `X -> A`, stored as its matrix from
/// the module's complex basis to the algebra's matrix-unit basis.
#[derive(Debug, Clone)]
pub struct DualFunctional {
    space: ModuleSpace,
    /// `dim(A) x dim(X)`: column `j` holds the coordinates of `tau(b_j)`.
    matrix: CMatrix,
}

impl DualFunctional {
    pub fn from_matrix(space: &ModuleSpace, matrix: CMatrix) -> Result<Self> {
        if matrix.rows() != space.algebra().dim() || matrix.cols() != space.complex_dim() {
            return Err(CoreError::ShapeMismatch(format!(
                "dual functional matrix must be {}x{}",
                space.algebra().dim(),
                space.complex_dim()
            )));
        }
        Ok(DualFunctional {
            space: space.clone(),
            matrix,
        })
    }

    pub fn zero(space: &ModuleSpace) -> Self {
        DualFunctional {
            space: space.clone(),
            matrix: CMatrix::zeros(space.algebra().dim(), space.complex_dim()),
        }
    }

    /// Random module-linear functional `y -> sum_i a_i <z_i, y>` built from
    /// random algebra elements and vectors.
    pub fn random<R: Rng>(space: &ModuleSpace, rng: &mut R) -> Self {
        let mut matrix = CMatrix::zeros(space.algebra().dim(), space.complex_dim());
        for _ in 0..2 {
            let a = space.algebra().random_element(rng);
            let z = space.random_vector(rng);
            let left = a.left_mult_matrix();
            matrix = matrix.add(&left.matmul(&hat(&z).matrix));
        }
        DualFunctional {
            space: space.clone(),
            matrix,
        }
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &ModuleVector) -> AlgElement {
        let coords = self.matrix.apply(&v.to_complex());
        AlgElement::from_coords(self.space.algebra(), &coords).unwrap()
    }

    pub fn add(&self, other: &DualFunctional) -> DualFunctional {
        assert!(self.space == other.space);
        DualFunctional {
            space: self.space.clone(),
            matrix: self.matrix.add(&other.matrix),
        }
    }

    /// Module action `(alpha a)(x) = a* alpha(x)`.
    pub fn act(&self, a: &AlgElement) -> DualFunctional {
        DualFunctional {
            space: self.space.clone(),
            matrix: a.star().left_mult_matrix().matmul(&self.matrix),
        }
    }

    /// Scalar action `(lambda alpha)(x) = conj(lambda) alpha(x)`.
    pub fn scal(&self, lambda: C64) -> DualFunctional {
        DualFunctional {
            space: self.space.clone(),
            matrix: self.matrix.scale(lambda.conj()),
        }
    }

    /// Worst residual of `tau(x e) = tau(x) e` over basis sweeps.
    pub fn module_linearity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (e_idx, e) in self.space.algebra().basis().iter().enumerate() {
            let lhs = self.matrix.matmul(self.space.action_matrix(e_idx));
            let rhs = e.right_mult_matrix().matmul(&self.matrix);
            worst = worst.max(lhs.sub(&rhs).max_abs());
        }
        worst / rel(self.matrix.max_abs())
    }

    /// Operator norm as a map into the algebra (both bases are tracially
    /// orthonormal).
    pub fn norm(&self) -> Result<f64> {
        linalg::largest_singular_value(&self.matrix)
    }

    /// Serialized form, with the action conventions flagged.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.matrix.rows())
            .map(|i| {
                serde_json::Value::Array(
                    self.matrix
                        .row(i)
                        .iter()
                        .map(|z| serde_json::json!([z.re, z.im]))
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({
            "space": self.space.spec_string(),
            "matrix": rows,
            "actions": "right: (alpha a)(x) = a* alpha(x); scalar: (lambda alpha)(x) = conj(lambda) alpha(x)",
        })
    }
}

/// The canonical embedding `x -> <x, .>`.
pub fn hat(x: &ModuleVector) -> DualFunctional {
    let space = x.space();
    let mut matrix = CMatrix::zeros(space.algebra().dim(), space.complex_dim());
    for (j, b) in space.basis().iter().enumerate() {
        matrix.set_column(j, &x.inner(b).coords());
    }
    DualFunctional {
        space: space.clone(),
        matrix,
    }
}

/// Solve `hat(x) = tau`: the unique preimage under the embedding, found by
/// the tracial linear system over the module basis. Also returns the
/// A-valued residual, which certifies that `tau` really is module-linear.
pub fn riesz_solve(tau: &DualFunctional) -> Result<(ModuleVector, f64)> {
    let space = tau.space();
    let values: Vec<AlgElement> = space.basis().iter().map(|b| tau.apply(b)).collect();
    space.riesz_solve(&values)
}

/// Dimension of the space of module-linear maps with the given right-action
/// matrices into the algebra, by solving the linearity constraints.
fn constrained_map_dimension(algebra: &AlgebraDescriptor, action: &[CMatrix], d: usize) -> usize {
    let dim_a = algebra.dim();
    if d == 0 {
        return 0;
    }
    let right_mults: Vec<CMatrix> = algebra.basis().iter().map(|e| e.right_mult_matrix()).collect();
    // unknown M (dim_a x d); constraints M act_e - R_e M = 0 for every e
    let mut rows = Vec::with_capacity(dim_a * dim_a * d);
    for e in 0..dim_a {
        let act = &action[e];
        let re = &right_mults[e];
        for alpha in 0..dim_a {
            for j in 0..d {
                let mut row = vec![linalg::ZERO; dim_a * d];
                for k in 0..d {
                    row[alpha * d + k] += act.get(k, j);
                }
                for beta in 0..dim_a {
                    row[beta * d + j] -= re.get(alpha, beta);
                }
                rows.push(row);
            }
        }
    }
    let m = CMatrix::from_rows(rows);
    dim_a * d - linalg::rank(&m, RANK_EPS)
}

/// Dimension of the dual module, from the module-linearity constraints.
pub fn dual_dimension(space: &ModuleSpace) -> usize {
    let d = space.complex_dim();
    let action: Vec<CMatrix> = (0..space.algebra().dim())
        .map(|e| space.action_matrix(e).clone())
        .collect();
    constrained_map_dimension(space.algebra(), &action, d)
}

#[derive(Debug, Clone)]
pub struct SelfDualityReport {
    pub module_dim: usize,
    pub dual_dim: usize,
    /// Worst roundtrip residual of `riesz_solve(hat(x)) = x`.
    pub roundtrip_residual: f64,
    /// Worst solve residual for random module-linear functionals.
    pub functional_residual: f64,
}

impl SelfDualityReport {
    pub fn holds(&self, tols: &Tolerances) -> bool {
        self.module_dim == self.dual_dim
            && self.roundtrip_residual <= tols.op
            && self.functional_residual <= tols.op
    }
}

/// Certify that the embedding exhausts the dual: the constraint-rank
/// dimension of the dual equals the module dimension, and the Riesz solve
/// inverts the embedding.
pub fn self_duality_check<R: Rng>(
    space: &ModuleSpace,
    rng: &mut R,
    trials: usize,
    _tols: &Tolerances,
) -> Result<SelfDualityReport> {
    let mut roundtrip = 0.0f64;
    let mut functional = 0.0f64;
    for _ in 0..trials {
        let x = space.random_vector(rng);
        let (back, res) = riesz_solve(&hat(&x))?;
        functional = functional.max(res);
        let diff = back.sub(&x).max_abs_entry() / rel(x.max_abs_entry());
        roundtrip = roundtrip.max(diff);

        let tau = DualFunctional::random(space, rng);
        let (sol, res2) = riesz_solve(&tau)?;
        functional = functional.max(res2);
        // and the solution reproduces tau as a matrix
        let again = hat(&sol);
        let gap = again.matrix().sub(tau.matrix()).max_abs() / rel(tau.matrix().max_abs());
        functional = functional.max(gap);
    }
    Ok(SelfDualityReport {
        module_dim: space.complex_dim(),
        dual_dim: dual_dimension(space),
        roundtrip_residual: roundtrip,
        functional_residual: functional,
    })
}

/// An element of the double dual: a module-linear map `X^# -> A`, stored in
/// the basis `{hat(b_j)}` of the dual.
#[derive(Debug, Clone)]
pub struct BidualFunctional {
    space: ModuleSpace,
    /// Column `j` holds the coordinates of the value on `hat(b_j)`.
    matrix: CMatrix,
}

impl BidualFunctional {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Evaluate on a functional by expressing it in the hat basis first.
    pub fn apply(&self, tau: &DualFunctional) -> Result<AlgElement> {
        let (z, _res) = riesz_solve(tau)?;
        let coords = self.matrix.apply(&z.to_complex());
        Ok(AlgElement::from_coords(self.space.algebra(), &coords).unwrap())
    }
}

/// The canonical map into the double dual: `omega(x)(tau) = tau(x)*`.
pub fn omega(x: &ModuleVector) -> BidualFunctional {
    let space = x.space();
    let mut matrix = CMatrix::zeros(space.algebra().dim(), space.complex_dim());
    for (j, b) in space.basis().iter().enumerate() {
        // omega(x)(hat(b_j)) = hat(b_j)(x)* = <b_j, x>*
        matrix.set_column(j, &b.inner(x).star().coords());
    }
    BidualFunctional {
        space: space.clone(),
        matrix,
    }
}

#[derive(Debug, Clone)]
pub struct ReflexivityReport {
    pub module_dim: usize,
    pub bidual_dim: usize,
    pub omega_injective: bool,
    /// Worst residual of `omega(x)(hat(y)) = <x, y>` over random pairs.
    pub evaluation_residual: f64,
    /// Worst gap between the omega matrix and the hat matrix (the two are
    /// the same map under the identifications).
    pub consistency_residual: f64,
}

impl ReflexivityReport {
    pub fn holds(&self, tols: &Tolerances) -> bool {
        self.module_dim == self.bidual_dim
            && self.omega_injective
            && self.evaluation_residual <= tols.op
            && self.consistency_residual <= tols.op
    }
}

/// Certify that `omega` is a module isomorphism onto the double dual:
/// injective, with matching dimensions, and consistent with the embedding.
pub fn reflexivity_check<R: Rng>(
    space: &ModuleSpace,
    rng: &mut R,
    trials: usize,
    _tols: &Tolerances,
) -> Result<ReflexivityReport> {
    let d = space.complex_dim();
    let dim_a = space.algebra().dim();

    // dual action matrices in the hat basis, computed honestly through the
    // dual module structure: hat(b_j) . e expressed back in the hat basis
    let mut dual_action = Vec::with_capacity(dim_a);
    for e in space.algebra().basis() {
        let mut m = CMatrix::zeros(d, d);
        for (j, b) in space.basis().iter().enumerate() {
            let moved = hat(b).act(&e);
            let (z, res) = riesz_solve(&moved)?;
            if res > 1e-6 {
                return Err(CoreError::Internal(
                    "dual action left the module-linear functionals".into(),
                ));
            }
            m.set_column(j, &z.to_complex());
        }
        dual_action.push(m);
    }
    let bidual_dim = constrained_map_dimension(space.algebra(), &dual_action, d);

    // injectivity: stack the omega matrices of the basis vectors
    let omega_stack = CMatrix::from_rows(
        space
            .basis()
            .iter()
            .map(|b| omega(b).matrix.vectorize())
            .collect(),
    );
    let omega_injective = linalg::rank(&omega_stack, RANK_EPS) == d;

    let mut evaluation_residual = 0.0f64;
    let mut consistency_residual = 0.0f64;
    for _ in 0..trials {
        let x = space.random_vector(rng);
        let y = space.random_vector(rng);
        let om = omega(&x);
        let val = om.apply(&hat(&y))?;
        let expect = x.inner(&y);
        evaluation_residual = evaluation_residual
            .max(val.sub(&expect).max_abs_entry() / rel(expect.max_abs_entry()));
        consistency_residual = consistency_residual.max(
            om.matrix.sub(hat(&x).matrix()).max_abs() / rel(om.matrix.max_abs()),
        );
    }

    Ok(ReflexivityReport {
        module_dim: d,
        bidual_dim,
        omega_injective,
        evaluation_residual,
        consistency_residual,
    })
}

#[derive(Debug, Clone)]
pub struct KhatReport {
    pub span_dim: usize,
    pub membership_residual: f64,
}

/// `hat(x)` lies in the span of the rank-one functionals
/// `y -> a <z, y>` (the compact operators from `X` to the algebra).
pub fn khat_membership(x: &ModuleVector, _tols: &Tolerances) -> Result<KhatReport> {
    let space = x.space();
    let a_module = ModuleSpace::over_itself(space.algebra().clone())?;
    let span = compact_ideal(&a_module, space)?;
    let residual = span.membership_residual(hat(x).matrix());
    Ok(KhatReport {
        span_dim: span.dim(),
        membership_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::theta;
    use crate::rng::trial_rng;

    fn desc(s: &str) -> AlgebraDescriptor {
        s.parse().unwrap()
    }

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn hat_of_zero_is_zero() {
        let space = ModuleSpace::free(desc("M2"), 2).unwrap();
        let h = hat(&space.zero_vector());
        assert_eq!(h.matrix().max_abs(), 0.0);
    }

    #[test]
    fn hat_of_unit_is_identity_functional() {
        // X = A, x = 1: hat(1)(a) = 1* a = a
        let a = desc("M2+C");
        let space = ModuleSpace::over_itself(a.clone()).unwrap();
        let one = space.vector(vec![a.unit()], &tols()).unwrap();
        let h = hat(&one);
        let mut rng = trial_rng(51, 0);
        for _ in 0..10 {
            let v = space.random_vector(&mut rng);
            let got = h.apply(&v);
            assert!(got.sub(&v.coords()[0]).max_abs_entry() < 1e-10);
        }
        assert!(h.module_linearity_residual() < 1e-10);
    }

    #[test]
    fn hat_isometry() {
        let space = ModuleSpace::free(desc("M2"), 2).unwrap();
        let mut rng = trial_rng(52, 0);
        for _ in 0..50 {
            let x = space.random_vector(&mut rng);
            let n1 = hat(&x).norm().unwrap();
            let n2 = x.scalar_norm();
            assert!((n1 - n2).abs() <= 1e-3 * rel(n2), "{n1} vs {n2}");
        }
    }

    #[test]
    fn hat_intertwines_the_module_actions() {
        // hat(x a) = hat(x) . a and hat(lambda x) = lambda . hat(x)
        // (with the dual's conjugating scalar action)
        let space = ModuleSpace::free(desc("M2+C"), 2).unwrap();
        let mut rng = trial_rng(53, 0);
        for _ in 0..20 {
            let x = space.random_vector(&mut rng);
            let a = space.algebra().random_element(&mut rng);
            let lhs = hat(&x.act(&a));
            let rhs = hat(&x).act(&a);
            assert!(
                lhs.matrix().sub(rhs.matrix()).max_abs()
                    <= 1e-10 * rel(lhs.matrix().max_abs())
            );
            let lam = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            let lhs2 = hat(&x.scal(lam));
            let rhs2 = hat(&x).scal(lam);
            assert!(
                lhs2.matrix().sub(rhs2.matrix()).max_abs()
                    <= 1e-10 * rel(lhs2.matrix().max_abs())
            );
        }
    }

    #[test]
    fn riesz_identity_functional_gives_unit() {
        // X = A unital, tau = identity: tau(a) = a = <1, a>, so x = 1
        let a = desc("M2");
        let space = ModuleSpace::over_itself(a.clone()).unwrap();
        let tau = DualFunctional::from_matrix(&space, CMatrix::identity(a.dim())).unwrap();
        let (x, res) = riesz_solve(&tau).unwrap();
        assert!(res < 1e-10);
        let one = space.vector(vec![a.unit()], &tols()).unwrap();
        assert!(x.approx_eq(&one, 1e-9));
    }

    #[test]
    fn riesz_roundtrip_and_random_functionals() {
        let space = ModuleSpace::free(desc("M2+C"), 2).unwrap();
        let mut rng = trial_rng(54, 0);
        let report = self_duality_check(&space, &mut rng, 20, &tols()).unwrap();
        assert!(report.holds(&tols()), "{report:?}");
        assert_eq!(report.dual_dim, space.complex_dim());
    }

    #[test]
    fn dual_dimension_matches_module_dimension() {
        for (ds, rank) in [("M2", 1usize), ("M2", 2), ("C+C", 2), ("M2+C", 1)] {
            let space = ModuleSpace::free(desc(ds), rank).unwrap();
            assert_eq!(
                dual_dimension(&space),
                space.complex_dim(),
                "{ds} rank {rank}"
            );
        }
        // zero module
        let a = desc("M2");
        let zero = ModuleSpace::ideal(a.clone(), a.zero(), "zero").unwrap();
        assert_eq!(dual_dimension(&zero), 0);
    }

    #[test]
    fn omega_of_zero_and_random_consistency() {
        let space = ModuleSpace::free(desc("M2"), 2).unwrap();
        assert_eq!(omega(&space.zero_vector()).matrix().max_abs(), 0.0);
        let mut rng = trial_rng(55, 0);
        let report = reflexivity_check(&space, &mut rng, 15, &tols()).unwrap();
        assert!(report.holds(&tols()), "{report:?}");
    }

    #[test]
    fn khat_single_term_matches_theta() {
        // x = z a*: hat(x) = theta_{a, z} as maps from X to A
        let alg = desc("M2");
        let space = ModuleSpace::free(alg.clone(), 2).unwrap();
        let a_module = ModuleSpace::over_itself(alg.clone()).unwrap();
        let mut rng = trial_rng(56, 0);
        let z = space.random_vector(&mut rng);
        let a = alg.random_element(&mut rng);
        let x = z.act(&a.star());
        let va = a_module.vector(vec![a.clone()], &tols()).unwrap();
        let th = theta(&va, &z, &tols()).unwrap();
        let diff = hat(&x).matrix().sub(th.op().matrix()).max_abs();
        assert!(diff <= 1e-10 * rel(th.op().matrix().max_abs()));
    }

    #[test]
    fn khat_membership_of_random_vectors() {
        let space = ModuleSpace::free(desc("M2+C"), 2).unwrap();
        let mut rng = trial_rng(57, 0);
        for _ in 0..10 {
            let x = space.random_vector(&mut rng);
            let report = khat_membership(&x, &tols()).unwrap();
            assert!(report.membership_residual <= tols().op);
        }
        // the zero vector is trivially in the span
        let report = khat_membership(&space.zero_vector(), &tols()).unwrap();
        assert!(report.membership_residual <= tols().op);
    }
}
