//! Adjointable maps between Hilbert modules.
//!
//! An operator is accepted only if it is module-linear; its adjoint is then
//! computed columnwise by solving the Riesz problem for
//! `x -> <f, t x>` over the domain. Operator norms come from the largest
//! singular value of the matrix in the tracially orthonormal bases: the
//! tracial representation is a faithful *-representation of the operator
//! algebra, so its norm coincides with the module operator norm. A probe
//! check against the definition (supremum over unit vectors) guards that
//! identification.

pub mod compact;
pub mod theta;

pub use compact::{compact_ideal, k_of_a_isomorphism, module_linear_endo_dimension, KOfAReport, OperatorIdealBasis};
pub use theta::{theta, theta_identities_check, ThetaIdentities, ThetaOp};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::AlgElement;
use crate::error::{CoreError, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::module::{ModuleKind, ModuleSpace, ModuleVector};
use crate::tolerances::{rel, Tolerances};

/// A module-linear map together with its computed adjoint.
#[derive(Debug, Clone)]
pub struct AdjointableOp {
    domain: ModuleSpace,
    codomain: ModuleSpace,
    /// codomain_dim x domain_dim, in the complex bases.
    matrix: CMatrix,
    /// domain_dim x codomain_dim; satisfies `<t x, y> = <x, t* y>`.
    adjoint_matrix: CMatrix,
}

impl AdjointableOp {
    /// Accept a complex matrix as an operator: check module-linearity, then
    /// compute the adjoint by Riesz solves and verify the adjoint identity
    /// on all basis pairs.
    pub fn try_new(
        domain: &ModuleSpace,
        codomain: &ModuleSpace,
        matrix: CMatrix,
        tols: &Tolerances,
    ) -> Result<Self> {
        if matrix.rows() != codomain.complex_dim() || matrix.cols() != domain.complex_dim() {
            return Err(CoreError::ShapeMismatch(format!(
                "operator matrix must be {}x{}, got {}x{}",
                codomain.complex_dim(),
                domain.complex_dim(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        if domain.algebra() != codomain.algebra() {
            return Err(CoreError::ShapeMismatch(
                "domain and codomain must share the algebra".into(),
            ));
        }
        let linearity = module_linearity_residual(domain, codomain, &matrix);
        if linearity > tols.op * rel(matrix.max_abs()) {
            return Err(CoreError::NotModuleLinear {
                residual: linearity,
            });
        }
        let adjoint_matrix = riesz_adjoint(domain, codomain, &matrix)?;
        let op = AdjointableOp {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix,
            adjoint_matrix,
        };
        let residual = op.adjoint_identity_residual();
        if residual > tols.op * rel(op.matrix.max_abs()) {
            return Err(CoreError::Internal(format!(
                "adjoint identity failed after Riesz solve (residual {residual:.3e})"
            )));
        }
        Ok(op)
    }

    pub fn identity(space: &ModuleSpace) -> Self {
        let d = space.complex_dim();
        AdjointableOp {
            domain: space.clone(),
            codomain: space.clone(),
            matrix: CMatrix::identity(d),
            adjoint_matrix: CMatrix::identity(d),
        }
    }

    pub fn zero(domain: &ModuleSpace, codomain: &ModuleSpace) -> Self {
        AdjointableOp {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: CMatrix::zeros(codomain.complex_dim(), domain.complex_dim()),
            adjoint_matrix: CMatrix::zeros(domain.complex_dim(), codomain.complex_dim()),
        }
    }

    /// Operator on a free or tensor module given by an algebra-coefficient
    /// grid acting by left multiplication: `t(x)_i = sum_j grid[i][j] x_j`.
    pub fn from_alg_coeffs(
        space: &ModuleSpace,
        grid: &[Vec<AlgElement>],
        tols: &Tolerances,
    ) -> Result<Self> {
        let m = space.rank();
        if grid.len() != m || grid.iter().any(|row| row.len() != m) {
            return Err(CoreError::ShapeMismatch(format!(
                "coefficient grid must be {m}x{m}"
            )));
        }
        let d = space.complex_dim();
        let mut matrix = CMatrix::zeros(d, d);
        for (j, b) in space.basis().iter().enumerate() {
            let coords: Vec<AlgElement> = (0..m)
                .map(|i| {
                    let mut acc = space.algebra().zero();
                    for (k, g) in grid[i].iter().enumerate() {
                        acc = acc.add(&g.mul(&b.coords()[k]));
                    }
                    acc
                })
                .collect();
            let image = space.vector(coords, tols)?;
            matrix.set_column(j, &image.to_complex());
        }
        Self::try_new(space, space, matrix, tols)
    }

    /// Random module-linear operator: a coefficient grid of random algebra
    /// elements on free and tensor modules, a random combination of rank-one
    /// theta operators otherwise.
    pub fn random<R: Rng>(space: &ModuleSpace, rng: &mut R, tols: &Tolerances) -> Result<Self> {
        match space.kind() {
            ModuleKind::Free { .. } | ModuleKind::Tensor { .. } => {
                let m = space.rank();
                let grid: Vec<Vec<AlgElement>> = (0..m)
                    .map(|_| (0..m).map(|_| space.algebra().random_element(rng)).collect())
                    .collect();
                Self::from_alg_coeffs(space, &grid, tols)
            }
            _ => {
                let mut acc = Self::zero(space, space);
                for _ in 0..3 {
                    let x = space.random_vector(rng);
                    let y = space.random_vector(rng);
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    let th = theta(&x, &y, tols)?;
                    acc = acc.add(&th.op().scale(C64::new(re, im)));
                }
                Ok(acc)
            }
        }
    }

    pub fn domain(&self) -> &ModuleSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &ModuleSpace {
        &self.codomain
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn adjoint_matrix(&self) -> &CMatrix {
        &self.adjoint_matrix
    }

    /// The adjoint as an operator in its own right.
    pub fn adjoint_op(&self) -> AdjointableOp {
        AdjointableOp {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix: self.adjoint_matrix.clone(),
            adjoint_matrix: self.matrix.clone(),
        }
    }

    pub fn apply(&self, v: &ModuleVector) -> ModuleVector {
        assert!(v.space() == &self.domain, "operator applied outside its domain");
        self.codomain.from_complex(&self.matrix.apply(&v.to_complex()))
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &AdjointableOp) -> Result<AdjointableOp> {
        if &self.domain != other.codomain() {
            return Err(CoreError::ShapeMismatch(
                "composition needs matching middle spaces".into(),
            ));
        }
        Ok(AdjointableOp {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.matmul(&other.matrix),
            adjoint_matrix: other.adjoint_matrix.matmul(&self.adjoint_matrix),
        })
    }

    pub fn add(&self, other: &AdjointableOp) -> AdjointableOp {
        assert!(self.domain == other.domain && self.codomain == other.codomain);
        AdjointableOp {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.add(&other.matrix),
            adjoint_matrix: self.adjoint_matrix.add(&other.adjoint_matrix),
        }
    }

    pub fn sub(&self, other: &AdjointableOp) -> AdjointableOp {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, k: C64) -> AdjointableOp {
        AdjointableOp {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.scale(k),
            adjoint_matrix: self.adjoint_matrix.scale(k.conj()),
        }
    }

    /// Operator norm (largest singular value in the tracial bases).
    pub fn norm(&self) -> Result<f64> {
        linalg::largest_singular_value(&self.matrix)
    }

    /// Worst residual of `<t b_i, f_j> = <b_i, t* f_j>` over basis pairs,
    /// relative to the operator scale.
    pub fn adjoint_identity_residual(&self) -> f64 {
        let t_cols: Vec<ModuleVector> = (0..self.domain.complex_dim())
            .map(|i| self.codomain.from_complex(&self.matrix.column(i)))
            .collect();
        let tstar_cols: Vec<ModuleVector> = (0..self.codomain.complex_dim())
            .map(|j| self.domain.from_complex(&self.adjoint_matrix.column(j)))
            .collect();
        let dom_basis = self.domain.basis();
        let cod_basis = self.codomain.basis();
        let mut worst = 0.0f64;
        let mut scale = 1.0f64;
        for (i, _) in dom_basis.iter().enumerate() {
            for (j, f) in cod_basis.iter().enumerate() {
                let lhs = t_cols[i].inner(f);
                let rhs = dom_basis[i].inner(&tstar_cols[j]);
                scale = scale.max(lhs.max_abs_entry());
                worst = worst.max(lhs.sub(&rhs).max_abs_entry());
            }
        }
        worst / scale
    }

    /// Compare the supremum of `||t x||` over unit probes (including the
    /// top singular vector mapped back into the module) against the
    /// singular-value norm; returns the relative gap.
    pub fn probe_norm_gap<R: Rng>(&self, rng: &mut R, probes: usize) -> Result<f64> {
        let sigma = self.norm()?;
        if self.domain.complex_dim() == 0 {
            return Ok(0.0);
        }
        let mut sup = 0.0f64;
        for _ in 0..probes {
            let x = self.domain.random_unit_vector(rng);
            sup = sup.max(self.apply(&x).scalar_norm());
        }
        // singular-vector seed attains the supremum
        let seed = self.domain.from_complex(&linalg::top_right_singular_vector(&self.matrix)?);
        let n = seed.scalar_norm();
        if n > 1e-12 {
            sup = sup.max(self.apply(&seed).scalar_norm() / n);
        }
        Ok((sup - sigma).abs() / rel(sigma))
    }

    /// `| ||t||^2 - ||t* t|| |` relative to `max(1, ||t||^2)`, with the two
    /// sides computed through independent routes (the adjoint comes from the
    /// Riesz solve, not from the conjugate transpose).
    pub fn cstar_identity_gap(&self) -> Result<f64> {
        let n = self.norm()?;
        let tstar_t = self.adjoint_op().compose(self)?;
        let n2 = tstar_t.norm()?;
        Ok((n * n - n2).abs() / rel(n * n))
    }

    /// Serialized form: domain/codomain specs plus the complex matrix.
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
            "domain": self.domain.spec_string(),
            "codomain": self.codomain.spec_string(),
            "matrix": rows,
        })
    }
}

/// Worst residual of `t(x e) = (t x) e` over the domain basis and the
/// algebra basis, as matrices: `M Act_e - Act_e M`.
pub fn module_linearity_residual(
    domain: &ModuleSpace,
    codomain: &ModuleSpace,
    matrix: &CMatrix,
) -> f64 {
    let mut worst = 0.0f64;
    for e in 0..domain.algebra().dim() {
        let lhs = matrix.matmul(domain.action_matrix(e));
        let rhs = codomain.action_matrix(e).matmul(matrix);
        worst = worst.max(lhs.sub(&rhs).max_abs());
    }
    worst
}

/// Columnwise adjoint through Riesz solves: for each codomain basis vector
/// `f`, solve `<z, x> = <f, t x>` for `z = t* f`.
fn riesz_adjoint(
    domain: &ModuleSpace,
    codomain: &ModuleSpace,
    matrix: &CMatrix,
) -> Result<CMatrix> {
    let d_dom = domain.complex_dim();
    let d_cod = codomain.complex_dim();
    let t_cols: Vec<ModuleVector> = (0..d_dom)
        .map(|i| codomain.from_complex(&matrix.column(i)))
        .collect();
    let mut adjoint = CMatrix::zeros(d_dom, d_cod);
    for (j, f) in codomain.basis().iter().enumerate() {
        let values: Vec<AlgElement> = t_cols.iter().map(|tc| f.inner(tc)).collect();
        let (z, residual) = domain.riesz_solve(&values)?;
        if residual > 1e-6 {
            return Err(CoreError::Internal(format!(
                "Riesz solve for the adjoint left residual {residual:.3e}; \
                 the functional is not module-linear"
            )));
        }
        adjoint.set_column(j, &z.to_complex());
    }
    Ok(adjoint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraDescriptor;
    use crate::rng::trial_rng;

    fn desc(s: &str) -> AlgebraDescriptor {
        s.parse().unwrap()
    }

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_is_self_adjoint() {
        let space = ModuleSpace::free(desc("M2"), 2).unwrap();
        let id = AdjointableOp::identity(&space);
        assert_eq!(id.matrix(), id.adjoint_matrix());
        assert!(id.adjoint_identity_residual() < 1e-12);
        assert!((id.norm().unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn left_multiplication_adjoint_is_star() {
        // on X = A, the adjoint of x -> a x is x -> a* x
        let a = desc("M2+C");
        let space = ModuleSpace::over_itself(a.clone()).unwrap();
        let mut rng = trial_rng(21, 0);
        let elem = a.random_element(&mut rng);
        let op = AdjointableOp::from_alg_coeffs(&space, &[vec![elem.clone()]], &tols()).unwrap();
        let star_op =
            AdjointableOp::from_alg_coeffs(&space, &[vec![elem.star()]], &tols()).unwrap();
        let diff = op.adjoint_matrix().sub(star_op.matrix()).max_abs();
        assert!(diff < 1e-9 * rel(op.matrix().max_abs()), "diff {diff}");
    }

    #[test]
    fn random_grid_operators_pass_and_random_matrices_fail() {
        let space = ModuleSpace::free(desc("M2"), 2).unwrap();
        let mut rng = trial_rng(22, 0);
        for _ in 0..10 {
            let op = AdjointableOp::random(&space, &mut rng, &tols()).unwrap();
            assert!(op.adjoint_identity_residual() <= tols().op);
        }
        // a generic complex matrix is not module-linear
        let d = space.complex_dim();
        let m = CMatrix::from_fn(d, d, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        match AdjointableOp::try_new(&space, &space, m, &tols()) {
            Err(CoreError::NotModuleLinear { residual }) => assert!(residual > 1e-3),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn adjoint_is_an_involution_and_reverses_products() {
        let space = ModuleSpace::free(desc("M2+C"), 2).unwrap();
        let mut rng = trial_rng(23, 0);
        for _ in 0..10 {
            let s = AdjointableOp::random(&space, &mut rng, &tols()).unwrap();
            let t = AdjointableOp::random(&space, &mut rng, &tols()).unwrap();
            let scale = rel(s.matrix().max_abs().max(t.matrix().max_abs()));
            // (t*)* = t
            let tss = t.adjoint_op().adjoint_op();
            assert!(tss.matrix().sub(t.matrix()).max_abs() <= tols().op * scale);
            // (s t)* = t* s*
            let st = s.compose(&t).unwrap();
            let lhs = st.adjoint_matrix();
            let rhs = t.adjoint_matrix().matmul(s.adjoint_matrix());
            assert!(lhs.sub(&rhs).max_abs() <= tols().op * rel(st.matrix().max_abs()));
        }
    }

    #[test]
    fn composition_satisfies_adjoint_identity() {
        let a = desc("M2");
        let x = ModuleSpace::free(a.clone(), 1).unwrap();
        let f = ModuleSpace::free(a.clone(), 2).unwrap();
        let g = ModuleSpace::free(a.clone(), 3).unwrap();
        let mut rng = trial_rng(24, 0);
        // t: X -> F and s: F -> G built from theta operators
        let t = {
            let xx = f.random_vector(&mut rng);
            let yy = x.random_vector(&mut rng);
            theta(&xx, &yy, &tols()).unwrap().op().clone()
        };
        let s = {
            let xx = g.random_vector(&mut rng);
            let yy = f.random_vector(&mut rng);
            theta(&xx, &yy, &tols()).unwrap().op().clone()
        };
        let st = s.compose(&t).unwrap();
        assert!(st.adjoint_identity_residual() <= tols().op);
        assert!(st.domain() == &x && st.codomain() == &g);
    }

    #[test]
    fn norm_bounds_and_probe_attainment() {
        let space = ModuleSpace::free(desc("M2"), 3).unwrap();
        let mut rng = trial_rng(25, 0);
        for _ in 0..5 {
            let t = AdjointableOp::random(&space, &mut rng, &tols()).unwrap();
            let n = t.norm().unwrap();
            // ||t x|| <= ||t|| ||x|| on random unit vectors
            for _ in 0..20 {
                let x = space.random_unit_vector(&mut rng);
                assert!(t.apply(&x).scalar_norm() <= n + 1e-8);
            }
            let gap = t.probe_norm_gap(&mut rng, 50).unwrap();
            assert!(gap <= 1e-3, "probe gap {gap}");
        }
    }

    #[test]
    fn cstar_identity_on_random_operators() {
        let space = ModuleSpace::free(desc("M2+C"), 2).unwrap();
        let mut rng = trial_rng(26, 0);
        for _ in 0..20 {
            let t = AdjointableOp::random(&space, &mut rng, &tols()).unwrap();
            assert!(t.cstar_identity_gap().unwrap() <= tols().opnorm);
        }
        // identity: both sides exactly 1
        let id = AdjointableOp::identity(&space);
        assert!(id.cstar_identity_gap().unwrap() < 1e-12);
    }

    #[test]
    fn operators_on_ideal_modules() {
        let a = desc("M2");
        let e11 = a.matrix_unit(0, 0, 0).unwrap();
        let space = ModuleSpace::ideal(a.clone(), e11, "e11").unwrap();
        let mut rng = trial_rng(27, 0);
        let t = AdjointableOp::random(&space, &mut rng, &tols()).unwrap();
        assert!(t.adjoint_identity_residual() <= tols().op);
        assert!(t.cstar_identity_gap().unwrap() <= tols().opnorm);
    }
}
