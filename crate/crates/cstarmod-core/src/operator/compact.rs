//! The span of theta operators ("compact" operators in the module sense),
//! its bi-ideal property, and the identification of K(A) with A.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgElement, AlgebraDescriptor};
use crate::error::Result;
use crate::linalg::{self, CMatrix, C64};
use crate::module::{ModuleSpace, RANK_EPS};
use crate::tolerances::{rel, Tolerances};

use super::{theta, AdjointableOp};

/// Orthonormal basis of the complex span of `{theta_{x,y}}` inside the
/// matrix space of operators from `domain` to `codomain`.
#[derive(Debug, Clone)]
pub struct OperatorIdealBasis {
    domain: ModuleSpace,
    codomain: ModuleSpace,
    /// Vectorized operator matrices, orthonormal.
    basis: Vec<Vec<C64>>,
}

/// Span of the theta operators over all basis pairs.
pub fn compact_ideal(codomain: &ModuleSpace, domain: &ModuleSpace) -> Result<OperatorIdealBasis> {
    let mut vectors = Vec::new();
    for x in codomain.basis() {
        for y in domain.basis() {
            // build the matrix of z -> x <y, z> directly
            let mut m = CMatrix::zeros(codomain.complex_dim(), domain.complex_dim());
            for (j, b) in domain.basis().iter().enumerate() {
                m.set_column(j, &x.act(&y.inner(b)).to_complex());
            }
            vectors.push(m.vectorize());
        }
    }
    let basis = linalg::orthonormal_span(&vectors, RANK_EPS);
    Ok(OperatorIdealBasis {
        domain: domain.clone(),
        codomain: codomain.clone(),
        basis,
    })
}

impl OperatorIdealBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn domain(&self) -> &ModuleSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &ModuleSpace {
        &self.codomain
    }

    /// Relative projection residual of an operator matrix against the span.
    pub fn membership_residual(&self, matrix: &CMatrix) -> f64 {
        let v = matrix.vectorize();
        let n = linalg::vec_norm(&v);
        linalg::projection_residual(&v, &self.basis) / rel(n)
    }

    /// A random element of the span.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> CMatrix {
        let rows = self.codomain.complex_dim();
        let cols = self.domain.complex_dim();
        let mut acc = vec![linalg::ZERO; rows * cols];
        for b in &self.basis {
            let k = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            linalg::vec_axpy(&mut acc, k, b);
        }
        CMatrix::from_vectorized(rows, cols, acc)
    }

    /// Bi-ideal check on one sample: both `t k` and `k t` stay in the span
    /// (for endomorphism spans, domain = codomain = the space of `t`).
    pub fn ideal_residual(&self, t: &AdjointableOp, k: &CMatrix) -> f64 {
        let tk = t.matrix().matmul(k);
        let kt = k.matmul(t.matrix());
        self.membership_residual(&tk).max(self.membership_residual(&kt))
    }
}

/// Dimension of the space of module-linear endomorphisms, computed from the
/// commutation constraints with the right action (the independent route
/// against which the theta-span dimension is compared).
pub fn module_linear_endo_dimension(space: &ModuleSpace) -> usize {
    let d = space.complex_dim();
    if d == 0 {
        return 0;
    }
    let dim_a = space.algebra().dim();
    // unknown: M (d x d), constraints M A_e - A_e M = 0 stacked over e
    let mut rows = Vec::with_capacity(dim_a * d * d);
    for e in 0..dim_a {
        let act = space.action_matrix(e);
        // row for each output entry (i, j): sum_k M[i][k] A[k][j] - A[i][k] M[k][j]
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![linalg::ZERO; d * d];
                for k in 0..d {
                    row[i * d + k] += act.get(k, j);
                    row[k * d + j] -= act.get(i, k);
                }
                rows.push(row);
            }
        }
    }
    let m = CMatrix::from_rows(rows);
    d * d - linalg::rank(&m, RANK_EPS)
}

/// Report for the identification of K(A) with A on `X = A`.
#[derive(Debug, Clone)]
pub struct KOfAReport {
    pub span_dim: usize,
    pub algebra_dim: usize,
    /// `phi(theta_{a,b}) = a b*` against the evaluation map, worst case.
    pub generator_formula_residual: f64,
    /// `phi(k*) = phi(k)*`, worst case.
    pub star_residual: f64,
    /// `phi(k1 k2) = phi(k1) phi(k2)`, worst case.
    pub mult_residual: f64,
    /// Rank of the evaluation map equals the span dimension.
    pub bijective: bool,
    /// Worst `||t - theta_{t(1), 1}||` over random adjointable `t`.
    pub unital_collapse_residual: f64,
}

impl KOfAReport {
    pub fn holds(&self, tols: &Tolerances) -> bool {
        self.span_dim == self.algebra_dim
            && self.bijective
            && self.generator_formula_residual <= tols.op
            && self.star_residual <= tols.op
            && self.mult_residual <= tols.op
            && self.unital_collapse_residual <= tols.op
    }
}

/// Verify `K(A) = L(A) ~ A` via `theta_{a,b} <-> a b*` on `X = A`.
///
/// The isomorphism is realized as evaluation at the unit, `k -> k(1)`; on
/// generators this is exactly `theta_{a,b} -> a b*`.
pub fn k_of_a_isomorphism<R: Rng>(
    algebra: &AlgebraDescriptor,
    rng: &mut R,
    trials: usize,
    tols: &Tolerances,
) -> Result<KOfAReport> {
    let space = ModuleSpace::over_itself(algebra.clone())?;
    let span = compact_ideal(&space, &space)?;
    let unit = space.vector(vec![algebra.unit()], tols)?;

    let phi = |matrix: &CMatrix| -> AlgElement {
        let image = space.from_complex(&matrix.apply(&unit.to_complex()));
        image.coords()[0].clone()
    };

    let mut generator_formula_residual = 0.0f64;
    let mut star_residual = 0.0f64;
    let mut mult_residual = 0.0f64;
    let mut unital_collapse_residual = 0.0f64;

    for _ in 0..trials {
        let a = algebra.random_element(rng);
        let b = algebra.random_element(rng);
        let va = space.vector(vec![a.clone()], tols)?;
        let vb = space.vector(vec![b.clone()], tols)?;
        let th = theta(&va, &vb, tols)?;
        let expect = a.mul(&b.star());
        let got = phi(th.op().matrix());
        let scale = rel(expect.max_abs_entry());
        generator_formula_residual =
            generator_formula_residual.max(got.sub(&expect).max_abs_entry() / scale);

        // star and multiplicativity on random span elements realized as ops
        let k1 = AdjointableOp::try_new(&space, &space, span.random_element(rng), tols)?;
        let k2 = AdjointableOp::try_new(&space, &space, span.random_element(rng), tols)?;
        let s = rel(phi(k1.matrix()).max_abs_entry());
        star_residual = star_residual.max(
            phi(k1.adjoint_matrix())
                .sub(&phi(k1.matrix()).star())
                .max_abs_entry()
                / s,
        );
        let prod = k1.compose(&k2)?;
        let lhs = phi(prod.matrix());
        let rhs = phi(k1.matrix()).mul(&phi(k2.matrix()));
        mult_residual = mult_residual.max(lhs.sub(&rhs).max_abs_entry() / rel(lhs.max_abs_entry()));

        // every adjointable t collapses to theta_{t(1), 1}
        let t = AdjointableOp::random(&space, rng, tols)?;
        let t1 = t.apply(&unit);
        let collapsed = theta(&t1, &unit, tols)?;
        let diff = t.sub(collapsed.op());
        unital_collapse_residual = unital_collapse_residual
            .max(diff.norm()? / rel(t.norm()?));
    }

    // bijectivity: the evaluation map restricted to the span has full rank
    let eval_matrix = CMatrix::from_rows(
        span.basis
            .iter()
            .map(|v| {
                let m = CMatrix::from_vectorized(
                    space.complex_dim(),
                    space.complex_dim(),
                    v.clone(),
                );
                phi(&m).coords()
            })
            .collect(),
    );
    let bijective = linalg::rank(&eval_matrix, RANK_EPS) == span.dim();

    Ok(KOfAReport {
        span_dim: span.dim(),
        algebra_dim: algebra.dim(),
        generator_formula_residual,
        star_residual,
        mult_residual,
        bijective,
        unital_collapse_residual,
    })
}
