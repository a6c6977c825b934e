//! Inner-product theorem checks at the module level: the operator-valued
//! Cauchy-Schwarz inequality, the norm dualities, positivity of tensor
//! Gram elements, density of `X A`, and fullness.

use rand::Rng;

use crate::algebra::{AlgElement, PositivityVerdict};
use crate::error::{CoreError, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::tolerances::Tolerances;

use super::{ModuleKind, ModuleSpace, ModuleVector, RANK_EPS};

/// Residual data for `<y,x><x,y> <= ||<x,x>|| <y,y>`.
#[derive(Debug, Clone)]
pub struct CauchySchwarz {
    /// `||<x,x>|| <y,y> - <y,x><x,y>`, which must be positive.
    pub residual: AlgElement,
    pub verdict: PositivityVerdict,
    pub min_eigenvalue: f64,
}

pub fn cauchy_schwarz_residual(
    x: &ModuleVector,
    y: &ModuleVector,
    tols: &Tolerances,
) -> CauchySchwarz {
    let xx = x.inner(x);
    let yy = y.inner(y);
    let xy = x.inner(y);
    let yx = y.inner(x);
    let lhs = yx.mul(&xy);
    let r = yy.scal(C64::new(xx.norm(), 0.0)).sub(&lhs);
    let verdict = r.is_positive(tols.herm, tols.pos);
    let min_eig = match r.hermitian_eigen(tols.herm.max(1e-6)) {
        Ok(e) => e.spectrum.min(),
        Err(_) => f64::NAN,
    };
    CauchySchwarz {
        residual: r,
        verdict,
        min_eigenvalue: min_eig,
    }
}

/// Scalar corollary: `||<x,y>|| <= ||x|| ||y||`; returns the violation
/// (zero when the inequality holds).
pub fn scalar_cauchy_schwarz_violation(x: &ModuleVector, y: &ModuleVector) -> f64 {
    (x.inner(y).norm() - x.scalar_norm() * y.scalar_norm()).max(0.0)
}

/// Report for `||x|| = sup { ||<x,y>|| : ||y|| <= 1 }`.
#[derive(Debug, Clone)]
pub struct NormDuality {
    /// Worst `||<x,y>|| - ||x||` over random unit probes (positive part).
    pub max_violation: f64,
    /// `| ||<x, x/||x||>|| - ||x|| |`: the supremum is attained at `x/||x||`.
    pub attainment_gap: f64,
}

pub fn norm_duality_check<R: Rng>(
    x: &ModuleVector,
    rng: &mut R,
    probes: usize,
) -> Result<NormDuality> {
    let nx = x.scalar_norm();
    if nx <= 1e-12 {
        return Err(CoreError::Domain("norm duality needs a nonzero vector".into()));
    }
    let space = x.space();
    let mut max_violation = 0.0f64;
    for _ in 0..probes {
        let y = space.random_unit_vector(rng);
        max_violation = max_violation.max(x.inner(&y).norm() - nx);
    }
    let normalized = x.scal(C64::new(1.0 / nx, 0.0));
    let attained = x.inner(&normalized).norm();
    Ok(NormDuality {
        max_violation,
        attainment_gap: (attained - nx).abs(),
    })
}

/// Violation of `||x a|| <= ||x|| ||a||` (zero when it holds).
pub fn right_action_norm_violation(x: &ModuleVector, a: &AlgElement) -> f64 {
    (x.act(a).scalar_norm() - x.scalar_norm() * a.norm()).max(0.0)
}

/// A formal sum of simple tensors in `H (x) A`, given by the coefficient
/// vectors of the `H`-side factors in an orthonormal basis and the
/// algebra-side factors.
#[derive(Debug, Clone)]
pub struct TensorGram {
    /// The assembled module element.
    pub element: ModuleVector,
    /// The Gram element `<u, u>`.
    pub gram: AlgElement,
    pub verdict: PositivityVerdict,
}

/// Assemble `u = sum_i xi_i (x) a_i` on a tensor module and certify
/// `<u, u> >= 0`; when the Gram element vanishes the element itself is zero.
pub fn gram_positivity(
    space: &ModuleSpace,
    terms: &[(Vec<C64>, AlgElement)],
    tols: &Tolerances,
) -> Result<TensorGram> {
    let dim_h = match space.kind() {
        ModuleKind::Tensor { dim_h } => *dim_h,
        _ => {
            return Err(CoreError::Domain(
                "gram_positivity needs a tensor module".into(),
            ))
        }
    };
    let mut coords = vec![space.algebra().zero(); dim_h];
    for (xi, a) in terms {
        if xi.len() != dim_h {
            return Err(CoreError::ShapeMismatch(format!(
                "H-side coefficient vector needs length {dim_h}"
            )));
        }
        for (k, lam) in xi.iter().enumerate() {
            coords[k] = coords[k].add(&a.scal(*lam));
        }
    }
    let element = space.vector(coords, tols)?;
    let gram = element.inner(&element);
    let verdict = gram.is_positive(tols.herm, tols.pos);
    Ok(TensorGram {
        element,
        gram,
        verdict,
    })
}

/// Density of `X A` in `X` (equality of spans in finite dimension): the
/// complex span of `{b e}` over the module basis and the algebra basis has
/// full dimension.
pub fn xa_spans_space(space: &ModuleSpace) -> bool {
    let mut vectors = Vec::new();
    for b in space.basis() {
        for e in space.algebra().basis() {
            vectors.push(b.act(&e).to_complex());
        }
    }
    linalg::orthonormal_span(&vectors, RANK_EPS).len() == space.complex_dim()
}

/// Fullness: the complex span of `{<b_i, b_j>}` over basis pairs equals the
/// algebra (density collapses to equality in finite dimension).
pub fn is_full(space: &ModuleSpace) -> bool {
    let basis = space.basis();
    if basis.is_empty() {
        return space.algebra().dim() == 0;
    }
    let rows: Vec<Vec<C64>> = basis
        .iter()
        .flat_map(|bi| basis.iter().map(move |bj| bi.inner(bj).coords()))
        .collect();
    let m = CMatrix::from_rows(rows);
    linalg::rank(&m, RANK_EPS) == space.algebra().dim()
}
