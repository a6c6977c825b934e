//! Rank-one theta operators `z -> x <y, z>` and their algebraic identities.

use crate::error::Result;
use crate::linalg::CMatrix;
use crate::module::ModuleVector;
use crate::tolerances::Tolerances;

use super::AdjointableOp;

/// The operator `z -> x <y, z>` from `y`'s space to `x`'s space, realized as
/// an adjointable operator (its adjoint is the theta operator with the
/// vectors swapped).
#[derive(Debug, Clone)]
pub struct ThetaOp {
    left: ModuleVector,
    right: ModuleVector,
    op: AdjointableOp,
}

/// Build `theta_{x,y}`. The domain is `y`'s space, the codomain `x`'s.
pub fn theta(x: &ModuleVector, y: &ModuleVector, tols: &Tolerances) -> Result<ThetaOp> {
    let domain = y.space().clone();
    let codomain = x.space().clone();
    let mut matrix = CMatrix::zeros(codomain.complex_dim(), domain.complex_dim());
    for (j, b) in domain.basis().iter().enumerate() {
        let image = x.act(&y.inner(b));
        matrix.set_column(j, &image.to_complex());
    }
    let op = AdjointableOp::try_new(&domain, &codomain, matrix, tols)?;
    Ok(ThetaOp {
        left: x.clone(),
        right: y.clone(),
        op,
    })
}

impl ThetaOp {
    pub fn left(&self) -> &ModuleVector {
        &self.left
    }

    pub fn right(&self) -> &ModuleVector {
        &self.right
    }

    pub fn op(&self) -> &AdjointableOp {
        &self.op
    }

    pub fn apply(&self, z: &ModuleVector) -> ModuleVector {
        self.op.apply(z)
    }

    /// Worst deviation between the realized matrix action and the defining
    /// formula `z -> x <y, z>` over the domain basis.
    pub fn realization_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for b in self.op.domain().basis() {
            let direct = self.left.act(&self.right.inner(&b));
            let via_matrix = self.op.apply(&b);
            worst = worst.max(direct.sub(&via_matrix).max_abs_entry());
        }
        worst
    }
}

/// Residuals of the three theta identities.
#[derive(Debug, Clone)]
pub struct ThetaIdentities {
    /// `theta_{x,y}* = theta_{y,x}`.
    pub adjoint_residual: f64,
    /// `theta_{x,y} theta_{u,v} = theta_{x<y,u>, v}`.
    pub composition_residual: f64,
    /// `t theta_{x,y} = theta_{t x, y}`.
    pub absorption_residual: f64,
}

impl ThetaIdentities {
    pub fn worst(&self) -> f64 {
        self.adjoint_residual
            .max(self.composition_residual)
            .max(self.absorption_residual)
    }
}

/// Check the theta identities for `x` in `X`, `y, u` in `F`, `v` in `F2`,
/// and `t : X -> G`.
pub fn theta_identities_check(
    x: &ModuleVector,
    y: &ModuleVector,
    u: &ModuleVector,
    v: &ModuleVector,
    t: &AdjointableOp,
    tols: &Tolerances,
) -> Result<ThetaIdentities> {
    let txy = theta(x, y, tols)?;
    let tyx = theta(y, x, tols)?;
    let scale = crate::tolerances::rel(txy.op.matrix().max_abs());
    let adjoint_residual = txy
        .op
        .adjoint_matrix()
        .sub(tyx.op.matrix())
        .max_abs()
        / scale;

    let tuv = theta(u, v, tols)?;
    let composed = txy.op.compose(tuv.op())?;
    let collapsed = theta(&x.act(&y.inner(u)), v, tols)?;
    let comp_scale = crate::tolerances::rel(composed.matrix().max_abs());
    let composition_residual = composed
        .matrix()
        .sub(collapsed.op.matrix())
        .max_abs()
        / comp_scale;

    let absorbed = t.compose(txy.op())?;
    let direct = theta(&t.apply(x), y, tols)?;
    let abs_scale = crate::tolerances::rel(absorbed.matrix().max_abs());
    let absorption_residual = absorbed
        .matrix()
        .sub(direct.op.matrix())
        .max_abs()
        / abs_scale;

    Ok(ThetaIdentities {
        adjoint_residual,
        composition_residual,
        absorption_residual,
    })
}
