//! The linking algebra of a module: 2x2 corner elements
//! `[[b, x], [y*, a]]` acting concretely on the direct sum `X (+) A`,
//! where module data (vectors, inner products, the right action) becomes
//! algebra data (corner entries, products).

use rand::Rng;

use crate::algebra::{AlgElement, AlgebraDescriptor};
use crate::error::{CoreError, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::module::{ModuleSpace, ModuleVector, RANK_EPS};
use crate::operator::AdjointableOp;
use crate::tolerances::{rel, Tolerances};

/// The ambient structure: a module `X`, the algebra as a module over
/// itself, and their direct sum carrying the concrete action.
#[derive(Debug, Clone)]
pub struct LinkingAlgebra {
    space: ModuleSpace,
    scalar_module: ModuleSpace,
    sum_space: ModuleSpace,
}

/// One corner element `[[b, x], [y*, a]]` together with its realization as
/// an adjointable operator on `X (+) A`:
/// `(xi, c) -> (b xi + x c, <y, xi> + a c)`.
#[derive(Debug, Clone)]
pub struct LinkingElement {
    pub operator_corner: AdjointableOp,
    pub upper: ModuleVector,
    pub lower: ModuleVector,
    pub scalar: AlgElement,
    realized: AdjointableOp,
}

impl LinkingAlgebra {
    pub fn new(space: &ModuleSpace) -> Result<Self> {
        let scalar_module = ModuleSpace::over_itself(space.algebra().clone())?;
        let sum_space = ModuleSpace::direct_sum(vec![space.clone(), scalar_module.clone()])?;
        Ok(LinkingAlgebra {
            space: space.clone(),
            scalar_module,
            sum_space,
        })
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub fn sum_space(&self) -> &ModuleSpace {
        &self.sum_space
    }

    fn split(&self, v: &ModuleVector) -> (ModuleVector, AlgElement) {
        let m = self.space.rank();
        let coords = v.coords();
        let xi = self
            .space
            .from_complex(&{
                // re-express the X part through its own basis
                let part: Vec<AlgElement> = coords[..m].to_vec();
                let tmp = ModuleVector::raw(&self.space, part);
                tmp.to_complex()
            });
        (xi, coords[m].clone())
    }

    fn join(&self, xi: &ModuleVector, c: &AlgElement) -> ModuleVector {
        let mut coords: Vec<AlgElement> = xi.coords().to_vec();
        coords.push(c.clone());
        ModuleVector::raw(&self.sum_space, coords)
    }

    /// Assemble a corner element and realize it on the sum space.
    pub fn element(
        &self,
        b: &AdjointableOp,
        x: &ModuleVector,
        y: &ModuleVector,
        a: &AlgElement,
        tols: &Tolerances,
    ) -> Result<LinkingElement> {
        if b.domain() != &self.space || b.codomain() != &self.space {
            return Err(CoreError::ShapeMismatch(
                "operator corner must act on the module".into(),
            ));
        }
        if x.space() != &self.space || y.space() != &self.space {
            return Err(CoreError::ShapeMismatch(
                "vector corners must live in the module".into(),
            ));
        }
        if a.descriptor() != self.space.algebra() {
            return Err(CoreError::ShapeMismatch(
                "scalar corner must live in the algebra".into(),
            ));
        }
        let d_sum = self.sum_space.complex_dim();
        let mut matrix = CMatrix::zeros(d_sum, d_sum);
        for (j, s) in self.sum_space.basis().iter().enumerate() {
            let (xi, c) = self.split(s);
            let top = b.apply(&xi).add(&x.act(&c));
            let bottom = y.inner(&xi).add(&a.mul(&c));
            matrix.set_column(j, &self.join(&top, &bottom).to_complex());
        }
        let realized = AdjointableOp::try_new(&self.sum_space, &self.sum_space, matrix, tols)?;
        Ok(LinkingElement {
            operator_corner: b.clone(),
            upper: x.clone(),
            lower: y.clone(),
            scalar: a.clone(),
            realized,
        })
    }

    pub fn embed_operator(&self, b: &AdjointableOp, tols: &Tolerances) -> Result<LinkingElement> {
        self.element(
            b,
            &self.space.zero_vector(),
            &self.space.zero_vector(),
            &self.space.algebra().zero(),
            tols,
        )
    }

    pub fn embed_module(&self, x: &ModuleVector, tols: &Tolerances) -> Result<LinkingElement> {
        self.element(
            &AdjointableOp::zero(&self.space, &self.space),
            x,
            &self.space.zero_vector(),
            &self.space.algebra().zero(),
            tols,
        )
    }

    pub fn embed_algebra(&self, a: &AlgElement, tols: &Tolerances) -> Result<LinkingElement> {
        self.element(
            &AdjointableOp::zero(&self.space, &self.space),
            &self.space.zero_vector(),
            &self.space.zero_vector(),
            a,
            tols,
        )
    }

    /// Recover the four corners from an operator matrix on the sum space.
    /// The block rows/columns follow the embedded bases: `X` first, then
    /// the algebra.
    pub fn extract(&self, matrix: &CMatrix, tols: &Tolerances) -> Result<LinkingElement> {
        let dx = self.space.complex_dim();
        let da = self.space.algebra().dim();
        assert_eq!(matrix.rows(), dx + da);

        let b_matrix = CMatrix::from_fn(dx, dx, |i, j| matrix.get(i, j));
        let b = AdjointableOp::try_new(&self.space, &self.space, b_matrix, tols)?;

        // upper corner: column for the algebra basis element e_j holds
        // coords of x e_j; summing the diagonal-unit columns gives x . 1 = x
        let mut x = self.space.zero_vector();
        let mut a = self.space.algebra().zero();
        let mut col_idx = 0;
        for (k, &n) in self.space.algebra().blocks().iter().enumerate() {
            let _ = k;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        let xcol: Vec<C64> = (0..dx).map(|r| matrix.get(r, dx + col_idx)).collect();
                        x = x.add(&self.space.from_complex(&xcol));
                        let acol: Vec<C64> =
                            (0..da).map(|r| matrix.get(dx + r, dx + col_idx)).collect();
                        a = a.add(&AlgElement::from_coords(self.space.algebra(), &acol)?);
                    }
                    col_idx += 1;
                }
            }
        }

        // lower corner: row block is the matrix of xi -> <y, xi>; solve the
        // Riesz problem for y
        let values: Vec<AlgElement> = (0..dx)
            .map(|j| {
                let col: Vec<C64> = (0..da).map(|r| matrix.get(dx + r, j)).collect();
                AlgElement::from_coords(self.space.algebra(), &col)
            })
            .collect::<Result<_>>()?;
        let (y, res) = self.space.riesz_solve(&values)?;
        if res > 1e-5 {
            return Err(CoreError::Internal(format!(
                "lower corner is not of inner-product form (residual {res:.3e})"
            )));
        }
        self.element(&b, &x, &y, &a, tols)
    }

    /// Multiply two corner elements through their realizations and re-read
    /// the corners; returns the product and the corner-structure residual.
    pub fn mul(
        &self,
        e1: &LinkingElement,
        e2: &LinkingElement,
        tols: &Tolerances,
    ) -> Result<(LinkingElement, f64)> {
        let product = e1.realized.matrix().matmul(e2.realized.matrix());
        let element = self.extract(&product, tols)?;
        let residual =
            element.realized.matrix().sub(&product).max_abs() / rel(product.max_abs());
        Ok((element, residual))
    }

    /// Involution `[[b, x], [y*, a]]* = [[b*, y], [x*, a*]]`; returns the
    /// star element and its deviation from the realized adjoint.
    pub fn star(&self, e: &LinkingElement, tols: &Tolerances) -> Result<(LinkingElement, f64)> {
        let starred = self.element(
            &e.operator_corner.adjoint_op(),
            &e.lower,
            &e.upper,
            &e.scalar.star(),
            tols,
        )?;
        let residual = starred
            .realized
            .matrix()
            .sub(e.realized.adjoint_matrix())
            .max_abs()
            / rel(e.realized.matrix().max_abs());
        Ok((starred, residual))
    }

    /// Complex dimension of the linking algebra: rank of the span of the
    /// realized corner-basis elements.
    pub fn dimension(&self, tols: &Tolerances) -> Result<usize> {
        let mut vectors = Vec::new();
        // operator corner: a basis of the module-linear endomorphisms via
        // rank-one operators
        for x in self.space.basis() {
            for y in self.space.basis() {
                let th = crate::operator::theta(&x, &y, tols)?;
                vectors.push(self.embed_operator(th.op(), tols)?.realized.matrix().vectorize());
            }
        }
        for x in self.space.basis() {
            vectors.push(self.embed_module(&x, tols)?.realized.matrix().vectorize());
            let lower = self.element(
                &AdjointableOp::zero(&self.space, &self.space),
                &self.space.zero_vector(),
                &x,
                &self.space.algebra().zero(),
                tols,
            )?;
            vectors.push(lower.realized.matrix().vectorize());
        }
        for e in self.space.algebra().basis() {
            vectors.push(self.embed_algebra(&e, tols)?.realized.matrix().vectorize());
        }
        Ok(linalg::orthonormal_span(&vectors, RANK_EPS).len())
    }

    /// Random corner element.
    pub fn random_element<R: Rng>(&self, rng: &mut R, tols: &Tolerances) -> Result<LinkingElement> {
        let b = AdjointableOp::random(&self.space, rng, tols)?;
        let x = self.space.random_vector(rng);
        let y = self.space.random_vector(rng);
        let a = self.space.algebra().random_element(rng);
        self.element(&b, &x, &y, &a, tols)
    }
}

impl LinkingElement {
    pub fn realized(&self) -> &AdjointableOp {
        &self.realized
    }

    pub fn matrix(&self) -> &CMatrix {
        self.realized.matrix()
    }

    /// Operator norm on the sum space.
    pub fn norm(&self) -> Result<f64> {
        self.realized.norm()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "operator": self.operator_corner.to_json(),
            "upper": self.upper.to_json(),
            "lower": self.lower.to_json(),
            "scalar": self.scalar.to_json(),
        })
    }
}

/// Residuals of the closure and representation checks.
#[derive(Debug, Clone)]
pub struct LinkingReport {
    /// Products of corner elements stay corner-structured.
    pub product_corner_residual: f64,
    /// The involution closes in the corner structure.
    pub star_residual: f64,
    /// `phi(<x,y>) = Phi(x)* Phi(y)`.
    pub inner_product_residual: f64,
    /// `Phi(x a) = Phi(x) phi(a)`.
    pub action_residual: f64,
    /// `| ||Phi(x)|| - ||x|| |` relative.
    pub isometry_gap: f64,
    /// Corner extraction inverts assembly (faithfulness of the action).
    pub roundtrip_residual: f64,
}

impl LinkingReport {
    pub fn holds(&self, tols: &Tolerances) -> bool {
        self.product_corner_residual <= tols.op
            && self.star_residual <= tols.op
            && self.inner_product_residual <= tols.op
            && self.action_residual <= tols.op
            && self.isometry_gap <= tols.iso
            && self.roundtrip_residual <= tols.op
    }
}

/// Run the closure and representation checks on random data.
pub fn linking_checks<R: Rng>(
    link: &LinkingAlgebra,
    rng: &mut R,
    trials: usize,
    tols: &Tolerances,
) -> Result<LinkingReport> {
    let mut report = LinkingReport {
        product_corner_residual: 0.0,
        star_residual: 0.0,
        inner_product_residual: 0.0,
        action_residual: 0.0,
        isometry_gap: 0.0,
        roundtrip_residual: 0.0,
    };
    for _ in 0..trials {
        let e1 = link.random_element(rng, tols)?;
        let e2 = link.random_element(rng, tols)?;
        let (_, corner_res) = link.mul(&e1, &e2, tols)?;
        report.product_corner_residual = report.product_corner_residual.max(corner_res);
        let (starred, star_res) = link.star(&e1, tols)?;
        report.star_residual = report.star_residual.max(star_res);
        // star of star returns the element
        let (ss, _) = link.star(&starred, tols)?;
        let invol = ss.matrix().sub(e1.matrix()).max_abs() / rel(e1.matrix().max_abs());
        report.star_residual = report.star_residual.max(invol);

        // representation identities through the concrete action
        let x = link.space().random_vector(rng);
        let y = link.space().random_vector(rng);
        let a = link.space().algebra().random_element(rng);
        let phi_x = link.embed_module(&x, tols)?;
        let phi_y = link.embed_module(&y, tols)?;
        let phi_a = link.embed_algebra(&a, tols)?;
        let phi_xy = link.embed_algebra(&x.inner(&y), tols)?;
        let lhs = phi_x.matrix().adjoint().matmul(phi_y.matrix());
        let scale = rel(lhs.max_abs());
        report.inner_product_residual = report
            .inner_product_residual
            .max(lhs.sub(phi_xy.matrix()).max_abs() / scale);

        let phi_xa = link.embed_module(&x.act(&a), tols)?;
        let rhs = phi_x.matrix().matmul(phi_a.matrix());
        report.action_residual = report
            .action_residual
            .max(rhs.sub(phi_xa.matrix()).max_abs() / rel(rhs.max_abs()));

        let nx = x.scalar_norm();
        let nphi = phi_x.norm()?;
        report.isometry_gap = report.isometry_gap.max((nx - nphi).abs() / rel(nx));

        // faithfulness via the roundtrip
        let back = link.extract(e1.matrix(), tols)?;
        let rt = back.matrix().sub(e1.matrix()).max_abs() / rel(e1.matrix().max_abs());
        report.roundtrip_residual = report.roundtrip_residual.max(rt);
    }
    Ok(report)
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
    fn embedded_unit_is_idempotent() {
        let space = ModuleSpace::free(desc("M2"), 1).unwrap();
        let link = LinkingAlgebra::new(&space).unwrap();
        let e = link
            .embed_algebra(&space.algebra().unit(), &tols())
            .unwrap();
        let (sq, res) = link.mul(&e, &e, &tols()).unwrap();
        assert!(res < 1e-10);
        assert!(sq.matrix().sub(e.matrix()).max_abs() < 1e-10);
    }

    #[test]
    fn inner_product_becomes_the_product() {
        // embed_module(x)* embed_module(y) = embed_algebra(<x, y>)
        let space = ModuleSpace::free(desc("M2+C"), 2).unwrap();
        let link = LinkingAlgebra::new(&space).unwrap();
        let mut rng = trial_rng(61, 0);
        for _ in 0..5 {
            let x = space.random_vector(&mut rng);
            let y = space.random_vector(&mut rng);
            let ex = link.embed_module(&x, &tols()).unwrap();
            let ey = link.embed_module(&y, &tols()).unwrap();
            let lhs = ex.matrix().adjoint().matmul(ey.matrix());
            let rhs = link.embed_algebra(&x.inner(&y), &tols()).unwrap();
            assert!(
                lhs.sub(rhs.matrix()).max_abs() <= 1e-9 * rel(lhs.max_abs()),
                "corner identity failed"
            );
        }
    }

    #[test]
    fn module_action_becomes_internal_multiplication() {
        let space = ModuleSpace::free(desc("M2"), 2).unwrap();
        let link = LinkingAlgebra::new(&space).unwrap();
        let mut rng = trial_rng(62, 0);
        let x = space.random_vector(&mut rng);
        let a = space.algebra().random_element(&mut rng);
        let ex = link.embed_module(&x, &tols()).unwrap();
        let ea = link.embed_algebra(&a, &tols()).unwrap();
        let (prod, res) = link.mul(&ex, &ea, &tols()).unwrap();
        assert!(res < 1e-9);
        let expect = link.embed_module(&x.act(&a), &tols()).unwrap();
        assert!(prod.matrix().sub(expect.matrix()).max_abs() <= 1e-9 * rel(expect.matrix().max_abs()));
    }

    #[test]
    fn rank_one_operator_comes_from_outer_product() {
        // embed_module(x) embed_module(y)* = embed_operator(theta_{x,y})
        let space = ModuleSpace::free(desc("M2"), 1).unwrap();
        let link = LinkingAlgebra::new(&space).unwrap();
        let mut rng = trial_rng(63, 0);
        let x = space.random_vector(&mut rng);
        let y = space.random_vector(&mut rng);
        let ex = link.embed_module(&x, &tols()).unwrap();
        let ey = link.embed_module(&y, &tols()).unwrap();
        let lhs = ex.matrix().matmul(&ey.matrix().adjoint());
        let th = theta(&x, &y, &tols()).unwrap();
        let rhs = link.embed_operator(th.op(), &tols()).unwrap();
        assert!(lhs.sub(rhs.matrix()).max_abs() <= 1e-9 * rel(lhs.max_abs()));
    }

    #[test]
    fn star_closes_in_corner_form() {
        let space = ModuleSpace::free(desc("M2"), 2).unwrap();
        let link = LinkingAlgebra::new(&space).unwrap();
        let mut rng = trial_rng(64, 0);
        let e = link.random_element(&mut rng, &tols()).unwrap();
        let (starred, res) = link.star(&e, &tols()).unwrap();
        assert!(res <= tols().op, "star residual {res}");
        let (back, _) = link.star(&starred, &tols()).unwrap();
        assert!(back.matrix().sub(e.matrix()).max_abs() <= 1e-9 * rel(e.matrix().max_abs()));
    }

    #[test]
    fn linking_dimension_is_four_n_squared() {
        for n in 1..=3usize {
            let a: AlgebraDescriptor = format!("M{n}").parse().unwrap();
            let space = ModuleSpace::over_itself(a).unwrap();
            let link = LinkingAlgebra::new(&space).unwrap();
            let dim = link.dimension(&tols()).unwrap();
            assert_eq!(dim, 4 * n * n, "n = {n}");
        }
    }

    #[test]
    fn full_checks_hold_on_random_elements() {
        let space = ModuleSpace::free(desc("M2"), 2).unwrap();
        let link = LinkingAlgebra::new(&space).unwrap();
        let mut rng = trial_rng(65, 0);
        let report = linking_checks(&link, &mut rng, 10, &tols()).unwrap();
        assert!(report.holds(&tols()), "{report:?}");
    }
}
