//! Hilbert modules over the finite-dimensional backend: free modules,
//! principal right-ideal modules, finite direct sums, and the module
//! obtained from a finite-dimensional Hilbert space tensored with the
//! algebra.
//!
//! Every space carries a complex basis that is orthonormal for the tracial
//! pairing `tr<x, y>`; all operator-level computations happen in the
//! coordinates of that basis.

pub mod checks;
pub mod submodule;

pub use submodule::Submodule;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgElement, AlgebraDescriptor};
use crate::error::{CoreError, Result};
use crate::linalg::{self, CMatrix, LuFactors, C64};
use crate::tolerances::{rel, Tolerances};

/// Relative threshold for rank decisions (basis drops, kernel pivots).
pub const RANK_EPS: f64 = 1e-9;

#[derive(Debug, Clone)]
pub enum ModuleKind {
    /// `A^m` with the standard coordinatewise inner product.
    Free { rank: usize },
    /// Principal right ideal `gA` inside the algebra, `<a, b> = a* b`.
    Ideal { generator: AlgElement, token: String },
    /// Finite direct sum of modules over the same algebra.
    DirectSum { parts: Vec<ModuleSpace> },
    /// `H (x) A` for a `dim_h`-dimensional Hilbert space `H`, realized on an
    /// orthonormal basis of `H`; module-isomorphic to free of rank `dim_h`.
    Tensor { dim_h: usize },
}

struct SpaceData {
    algebra: AlgebraDescriptor,
    kind: ModuleKind,
    /// Number of algebra-element coordinate slots of a vector.
    rank: usize,
    /// Tracially orthonormal complex basis, as coordinate lists.
    basis: Vec<Vec<AlgElement>>,
    /// Flattened basis vectors (matrix-unit coordinates per slot).
    flat_basis: Vec<Vec<C64>>,
    /// Right-action matrix per algebra basis element, in the complex basis.
    action: Vec<CMatrix>,
    /// Tracial Gram matrix of the basis, LU-factored for Riesz solves.
    gram_lu: LuFactors,
    spec_string: String,
}

/// A Hilbert module over a finite-dimensional C*-algebra. Cheap to clone.
#[derive(Clone)]
pub struct ModuleSpace {
    data: Arc<SpaceData>,
}

impl fmt::Debug for ModuleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleSpace({})", self.data.spec_string)
    }
}

impl fmt::Display for ModuleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.data.spec_string)
    }
}

impl PartialEq for ModuleSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.spec_string == other.data.spec_string
                && self.data.algebra == other.data.algebra)
    }
}

impl ModuleSpace {
    pub fn free(algebra: AlgebraDescriptor, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(CoreError::Parse("free module rank must be positive".into()));
        }
        let spec = format!("free({algebra}, rank={rank})");
        Self::build(
            algebra,
            ModuleKind::Free { rank },
            rank,
            spec,
        )
    }

    pub fn tensor(algebra: AlgebraDescriptor, dim_h: usize) -> Result<Self> {
        if dim_h == 0 {
            return Err(CoreError::Parse("tensor factor dimension must be positive".into()));
        }
        let spec = format!("tensor(dim={dim_h}, {algebra})");
        Self::build(
            algebra,
            ModuleKind::Tensor { dim_h },
            dim_h,
            spec,
        )
    }

    /// The algebra as a module over itself: free of rank 1.
    pub fn over_itself(algebra: AlgebraDescriptor) -> Result<Self> {
        Self::free(algebra, 1)
    }

    pub fn ideal(algebra: AlgebraDescriptor, generator: AlgElement, token: &str) -> Result<Self> {
        if generator.descriptor() != &algebra {
            return Err(CoreError::ShapeMismatch(
                "ideal generator lives in a different algebra".into(),
            ));
        }
        let spec = format!("ideal({algebra}, gen={token})");
        Self::build(
            algebra,
            ModuleKind::Ideal {
                generator,
                token: token.to_string(),
            },
            1,
            spec,
        )
    }

    pub fn direct_sum(parts: Vec<ModuleSpace>) -> Result<Self> {
        if parts.is_empty() {
            return Err(CoreError::Parse("direct sum needs at least one part".into()));
        }
        let algebra = parts[0].algebra().clone();
        if parts.iter().any(|p| p.algebra() != &algebra) {
            return Err(CoreError::ShapeMismatch(
                "direct sum parts must share the algebra".into(),
            ));
        }
        let rank = parts.iter().map(|p| p.rank()).sum();
        let spec = format!(
            "dsum({})",
            parts
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
        Self::build(algebra, ModuleKind::DirectSum { parts }, rank, spec)
    }

    fn build(
        algebra: AlgebraDescriptor,
        kind: ModuleKind,
        rank: usize,
        spec_string: String,
    ) -> Result<Self> {
        let alg_basis = algebra.basis();
        let dim_a = algebra.dim();
        let zero_coords = || vec![algebra.zero(); rank];

        // raw spanning candidates as coordinate lists
        let candidates: Vec<Vec<AlgElement>> = match &kind {
            ModuleKind::Free { .. } | ModuleKind::Tensor { .. } => {
                let mut out = Vec::with_capacity(rank * dim_a);
                for slot in 0..rank {
                    for e in &alg_basis {
                        let mut coords = zero_coords();
                        coords[slot] = e.clone();
                        out.push(coords);
                    }
                }
                out
            }
            ModuleKind::Ideal { generator, .. } => alg_basis
                .iter()
                .map(|e| vec![generator.mul(e)])
                .collect(),
            ModuleKind::DirectSum { parts } => {
                let mut out = Vec::new();
                let mut offset = 0;
                for part in parts {
                    for pb in &part.data.basis {
                        let mut coords = zero_coords();
                        coords[offset..offset + part.rank()].clone_from_slice(pb);
                        out.push(coords);
                    }
                    offset += part.rank();
                }
                out
            }
        };

        let flat_candidates: Vec<Vec<C64>> =
            candidates.iter().map(|c| flatten_coords(c)).collect();
        let flat_basis = linalg::orthonormal_span(&flat_candidates, RANK_EPS);
        let basis: Vec<Vec<AlgElement>> = flat_basis
            .iter()
            .map(|f| unflatten_coords(&algebra, rank, f))
            .collect();
        let d = basis.len();

        // right-action matrices in the complex basis
        let mut action = Vec::with_capacity(dim_a);
        for e in &alg_basis {
            let mut m = CMatrix::zeros(d, d);
            for (j, b) in basis.iter().enumerate() {
                let moved: Vec<AlgElement> = b.iter().map(|c| c.mul(e)).collect();
                let col = linalg::projection_coefficients(&flatten_coords(&moved), &flat_basis);
                m.set_column(j, &col);
            }
            action.push(m);
        }

        // tracial Gram, LU-factored once for Riesz solves
        let gram = CMatrix::from_fn(d, d, |i, j| {
            linalg::vec_dot(&flat_basis[i], &flat_basis[j])
        });
        let gram_lu = LuFactors::factor(&gram);
        if d > 0 && gram_lu.is_singular() {
            return Err(CoreError::Internal(
                "tracial Gram matrix of a module basis is singular".into(),
            ));
        }

        Ok(ModuleSpace {
            data: Arc::new(SpaceData {
                algebra,
                kind,
                rank,
                basis,
                flat_basis,
                action,
                gram_lu,
                spec_string,
            }),
        })
    }

    pub fn algebra(&self) -> &AlgebraDescriptor {
        &self.data.algebra
    }

    pub fn kind(&self) -> &ModuleKind {
        &self.data.kind
    }

    /// Number of algebra-element coordinates per vector.
    pub fn rank(&self) -> usize {
        self.data.rank
    }

    /// Complex dimension of the space.
    pub fn complex_dim(&self) -> usize {
        self.data.basis.len()
    }

    pub fn spec_string(&self) -> &str {
        &self.data.spec_string
    }

    /// The tracially orthonormal complex basis.
    pub fn basis(&self) -> Vec<ModuleVector> {
        self.data
            .basis
            .iter()
            .map(|coords| ModuleVector {
                space: self.clone(),
                coords: coords.clone(),
            })
            .collect()
    }

    pub fn basis_vector(&self, i: usize) -> ModuleVector {
        ModuleVector {
            space: self.clone(),
            coords: self.data.basis[i].clone(),
        }
    }

    /// Right-action matrix of the `e`-th algebra basis element.
    pub fn action_matrix(&self, e: usize) -> &CMatrix {
        &self.data.action[e]
    }

    pub fn zero_vector(&self) -> ModuleVector {
        ModuleVector {
            space: self.clone(),
            coords: vec![self.data.algebra.zero(); self.data.rank],
        }
    }

    /// Validated construction: coordinate shapes must match and the vector
    /// must lie in the space (nontrivial for ideal and direct-sum parts).
    pub fn vector(&self, coords: Vec<AlgElement>, tols: &Tolerances) -> Result<ModuleVector> {
        if coords.len() != self.data.rank {
            return Err(CoreError::ShapeMismatch(format!(
                "expected {} coordinates, got {}",
                self.data.rank,
                coords.len()
            )));
        }
        for c in &coords {
            if c.descriptor() != &self.data.algebra {
                return Err(CoreError::ShapeMismatch(
                    "coordinate lives in a different algebra".into(),
                ));
            }
        }
        let flat = flatten_coords(&coords);
        let residual = linalg::projection_residual(&flat, &self.data.flat_basis);
        let scale = rel(linalg::vec_norm(&flat));
        if residual > tols.sub * scale {
            return Err(CoreError::Domain(format!(
                "vector lies outside the module (membership residual {residual:.3e})"
            )));
        }
        Ok(ModuleVector {
            space: self.clone(),
            coords,
        })
    }

    /// Vector from coefficients in the complex basis.
    pub fn from_complex(&self, coeffs: &[C64]) -> ModuleVector {
        assert_eq!(coeffs.len(), self.complex_dim());
        let mut coords = vec![self.data.algebra.zero(); self.data.rank];
        for (c, b) in coeffs.iter().zip(&self.data.basis) {
            for (slot, be) in b.iter().enumerate() {
                coords[slot] = coords[slot].add(&be.scal(*c));
            }
        }
        ModuleVector {
            space: self.clone(),
            coords,
        }
    }

    /// Random vector: a standard-normal complex combination of the basis.
    pub fn random_vector<R: Rng>(&self, rng: &mut R) -> ModuleVector {
        let coeffs: Vec<C64> = (0..self.complex_dim())
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                C64::new(re, im)
            })
            .collect();
        self.from_complex(&coeffs)
    }

    /// Random vector of module norm 1.
    pub fn random_unit_vector<R: Rng>(&self, rng: &mut R) -> ModuleVector {
        loop {
            let v = self.random_vector(rng);
            let n = v.scalar_norm();
            if n > 1e-6 {
                return v.scal(C64::new(1.0 / n, 0.0));
            }
        }
    }

    /// Solve the Riesz problem: find `x` with `<x, y> = tau(y)` for all `y`,
    /// given the values `tau(b_j)` on the complex basis.
    ///
    /// The square system is the tracial reduction of the defining equations;
    /// it is solved through the LU factors of the basis Gram matrix. The
    /// A-valued residual is returned alongside so callers can reject
    /// functionals that are not module-linear.
    pub fn riesz_solve(&self, values: &[AlgElement]) -> Result<(ModuleVector, f64)> {
        let d = self.complex_dim();
        assert_eq!(values.len(), d);
        // tracial reduction of <x, b_j> = tau(b_j) with x = sum c_i b_i:
        //   sum_i conj(c_i) G[i][j] = tr(tau(b_j));
        // conjugating and using G hermitian gives G c = conj(rhs).
        let rhs: Vec<C64> = values.iter().map(|v| v.trace().conj()).collect();
        let coeffs = self.data.gram_lu.solve(&rhs)?;
        let x = self.from_complex(&coeffs);
        // verify the full A-valued equations
        let mut residual = 0.0f64;
        let mut scale = 1.0f64;
        for (j, b) in self.basis().iter().enumerate() {
            let got = x.inner(b);
            scale = scale.max(values[j].max_abs_entry());
            residual = residual.max(got.sub(&values[j]).max_abs_entry());
        }
        Ok((x, residual / scale))
    }
}

fn flatten_coords(coords: &[AlgElement]) -> Vec<C64> {
    let mut out = Vec::new();
    for c in coords {
        out.extend(c.coords());
    }
    out
}

fn unflatten_coords(algebra: &AlgebraDescriptor, rank: usize, flat: &[C64]) -> Vec<AlgElement> {
    let da = algebra.dim();
    assert_eq!(flat.len(), rank * da);
    (0..rank)
        .map(|i| AlgElement::from_coords(algebra, &flat[i * da..(i + 1) * da]).unwrap())
        .collect()
}

/// Element of a `ModuleSpace`: a list of algebra-element coordinates.
#[derive(Debug, Clone)]
pub struct ModuleVector {
    space: ModuleSpace,
    coords: Vec<AlgElement>,
}

impl ModuleVector {
    /// Construction without the span-membership check, for callers that
    /// guarantee it structurally.
    pub(crate) fn raw(space: &ModuleSpace, coords: Vec<AlgElement>) -> ModuleVector {
        debug_assert_eq!(coords.len(), space.rank());
        ModuleVector {
            space: space.clone(),
            coords,
        }
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub fn coords(&self) -> &[AlgElement] {
        &self.coords
    }

    fn check_same_space(&self, other: &ModuleVector) -> Result<()> {
        if self.space != other.space {
            return Err(CoreError::ShapeMismatch(format!(
                "space mismatch: {} vs {}",
                self.space, other.space
            )));
        }
        Ok(())
    }

    /// The A-valued inner product: sum of `x_i* y_i` over coordinates.
    pub fn inner(&self, other: &ModuleVector) -> AlgElement {
        self.check_same_space(other).expect("space mismatch in inner");
        let mut acc = self.space.algebra().zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc = acc.add(&a.star().mul(b));
        }
        acc
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        self.check_same_space(other).expect("space mismatch in add");
        ModuleVector {
            space: self.space.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        self.check_same_space(other).expect("space mismatch in sub");
        ModuleVector {
            space: self.space.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scal(&self, k: C64) -> ModuleVector {
        ModuleVector {
            space: self.space.clone(),
            coords: self.coords.iter().map(|c| c.scal(k)).collect(),
        }
    }

    /// Right module action `(x a)_i = x_i a`.
    pub fn act(&self, a: &AlgElement) -> ModuleVector {
        ModuleVector {
            space: self.space.clone(),
            coords: self.coords.iter().map(|c| c.mul(a)).collect(),
        }
    }

    /// Scalar norm `||<x, x>||^{1/2}`.
    pub fn scalar_norm(&self) -> f64 {
        self.inner(self).norm().max(0.0).sqrt()
    }

    /// A-valued modulus `<x, x>^{1/2}`.
    pub fn avalued_modulus(&self, tols: &Tolerances) -> Result<AlgElement> {
        self.inner(self).sqrt_positive(tols.herm, tols.pos)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coords.iter().all(|c| c.is_zero(tol))
    }

    pub fn flat(&self) -> Vec<C64> {
        flatten_coords(&self.coords)
    }

    /// Coefficients in the space's complex basis.
    pub fn to_complex(&self) -> Vec<C64> {
        linalg::projection_coefficients(&self.flat(), &self.space.data.flat_basis)
    }

    /// Largest coordinate entry, for relative tolerance scaling.
    pub fn max_abs_entry(&self) -> f64 {
        self.coords
            .iter()
            .map(|c| c.max_abs_entry())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ModuleVector, tol: f64) -> bool {
        self.sub(other).max_abs_entry() <= tol * rel(self.max_abs_entry().max(other.max_abs_entry()))
    }

    /// Serialized form used in failure exemplars.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "space": self.space.spec_string(),
            "coords": self.coords.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ONE, ZERO};
    use crate::rng::trial_rng;

    fn desc(s: &str) -> AlgebraDescriptor {
        s.parse().unwrap()
    }

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn free_module_dimensions() {
        let x = ModuleSpace::free(desc("M2+C"), 3).unwrap();
        assert_eq!(x.rank(), 3);
        assert_eq!(x.complex_dim(), 15); // 3 * (4 + 1)
        assert_eq!(x.spec_string(), "free(M2+C, rank=3)");
    }

    #[test]
    fn tensor_module_matches_free_rank() {
        let x = ModuleSpace::tensor(desc("M2"), 3).unwrap();
        assert_eq!(x.complex_dim(), 12);
        let free = ModuleSpace::free(desc("M2"), 3).unwrap();
        assert_eq!(x.complex_dim(), free.complex_dim());
    }

    #[test]
    fn ideal_module_basis() {
        let a = desc("M2");
        let e11 = a.matrix_unit(0, 0, 0).unwrap();
        let x = ModuleSpace::ideal(a, e11, "e11").unwrap();
        // e11 * M2 = span{e11, e12}
        assert_eq!(x.complex_dim(), 2);
        assert_eq!(x.spec_string(), "ideal(M2, gen=e11)");
    }

    #[test]
    fn zero_generator_gives_zero_module() {
        let a = desc("M2");
        let x = ModuleSpace::ideal(a.clone(), a.zero(), "zero").unwrap();
        assert_eq!(x.complex_dim(), 0);
    }

    #[test]
    fn inner_of_unit_coordinate_vectors() {
        // x = (e11, 0), y = (e12, 0) over M2: <x, y> = e11* e12 = e12
        let a = desc("M2");
        let x_space = ModuleSpace::free(a.clone(), 2).unwrap();
        let e11 = a.matrix_unit(0, 0, 0).unwrap();
        let e12 = a.matrix_unit(0, 0, 1).unwrap();
        let x = x_space
            .vector(vec![e11, a.zero()], &tols())
            .unwrap();
        let y = x_space
            .vector(vec![e12.clone(), a.zero()], &tols())
            .unwrap();
        assert_eq!(x.inner(&y), e12);
        // inner with zero vector is zero
        assert!(x.inner(&x_space.zero_vector()).is_zero(0.0));
    }

    #[test]
    fn conjugate_symmetry_on_random_pairs() {
        let x_space = ModuleSpace::free(desc("M2+C"), 2).unwrap();
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            let x = x_space.random_vector(&mut rng);
            let y = x_space.random_vector(&mut rng);
            let lhs = y.inner(&x);
            let rhs = x.inner(&y).star();
            assert!(lhs.sub(&rhs).max_abs_entry() < 1e-12 * rel(lhs.max_abs_entry()));
        }
    }

    #[test]
    fn scalar_norm_of_unit() {
        let a = desc("M2");
        let x_space = ModuleSpace::over_itself(a.clone()).unwrap();
        let one = x_space.vector(vec![a.unit()], &tols()).unwrap();
        assert!((one.scalar_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pythagoras_failure_over_c_plus_c() {
        // f = (1, 0), g = (0, 1) in A = C + C viewed as a module over itself
        let a = desc("C+C");
        let x_space = ModuleSpace::over_itself(a.clone()).unwrap();
        let f = x_space
            .vector(
                vec![AlgElement::from_coords(&a, &[ONE, ZERO]).unwrap()],
                &tols(),
            )
            .unwrap();
        let g = x_space
            .vector(
                vec![AlgElement::from_coords(&a, &[ZERO, ONE]).unwrap()],
                &tols(),
            )
            .unwrap();
        assert!(f.inner(&g).is_zero(0.0));
        assert!((f.scalar_norm() - 1.0).abs() < 1e-12);
        assert!((g.scalar_norm() - 1.0).abs() < 1e-12);
        let sum = f.add(&g);
        assert!((sum.scalar_norm() - 1.0).abs() < 1e-12);
        // 1^2 != 1^2 + 1^2
        assert!((sum.scalar_norm().powi(2) - 2.0).abs() > 0.5);
    }

    #[test]
    fn avalued_modulus_squares_back() {
        let x_space = ModuleSpace::free(desc("M2"), 2).unwrap();
        let mut rng = trial_rng(2, 0);
        for _ in 0..20 {
            let x = x_space.random_vector(&mut rng);
            let m = x.avalued_modulus(&tols()).unwrap();
            let back = m.mul(&m);
            let target = x.inner(&x);
            assert!(
                back.sub(&target).max_abs_entry() <= 1e-9 * rel(target.norm()),
                "modulus square residual too large"
            );
        }
    }

    #[test]
    fn membership_validation_rejects_outsiders() {
        let a = desc("M2");
        let e11 = a.matrix_unit(0, 0, 0).unwrap();
        let e21 = a.matrix_unit(0, 1, 0).unwrap();
        let x = ModuleSpace::ideal(a.clone(), e11.clone(), "e11").unwrap();
        // e21 is not in e11 * A (wrong row support)
        assert!(x.vector(vec![e21], &tols()).is_err());
        assert!(x.vector(vec![e11], &tols()).is_ok());
    }

    #[test]
    fn riesz_solve_recovers_hat_vector() {
        let x_space = ModuleSpace::free(desc("M2+C"), 2).unwrap();
        let mut rng = trial_rng(3, 0);
        for _ in 0..10 {
            let x = x_space.random_vector(&mut rng);
            let values: Vec<AlgElement> =
                x_space.basis().iter().map(|b| x.inner(b)).collect();
            let (sol, residual) = x_space.riesz_solve(&values).unwrap();
            assert!(residual < 1e-10);
            assert!(sol.approx_eq(&x, 1e-9));
        }
    }

    #[test]
    fn direct_sum_inner_is_sum_of_part_inners() {
        let a = desc("M2");
        let p1 = ModuleSpace::free(a.clone(), 1).unwrap();
        let p2 = ModuleSpace::free(a.clone(), 2).unwrap();
        let ds = ModuleSpace::direct_sum(vec![p1.clone(), p2.clone()]).unwrap();
        assert_eq!(ds.complex_dim(), p1.complex_dim() + p2.complex_dim());
        let mut rng = trial_rng(4, 0);
        let x = ds.random_vector(&mut rng);
        let y = ds.random_vector(&mut rng);
        // recompute by splitting coordinates
        let direct = x.inner(&y);
        let mut split = a.zero();
        for i in 0..3 {
            split = split.add(&x.coords()[i].star().mul(&y.coords()[i]));
        }
        assert!(direct.sub(&split).is_zero(0.0), "same summation order, exact match");
    }
}
