//! Generated submodules, orthogonal complements, and the complementation
//! checks that hold in the finite-dimensional (self-dual) regime.

use crate::error::Result;
use crate::linalg::{self, CMatrix, C64};
use crate::tolerances::{rel, Tolerances};

use super::{ModuleSpace, ModuleVector, RANK_EPS};

/// A right-invariant complex subspace of a module, with a tracially
/// orthonormal basis.
#[derive(Debug, Clone)]
pub struct Submodule {
    space: ModuleSpace,
    /// Basis coefficients in the ambient complex basis, orthonormal.
    basis_coeffs: Vec<Vec<C64>>,
}

impl Submodule {
    /// Closed submodule generated by a family of vectors: the complex span
    /// of `{g e : g generator, e algebra basis element}`, orthonormalized.
    /// The span is right-invariant by construction. An empty generator list
    /// gives the zero submodule.
    pub fn generate(space: &ModuleSpace, generators: &[ModuleVector]) -> Result<Self> {
        let mut candidates = Vec::new();
        for g in generators {
            for e in space.algebra().basis() {
                candidates.push(g.act(&e).to_complex());
            }
        }
        let basis_coeffs = linalg::orthonormal_span(&candidates, RANK_EPS);
        Ok(Submodule {
            space: space.clone(),
            basis_coeffs,
        })
    }

    pub fn zero(space: &ModuleSpace) -> Self {
        Submodule {
            space: space.clone(),
            basis_coeffs: Vec::new(),
        }
    }

    pub fn full(space: &ModuleSpace) -> Self {
        let d = space.complex_dim();
        let basis_coeffs = (0..d)
            .map(|i| {
                let mut v = vec![linalg::ZERO; d];
                v[i] = linalg::ONE;
                v
            })
            .collect();
        Submodule {
            space: space.clone(),
            basis_coeffs,
        }
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.basis_coeffs.len()
    }

    pub fn basis(&self) -> Vec<ModuleVector> {
        self.basis_coeffs
            .iter()
            .map(|c| self.space.from_complex(c))
            .collect()
    }

    /// Projection residual of a vector onto the submodule, relative.
    pub fn contains_residual(&self, v: &ModuleVector) -> f64 {
        let coeffs = v.to_complex();
        let n = linalg::vec_norm(&coeffs);
        linalg::projection_residual(&coeffs, &self.basis_coeffs) / rel(n)
    }

    pub fn contains(&self, v: &ModuleVector, tols: &Tolerances) -> bool {
        self.contains_residual(v) <= tols.sub
    }

    /// Worst residual of `v e` against the span, over basis vectors `v` and
    /// algebra basis elements `e`; zero means right-invariant.
    pub fn right_invariance_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for v in self.basis() {
            for e in self.space.algebra().basis() {
                let moved = v.act(&e).to_complex();
                let n = linalg::vec_norm(&moved);
                if n < 1e-14 {
                    continue;
                }
                let res = linalg::projection_residual(&moved, &self.basis_coeffs);
                worst = worst.max(res / rel(n));
            }
        }
        worst
    }

    /// Orthogonal complement `{y : <x, y> = 0 for all x in F}`, computed by
    /// solving the complex-linear system over the basis of `F`.
    pub fn orthogonal_complement(&self) -> Result<Submodule> {
        let _d = self.space.complex_dim();
        if self.basis_coeffs.is_empty() {
            return Ok(Submodule::full(&self.space));
        }
        let dim_a = self.space.algebra().dim();
        let ambient = self.space.basis();
        // rows: for each submodule basis vector b and algebra coordinate
        // alpha, the functional  y |-> coord_alpha(<b, y>)
        let mut rows = Vec::with_capacity(self.dim() * dim_a);
        for b in self.basis() {
            // column j carries <b, ambient_j>
            let cols: Vec<Vec<C64>> = ambient.iter().map(|aj| b.inner(aj).coords()).collect();
            for alpha in 0..dim_a {
                rows.push(cols.iter().map(|c| c[alpha]).collect::<Vec<C64>>());
            }
        }
        let m = CMatrix::from_rows(rows);
        let kernel = linalg::kernel_basis(&m, RANK_EPS);
        let basis_coeffs = linalg::orthonormal_span(&kernel, RANK_EPS);
        Ok(Submodule {
            space: self.space.clone(),
            basis_coeffs,
        })
    }

    /// Do the two submodules describe the same subspace?
    pub fn same_span(&self, other: &Submodule, tols: &Tolerances) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let fwd = other
            .basis_coeffs
            .iter()
            .map(|v| linalg::projection_residual(v, &self.basis_coeffs))
            .fold(0.0f64, f64::max);
        let bwd = self
            .basis_coeffs
            .iter()
            .map(|v| linalg::projection_residual(v, &other.basis_coeffs))
            .fold(0.0f64, f64::max);
        fwd.max(bwd) <= tols.sub
    }

    /// Dimension of `F + G` (rank of the union of bases).
    pub fn sum_dim(&self, other: &Submodule) -> usize {
        let mut all = self.basis_coeffs.clone();
        all.extend(other.basis_coeffs.iter().cloned());
        linalg::orthonormal_span(&all, RANK_EPS).len()
    }
}

/// Result of the orthogonal-complementation checks for a submodule.
#[derive(Debug, Clone)]
pub struct ComplementReport {
    pub dim_space: usize,
    pub dim_f: usize,
    pub dim_fperp: usize,
    /// `dim(F + Fperp) == dim X`.
    pub sum_is_whole: bool,
    /// `dim F + dim Fperp == dim X` forces trivial intersection given the sum.
    pub intersection_trivial: bool,
    /// `Fperpperp == F` as spans.
    pub double_complement_is_f: bool,
    pub right_invariance_residual: f64,
}

impl ComplementReport {
    pub fn all_hold(&self) -> bool {
        self.sum_is_whole && self.intersection_trivial && self.double_complement_is_f
    }
}

/// Verify `F (+) Fperp = X`, `F cap Fperp = {0}` and `Fperpperp = F`; all
/// three hold over a finite-dimensional algebra because every module here is
/// self-dual.
pub fn complement_checks(f: &Submodule, tols: &Tolerances) -> Result<ComplementReport> {
    let fperp = f.orthogonal_complement()?;
    let fpp = fperp.orthogonal_complement()?;
    let dim_space = f.space().complex_dim();
    let sum = f.sum_dim(&fperp);
    Ok(ComplementReport {
        dim_space,
        dim_f: f.dim(),
        dim_fperp: fperp.dim(),
        sum_is_whole: sum == dim_space,
        intersection_trivial: f.dim() + fperp.dim() == sum,
        double_complement_is_f: fpp.same_span(f, tols),
        right_invariance_residual: f.right_invariance_residual(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraDescriptor;
    use crate::rng::trial_rng;
    use crate::tolerances::Tolerances;

    fn desc(s: &str) -> AlgebraDescriptor {
        s.parse().unwrap()
    }

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn standard_basis_generates_full_space() {
        let a = desc("M2");
        let x = ModuleSpace::free(a.clone(), 2).unwrap();
        let mut gens = Vec::new();
        for slot in 0..2 {
            let mut coords = vec![a.zero(), a.zero()];
            coords[slot] = a.unit();
            gens.push(x.vector(coords, &tols()).unwrap());
        }
        let f = Submodule::generate(&x, &gens).unwrap();
        assert_eq!(f.dim(), x.complex_dim());
    }

    #[test]
    fn single_generator_span_dimension() {
        // (e11, 0) in A^2 over M2 spans {(e11 a, 0)} = {(row-1 matrices, 0)},
        // complex dimension 2
        let a = desc("M2");
        let x = ModuleSpace::free(a.clone(), 2).unwrap();
        let e11 = a.matrix_unit(0, 0, 0).unwrap();
        let g = x.vector(vec![e11, a.zero()], &tols()).unwrap();
        let f = Submodule::generate(&x, &[g]).unwrap();
        assert_eq!(f.dim(), 2);
        assert!(f.right_invariance_residual() < 1e-10);
    }

    #[test]
    fn empty_generators_give_zero() {
        let x = ModuleSpace::free(desc("M2"), 2).unwrap();
        let f = Submodule::generate(&x, &[]).unwrap();
        assert_eq!(f.dim(), 0);
        let fperp = f.orthogonal_complement().unwrap();
        assert_eq!(fperp.dim(), x.complex_dim());
    }

    #[test]
    fn complement_of_full_is_zero() {
        let x = ModuleSpace::free(desc("M2+C"), 2).unwrap();
        let full = Submodule::full(&x);
        let perp = full.orthogonal_complement().unwrap();
        assert_eq!(perp.dim(), 0);
    }

    #[test]
    fn rank_nullity_for_single_generator() {
        let a = desc("M2");
        let x = ModuleSpace::free(a.clone(), 2).unwrap();
        let e11 = a.matrix_unit(0, 0, 0).unwrap();
        let g = x.vector(vec![e11, a.zero()], &tols()).unwrap();
        let f = Submodule::generate(&x, &[g]).unwrap();
        let fperp = f.orthogonal_complement().unwrap();
        assert_eq!(f.dim() + fperp.dim(), x.complex_dim());
        // second-slot vectors are orthogonal to F
        let mut rng = trial_rng(8, 0);
        let y2 = ModuleSpace::over_itself(a.clone())
            .unwrap()
            .random_vector(&mut rng);
        let cand = x
            .vector(vec![a.zero(), y2.coords()[0].clone()], &tols())
            .unwrap();
        assert!(fperp.contains(&cand, &tols()));
        // orthogonality is genuine
        for b in f.basis() {
            assert!(b.inner(&cand).is_zero(1e-10));
        }
    }

    #[test]
    fn complement_checks_hold_on_random_submodules() {
        let configs = [("M2", 2usize, 1usize), ("M2+C", 2, 2), ("C+C", 3, 1)];
        for (k, (ds, rank, n_gens)) in configs.iter().enumerate() {
            let a = desc(ds);
            let x = ModuleSpace::free(a.clone(), *rank).unwrap();
            let mut rng = trial_rng(50, k as u64);
            for _ in 0..20 {
                let gens: Vec<ModuleVector> =
                    (0..*n_gens).map(|_| x.random_vector(&mut rng)).collect();
                let f = Submodule::generate(&x, &gens).unwrap();
                let report = complement_checks(&f, &tols()).unwrap();
                assert!(report.all_hold(), "failed report: {report:?}");
                assert!(report.right_invariance_residual <= tols().sub);
            }
        }
    }

    #[test]
    fn complement_checks_trivial_on_zero() {
        let x = ModuleSpace::free(desc("M2"), 1).unwrap();
        let f = Submodule::zero(&x);
        let report = complement_checks(&f, &tols()).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.dim_fperp, x.complex_dim());
    }
}
