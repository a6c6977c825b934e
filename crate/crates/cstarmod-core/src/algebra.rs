//! Finite-dimensional C*-algebras: direct sums of full complex matrix
//! blocks, with involution, positivity, square roots and the operator norm.

use std::fmt;
use std::str::FromStr;


use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::Value;

use crate::error::{CoreError, Result};
use crate::linalg::{self, CMatrix, C64, ONE, ZERO};
use crate::tolerances::rel;

/// Block structure of a finite-dimensional C*-algebra: the direct sum of
/// full matrix algebras with the given block dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraDescriptor {
    blocks: Vec<usize>,
}

impl AlgebraDescriptor {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(CoreError::Parse("descriptor needs at least one block".into()));
        }
        if blocks.iter().any(|&n| n == 0) {
            return Err(CoreError::Parse("block dimensions must be positive".into()));
        }
        Ok(AlgebraDescriptor { blocks })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Complex dimension: sum of squared block sizes.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement {
            descriptor: self.clone(),
            blocks: self.blocks.iter().map(|&n| CMatrix::zeros(n, n)).collect(),
        }
    }

    pub fn unit(&self) -> AlgElement {
        AlgElement {
            descriptor: self.clone(),
            blocks: self.blocks.iter().map(|&n| CMatrix::identity(n)).collect(),
        }
    }

    /// Matrix-unit basis, block by block in row-major order. The basis is
    /// orthonormal for the tracial pairing `tr(a* b)`.
    pub fn basis(&self) -> Vec<AlgElement> {
        let mut out = Vec::with_capacity(self.dim());
        for (k, &n) in self.blocks.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let mut e = self.zero();
                    e.blocks[k].set(i, j, ONE);
                    out.push(e);
                }
            }
        }
        out
    }

    /// A single matrix unit `e_{ij}` in block `block` (all indices 0-based).
    pub fn matrix_unit(&self, block: usize, i: usize, j: usize) -> Result<AlgElement> {
        let n = *self
            .blocks
            .get(block)
            .ok_or_else(|| CoreError::Parse(format!("no block {block}")))?;
        if i >= n || j >= n {
            return Err(CoreError::Parse(format!(
                "unit e{}{} out of range for block of size {n}",
                i + 1,
                j + 1
            )));
        }
        let mut e = self.zero();
        e.blocks[block].set(i, j, ONE);
        Ok(e)
    }

    /// Unit of a single block (zero elsewhere).
    pub fn block_unit(&self, block: usize) -> Result<AlgElement> {
        let n = *self
            .blocks
            .get(block)
            .ok_or_else(|| CoreError::Parse(format!("no block {block}")))?;
        let mut e = self.zero();
        for i in 0..n {
            e.blocks[block].set(i, i, ONE);
        }
        Ok(e)
    }

    /// Element with independent standard-normal real and imaginary parts in
    /// every entry.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> AlgElement {
        let blocks = self
            .blocks
            .iter()
            .map(|&n| {
                CMatrix::from_fn(n, n, |_, _| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    C64::new(re, im)
                })
            })
            .collect();
        AlgElement {
            descriptor: self.clone(),
            blocks,
        }
    }

    /// Random Hermitian element `(a + a*)/2`.
    pub fn random_hermitian<R: Rng>(&self, rng: &mut R) -> AlgElement {
        let a = self.random_element(rng);
        a.add(&a.star()).scal(C64::new(0.5, 0.0))
    }

    /// Random positive element `a* a`.
    pub fn random_positive<R: Rng>(&self, rng: &mut R) -> AlgElement {
        let a = self.random_element(rng);
        a.star().mul(&a)
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|&n| if n == 1 { "C".to_string() } else { format!("M{n}") })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for AlgebraDescriptor {
    type Err = CoreError;

    /// Grammar: `"M2+M3+C"`; `C` is shorthand for `M1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            if part == "C" {
                blocks.push(1);
            } else if let Some(num) = part.strip_prefix('M') {
                let n: usize = num
                    .parse()
                    .map_err(|_| CoreError::Parse(format!("bad block size in `{part}`")))?;
                if n == 0 {
                    return Err(CoreError::Parse("block size must be positive".into()));
                }
                blocks.push(n);
            } else {
                return Err(CoreError::Parse(format!(
                    "bad algebra descriptor component `{part}` (expected `M<n>` or `C`)"
                )));
            }
        }
        AlgebraDescriptor::new(blocks)
    }
}

/// An element of a block-diagonal matrix algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElement {
    descriptor: AlgebraDescriptor,
    blocks: Vec<CMatrix>,
}

/// Eigenvalues per block, descending within each block.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub per_block: Vec<Vec<f64>>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.per_block
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.per_block
            .iter()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Spectrum together with the block diagonalizers.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub spectrum: Spectrum,
    pub unitaries: Vec<CMatrix>,
}

/// Outcome of a positivity test.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityVerdict {
    pub positive: bool,
    pub witness: Option<PositivityWitness>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PositivityWitness {
    NotSelfAdjoint { defect: f64 },
    NegativeEigenvalue { block: usize, value: f64 },
}

impl fmt::Display for PositivityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PositivityWitness::NotSelfAdjoint { defect } => {
                write!(f, "not self-adjoint (defect {defect:.3e})")
            }
            PositivityWitness::NegativeEigenvalue { block, value } => {
                write!(f, "negative eigenvalue {value:.6} in block {block}")
            }
        }
    }
}

impl AlgElement {
    pub fn from_blocks(descriptor: AlgebraDescriptor, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != descriptor.blocks().len() {
            return Err(CoreError::ShapeMismatch(format!(
                "expected {} blocks, got {}",
                descriptor.blocks().len(),
                blocks.len()
            )));
        }
        for (b, &n) in blocks.iter().zip(descriptor.blocks()) {
            if b.rows() != n || b.cols() != n {
                return Err(CoreError::ShapeMismatch(format!(
                    "block of shape {}x{} does not match descriptor size {n}",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(AlgElement { descriptor, blocks })
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    fn check_same(&self, other: &AlgElement) -> Result<()> {
        if self.descriptor != other.descriptor {
            return Err(CoreError::ShapeMismatch(format!(
                "descriptor mismatch: {} vs {}",
                self.descriptor, other.descriptor
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgElement) -> AlgElement {
        self.check_same(other).expect("descriptor mismatch in add");
        AlgElement {
            descriptor: self.descriptor.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &AlgElement) -> AlgElement {
        self.check_same(other).expect("descriptor mismatch in sub");
        AlgElement {
            descriptor: self.descriptor.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    /// Blockwise matrix product.
    pub fn mul(&self, other: &AlgElement) -> AlgElement {
        self.check_same(other).expect("descriptor mismatch in mul");
        AlgElement {
            descriptor: self.descriptor.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.matmul(b))
                .collect(),
        }
    }

    pub fn scal(&self, k: C64) -> AlgElement {
        AlgElement {
            descriptor: self.descriptor.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(k)).collect(),
        }
    }

    /// Involution: conjugate transpose per block.
    pub fn star(&self) -> AlgElement {
        AlgElement {
            descriptor: self.descriptor.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    /// C*-norm: the largest singular value over all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| linalg::largest_singular_value(b).expect("norm eigensolve"))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.blocks.iter().map(|b| b.max_abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol_zero: f64) -> bool {
        self.max_abs_entry() <= tol_zero
    }

    /// Sum of block traces.
    pub fn trace(&self) -> C64 {
        self.blocks.iter().map(|b| b.trace()).fold(ZERO, |a, b| a + b)
    }

    /// Tracial pairing `tr(self* other)`; a genuine complex inner product.
    pub fn tracial_inner(&self, other: &AlgElement) -> C64 {
        self.check_same(other).expect("descriptor mismatch");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                a.data()
                    .iter()
                    .zip(b.data())
                    .fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
            })
            .fold(ZERO, |a, b| a + b)
    }

    /// Coordinates in the matrix-unit basis (exact readout; the basis is
    /// tracially orthonormal).
    pub fn coords(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.descriptor.dim());
        for b in &self.blocks {
            out.extend_from_slice(b.data());
        }
        out
    }

    pub fn from_coords(descriptor: &AlgebraDescriptor, coords: &[C64]) -> Result<Self> {
        if coords.len() != descriptor.dim() {
            return Err(CoreError::ShapeMismatch(format!(
                "expected {} coordinates, got {}",
                descriptor.dim(),
                coords.len()
            )));
        }
        let mut blocks = Vec::with_capacity(descriptor.blocks().len());
        let mut offset = 0;
        for &n in descriptor.blocks() {
            blocks.push(CMatrix::from_vectorized(
                n,
                n,
                coords[offset..offset + n * n].to_vec(),
            ));
            offset += n * n;
        }
        Ok(AlgElement {
            descriptor: descriptor.clone(),
            blocks,
        })
    }

    /// `norm(a - a*)`-style defect, as a max entry difference.
    pub fn hermitian_defect(&self) -> f64 {
        self.blocks.iter().map(|b| b.hermitian_defect()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol_herm: f64) -> bool {
        self.hermitian_defect() <= tol_herm * rel(self.max_abs_entry())
    }

    /// Blockwise Hermitian eigendecomposition.
    ///
    /// Errors on non-Hermitian input. The reconstruction
    /// `u diag(lambda) u*` agrees with the input within `eig_tol`.
    pub fn hermitian_eigen(&self, tol_herm: f64) -> Result<HermitianEigen> {
        if !self.is_hermitian(tol_herm) {
            return Err(CoreError::Domain(format!(
                "hermitian_eigen needs a self-adjoint element (defect {:.3e})",
                self.hermitian_defect()
            )));
        }
        let mut per_block = Vec::with_capacity(self.blocks.len());
        let mut unitaries = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            // symmetrize exactly before the solve so roundoff in the input
            // cannot leak into the rotation angles
            let h = b.add(&b.adjoint()).scale(C64::new(0.5, 0.0));
            let (eigs, u) = linalg::hermitian_eigen(&h)?;
            per_block.push(eigs);
            unitaries.push(u);
        }
        Ok(HermitianEigen {
            spectrum: Spectrum { per_block },
            unitaries,
        })
    }

    /// Positivity test. Non-Hermitian input reports `false` with a
    /// "not self-adjoint" witness rather than erroring.
    pub fn is_positive(&self, tol_herm: f64, tol_pos: f64) -> PositivityVerdict {
        let scale = rel(self.max_abs_entry());
        if !self.is_hermitian(tol_herm) {
            return PositivityVerdict {
                positive: false,
                witness: Some(PositivityWitness::NotSelfAdjoint {
                    defect: self.hermitian_defect(),
                }),
            };
        }
        let eigen = match self.hermitian_eigen(tol_herm) {
            Ok(e) => e,
            Err(_) => {
                return PositivityVerdict {
                    positive: false,
                    witness: Some(PositivityWitness::NotSelfAdjoint {
                        defect: self.hermitian_defect(),
                    }),
                }
            }
        };
        for (k, eigs) in eigen.spectrum.per_block.iter().enumerate() {
            if let Some(&min) = eigs.last() {
                if min < -tol_pos * scale {
                    return PositivityVerdict {
                        positive: false,
                        witness: Some(PositivityWitness::NegativeEigenvalue {
                            block: k,
                            value: min,
                        }),
                    };
                }
            }
        }
        PositivityVerdict {
            positive: true,
            witness: None,
        }
    }

    /// Square root of a positive element. Eigenvalues in `[-tol_pos, 0)` are
    /// clamped to 0; genuinely negative spectrum is a domain error.
    pub fn sqrt_positive(&self, tol_herm: f64, tol_pos: f64) -> Result<AlgElement> {
        let verdict = self.is_positive(tol_herm, tol_pos);
        if !verdict.positive {
            return Err(CoreError::Domain(format!(
                "sqrt_positive needs a positive element ({})",
                verdict.witness.map(|w| w.to_string()).unwrap_or_default()
            )));
        }
        let eigen = self.hermitian_eigen(tol_herm)?;
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (k, u) in eigen.unitaries.iter().enumerate() {
            let eigs = &eigen.spectrum.per_block[k];
            let n = u.rows();
            let mut d = CMatrix::zeros(n, n);
            for (i, &lam) in eigs.iter().enumerate() {
                let clamped = lam.max(0.0);
                d.set(i, i, C64::new(clamped.sqrt(), 0.0));
            }
            blocks.push(u.matmul(&d).matmul(&u.adjoint()));
        }
        Ok(AlgElement {
            descriptor: self.descriptor.clone(),
            blocks,
        })
    }

    /// Matrix of left multiplication `x -> self * x` on the algebra, in the
    /// matrix-unit basis.
    pub fn left_mult_matrix(&self) -> CMatrix {
        let basis = self.descriptor.basis();
        let d = basis.len();
        let mut m = CMatrix::zeros(d, d);
        for (j, e) in basis.iter().enumerate() {
            let col = self.mul(e).coords();
            m.set_column(j, &col);
        }
        m
    }

    /// Matrix of right multiplication `x -> x * self` in the matrix-unit
    /// basis.
    pub fn right_mult_matrix(&self) -> CMatrix {
        let basis = self.descriptor.basis();
        let d = basis.len();
        let mut m = CMatrix::zeros(d, d);
        for (j, e) in basis.iter().enumerate() {
            let col = e.mul(self).coords();
            m.set_column(j, &col);
        }
        m
    }

    /// Serialize as a JSON array of blocks, each a row-major array of
    /// `[re, im]` pairs.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.blocks
                .iter()
                .map(|b| {
                    Value::Array(
                        b.data()
                            .iter()
                            .map(|z| serde_json::json!([z.re, z.im]))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn from_json(descriptor: &AlgebraDescriptor, v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| CoreError::Parse("element JSON must be an array of blocks".into()))?;
        if arr.len() != descriptor.blocks().len() {
            return Err(CoreError::Parse(format!(
                "expected {} blocks, got {}",
                descriptor.blocks().len(),
                arr.len()
            )));
        }
        let mut blocks = Vec::with_capacity(arr.len());
        for (&n, bv) in descriptor.blocks().iter().zip(arr) {
            let flat = bv
                .as_array()
                .ok_or_else(|| CoreError::Parse("block must be an array".into()))?;
            if flat.len() != n * n {
                return Err(CoreError::Parse(format!(
                    "block needs {} entries, got {}",
                    n * n,
                    flat.len()
                )));
            }
            let mut data = Vec::with_capacity(n * n);
            for entry in flat {
                let pair = entry
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| CoreError::Parse("entry must be [re, im]".into()))?;
                let re = pair[0]
                    .as_f64()
                    .ok_or_else(|| CoreError::Parse("re must be a number".into()))?;
                let im = pair[1]
                    .as_f64()
                    .ok_or_else(|| CoreError::Parse("im must be a number".into()))?;
                data.push(C64::new(re, im));
            }
            blocks.push(CMatrix::from_vectorized(n, n, data));
        }
        AlgElement::from_blocks(descriptor.clone(), blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;
    use crate::tolerances::Tolerances;

    fn desc(s: &str) -> AlgebraDescriptor {
        s.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn descriptor_grammar_roundtrip() {
        let d = desc("M2+M3+C");
        assert_eq!(d.blocks(), &[2, 3, 1]);
        assert_eq!(d.dim(), 14);
        assert_eq!(d.to_string(), "M2+M3+C");
        assert!("M0".parse::<AlgebraDescriptor>().is_err());
        assert!("Q2".parse::<AlgebraDescriptor>().is_err());
        assert!("".parse::<AlgebraDescriptor>().is_err());
    }

    #[test]
    fn star_of_scalar_i_is_minus_i() {
        let d = desc("C");
        let a = AlgElement::from_coords(&d, &[c(0.0, 1.0)]).unwrap();
        let s = a.star();
        assert_eq!(s.coords(), vec![c(0.0, -1.0)]);
        // involution
        assert_eq!(s.star(), a);
    }

    #[test]
    fn matrix_unit_products() {
        // hand oracle for 2x2 products: e_{ij} e_{kl} = delta_{jk} e_{il}
        let d = desc("M2");
        let e11 = d.matrix_unit(0, 0, 0).unwrap();
        let e12 = d.matrix_unit(0, 0, 1).unwrap();
        assert_eq!(e11.mul(&e12), e12);
        let e21 = d.matrix_unit(0, 1, 0).unwrap();
        assert!(e12.mul(&e11).is_zero(0.0));
        assert_eq!(e21.mul(&e12), d.matrix_unit(0, 1, 1).unwrap());
    }

    #[test]
    fn additive_inverse_is_exact_zero() {
        let d = desc("M2+C");
        let mut rng = trial_rng(7, 0);
        let a = d.random_element(&mut rng);
        let z = a.add(&a.scal(c(-1.0, 0.0)));
        assert!(z.is_zero(0.0));
    }

    #[test]
    fn eig_of_diagonal() {
        let d = desc("M2");
        let a = AlgElement::from_coords(&d, &[c(3.0, 0.0), ZERO, ZERO, c(4.0, 0.0)]).unwrap();
        let e = a.hermitian_eigen(1e-9).unwrap();
        assert_eq!(e.spectrum.per_block.len(), 1);
        let eigs = &e.spectrum.per_block[0];
        assert!((eigs[0] - 4.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eig_of_symmetric_2x2() {
        // char poly t^2 - 4t + 3 -> eigenvalues 3, 1
        let d = desc("M2");
        let a = AlgElement::from_coords(
            &d,
            &[c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)],
        )
        .unwrap();
        let e = a.hermitian_eigen(1e-9).unwrap();
        let eigs = &e.spectrum.per_block[0];
        assert!((eigs[0] - 3.0).abs() < 1e-12);
        assert!((eigs[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_of_zero() {
        let d = desc("M3");
        let e = d.zero().hermitian_eigen(1e-9).unwrap();
        assert!(e.spectrum.per_block[0].iter().all(|&l| l == 0.0));
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let d = desc("M2");
        let e12 = d.matrix_unit(0, 0, 1).unwrap();
        assert!(e12.hermitian_eigen(1e-9).is_err());
    }

    #[test]
    fn positivity_with_negative_witness() {
        // [[1,2],[2,1]] has eigenvalues 3 and -1
        let d = desc("M2");
        let a = AlgElement::from_coords(
            &d,
            &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let v = a.is_positive(1e-9, 1e-9);
        assert!(!v.positive);
        match v.witness.unwrap() {
            PositivityWitness::NegativeEigenvalue { value, .. } => {
                assert!((value + 1.0).abs() < 1e-12)
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn squares_are_positive_and_zero_is_positive() {
        let d = desc("M2+M3");
        let mut rng = trial_rng(42, 1);
        for _ in 0..20 {
            let a = d.random_element(&mut rng);
            assert!(a.star().mul(&a).is_positive(1e-9, 1e-9).positive);
        }
        assert!(d.zero().is_positive(1e-9, 1e-9).positive);
    }

    #[test]
    fn non_hermitian_positivity_witness() {
        let d = desc("M2");
        let e12 = d.matrix_unit(0, 0, 1).unwrap();
        let v = e12.is_positive(1e-9, 1e-9);
        assert!(!v.positive);
        assert!(matches!(
            v.witness,
            Some(PositivityWitness::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn sqrt_of_diagonal() {
        let d = desc("M2");
        let a = AlgElement::from_coords(&d, &[c(4.0, 0.0), ZERO, ZERO, c(9.0, 0.0)]).unwrap();
        let r = a.sqrt_positive(1e-9, 1e-9).unwrap();
        let expect =
            AlgElement::from_coords(&d, &[c(2.0, 0.0), ZERO, ZERO, c(3.0, 0.0)]).unwrap();
        assert!(r.sub(&expect).max_abs_entry() < 1e-12);
    }

    #[test]
    fn sqrt_of_symmetric_2x2_closed_form() {
        // sqrt([[2,1],[1,2]]) = [[(s3+1)/2, (s3-1)/2], [(s3-1)/2, (s3+1)/2]]
        let d = desc("M2");
        let a = AlgElement::from_coords(
            &d,
            &[c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)],
        )
        .unwrap();
        let r = a.sqrt_positive(1e-9, 1e-9).unwrap();
        let s3 = 3.0f64.sqrt();
        let expect = AlgElement::from_coords(
            &d,
            &[
                c((s3 + 1.0) / 2.0, 0.0),
                c((s3 - 1.0) / 2.0, 0.0),
                c((s3 - 1.0) / 2.0, 0.0),
                c((s3 + 1.0) / 2.0, 0.0),
            ],
        )
        .unwrap();
        assert!(r.sub(&expect).max_abs_entry() < 1e-12);
        // oracle: squaring recovers the input
        assert!(r.mul(&r).sub(&a).max_abs_entry() < 1e-10);
        assert!(r.is_positive(1e-9, 1e-9).positive);
    }

    #[test]
    fn sqrt_of_zero_and_negative_rejection() {
        let d = desc("M2");
        assert!(d.zero().sqrt_positive(1e-9, 1e-9).unwrap().is_zero(0.0));
        let neg = d.unit().scal(c(-1.0, 0.0));
        assert!(neg.sqrt_positive(1e-9, 1e-9).is_err());
    }

    #[test]
    fn norm_examples() {
        let d = desc("M2");
        let diag = AlgElement::from_coords(&d, &[c(3.0, 0.0), ZERO, ZERO, c(4.0, 0.0)]).unwrap();
        assert!((diag.norm() - 4.0).abs() < 1e-12);
        // e12* e12 = e22, largest eigenvalue 1
        let e12 = d.matrix_unit(0, 0, 1).unwrap();
        assert!((e12.norm() - 1.0).abs() < 1e-12);
        // homogeneity
        let mut rng = trial_rng(3, 0);
        let a = d.random_element(&mut rng);
        assert!((a.scal(c(2.0, 0.0)).norm() - 2.0 * a.norm()).abs() < 1e-9 * rel(a.norm()));
    }

    #[test]
    fn unit_and_basis() {
        let d = desc("M2+C");
        let u = d.unit();
        assert_eq!(
            u.coords(),
            vec![ONE, ZERO, ZERO, ONE, ONE],
            "diag(1,1) + (1)"
        );
        assert_eq!(desc("M2+M3").basis().len(), 13);
        let mut rng = trial_rng(11, 0);
        let a = d.random_element(&mut rng);
        assert!(u.mul(&a).sub(&a).is_zero(0.0));
        assert!(a.mul(&u).sub(&a).is_zero(0.0));
    }

    #[test]
    fn cstar_identity_and_submultiplicativity() {
        let tol = Tolerances::default();
        for (i, ds) in ["C", "M2", "M2+C", "M2+M3"].iter().enumerate() {
            let d = desc(ds);
            let mut rng = trial_rng(100, i as u64);
            for _ in 0..250 {
                let a = d.random_element(&mut rng);
                let b = d.random_element(&mut rng);
                let na = a.norm();
                let cstar = (a.star().mul(&a).norm() - na * na).abs();
                assert!(cstar <= tol.norm * rel(na * na), "C*-identity failed: {cstar}");
                assert!(a.mul(&b).norm() <= na * b.norm() + tol.norm);
            }
        }
    }

    #[test]
    fn conjugation_bound_by_norm() {
        // for positive c and any a: norm(c) a*a - a* c a  is positive
        let d = desc("M2+C");
        let mut rng = trial_rng(5, 0);
        for _ in 0..200 {
            let a = d.random_element(&mut rng);
            let cpos = d.random_positive(&mut rng);
            let lhs = a.star().mul(&a).scal(c(cpos.norm(), 0.0));
            let rhs = a.star().mul(&cpos).mul(&a);
            let diff = lhs.sub(&rhs);
            let v = diff.is_positive(1e-7, 1e-7);
            assert!(v.positive, "witness: {:?}", v.witness);
        }
    }

    #[test]
    fn sqrt_is_idempotent_compatible() {
        let d = desc("M2+C");
        let mut rng = trial_rng(9, 0);
        for _ in 0..100 {
            let a = d.random_positive(&mut rng);
            let r = a.sqrt_positive(1e-9, 1e-9).unwrap();
            let rr = r.sqrt_positive(1e-9, 1e-9).unwrap();
            let fourth = rr.mul(&rr).mul(&rr.mul(&rr));
            let resid = fourth.sub(&a).max_abs_entry();
            assert!(resid <= 10.0 * 1e-10 * rel(a.norm()), "residual {resid}");
        }
    }

    #[test]
    fn eig_reconstruction_residual_bound() {
        let d = desc("M2+M3");
        let mut rng = trial_rng(2024, 0);
        for _ in 0..1000 {
            let a = d.random_hermitian(&mut rng);
            let e = a.hermitian_eigen(1e-9).unwrap();
            let mut worst = 0.0f64;
            for (k, u) in e.unitaries.iter().enumerate() {
                let n = u.rows();
                let mut dm = CMatrix::zeros(n, n);
                for (i, &l) in e.spectrum.per_block[k].iter().enumerate() {
                    dm.set(i, i, c(l, 0.0));
                }
                let rec = u.matmul(&dm).matmul(&u.adjoint());
                worst = worst.max(rec.sub(&a.blocks()[k]).max_abs());
            }
            assert!(worst <= 1e-10 * rel(a.norm()), "reconstruction {worst}");
        }
    }

    #[test]
    fn element_json_roundtrip() {
        let d = desc("M2+C");
        let mut rng = trial_rng(12, 0);
        let a = d.random_element(&mut rng);
        let j = a.to_json();
        let b = AlgElement::from_json(&d, &j).unwrap();
        assert_eq!(a, b);
        assert!(AlgElement::from_json(&desc("M3"), &j).is_err());
    }
}
