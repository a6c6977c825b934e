//! Dense complex linear algebra on small matrices.
//!
//! Everything downstream (algebra elements, module bases, operators) reduces
//! to computations on `CMatrix`: products, LU solves with partial pivoting,
//! rank/kernel by row reduction, Gram-Schmidt, and a cyclic Jacobi
//! eigensolver for Hermitian matrices.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = Complex64::new(0.0, 0.0);
pub const ONE: C64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        assert_eq!(col.len(), self.rows);
        for (i, v) in col.iter().enumerate() {
            self.set(i, j, *v);
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "apply shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(ZERO, |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).fold(ZERO, |a, b| a + b)
    }

    /// How far the matrix is from its own conjugate transpose.
    pub fn hermitian_defect(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    /// Flatten to a single vector (row-major), for span computations on
    /// operators.
    pub fn vectorize(&self) -> Vec<C64> {
        self.data.clone()
    }

    pub fn from_vectorized(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        CMatrix { rows, cols, data }
    }
}

// ---------------------------------------------------------------------------
// vector helpers

pub fn vec_dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

pub fn vec_norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[C64], k: C64) -> Vec<C64> {
    a.iter().map(|x| x * k).collect()
}

pub fn vec_axpy(y: &mut [C64], k: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += k * xi;
    }
}

// ---------------------------------------------------------------------------
// LU with partial pivoting

/// LU factorization with partial pivoting of a square matrix.
pub struct LuFactors {
    lu: CMatrix,
    perm: Vec<usize>,
    singular: bool,
}

impl LuFactors {
    pub fn factor(a: &CMatrix) -> LuFactors {
        assert_eq!(a.rows, a.cols, "LU needs a square matrix");
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs().max(1.0);
        let mut singular = false;
        for k in 0..n {
            // pivot search on column k
            let mut best = k;
            let mut best_val = lu.get(k, k).norm();
            for i in (k + 1)..n {
                let v = lu.get(i, k).norm();
                if v > best_val {
                    best = i;
                    best_val = v;
                }
            }
            if best_val <= 1e-14 * scale {
                singular = true;
                continue;
            }
            if best != k {
                perm.swap(k, best);
                for j in 0..n {
                    let tmp = lu.get(k, j);
                    lu.set(k, j, lu.get(best, j));
                    lu.set(best, j, tmp);
                }
            }
            let pivot = lu.get(k, k);
            for i in (k + 1)..n {
                let factor = lu.get(i, k) / pivot;
                lu.set(i, k, factor);
                for j in (k + 1)..n {
                    let v = lu.get(i, j) - factor * lu.get(k, j);
                    lu.set(i, j, v);
                }
            }
        }
        LuFactors { lu, perm, singular }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        if self.singular {
            return Err(CoreError::Internal(
                "singular linear system in LU solve".into(),
            ));
        }
        let n = self.lu.rows;
        assert_eq!(rhs.len(), n);
        // forward substitution on permuted rhs
        let mut y = vec![ZERO; n];
        for i in 0..n {
            let mut acc = rhs[self.perm[i]];
            for j in 0..i {
                acc -= self.lu.get(i, j) * y[j];
            }
            y[i] = acc;
        }
        // back substitution
        let mut x = vec![ZERO; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in (i + 1)..n {
                acc -= self.lu.get(i, j) * x[j];
            }
            x[i] = acc / self.lu.get(i, i);
        }
        Ok(x)
    }
}

// ---------------------------------------------------------------------------
// rank / kernel / span

/// Row-reduce a copy of `m`, returning (reduced matrix, pivot columns).
/// `eps` is the absolute pivot threshold; callers should scale it.
fn row_echelon(m: &CMatrix, eps: f64) -> (CMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row >= a.rows {
            break;
        }
        let mut best = row;
        let mut best_val = a.get(row, col).norm();
        for i in (row + 1)..a.rows {
            let v = a.get(i, col).norm();
            if v > best_val {
                best = i;
                best_val = v;
            }
        }
        if best_val <= eps {
            for i in row..a.rows {
                a.set(i, col, ZERO);
            }
            continue;
        }
        if best != row {
            for j in 0..a.cols {
                let tmp = a.get(row, j);
                a.set(row, j, a.get(best, j));
                a.set(best, j, tmp);
            }
        }
        let pivot = a.get(row, col);
        for j in 0..a.cols {
            a.set(row, j, a.get(row, j) / pivot);
        }
        for i in 0..a.rows {
            if i != row {
                let factor = a.get(i, col);
                if factor != ZERO {
                    for j in 0..a.cols {
                        let v = a.get(i, j) - factor * a.get(row, j);
                        a.set(i, j, v);
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Numerical rank with threshold relative to the largest entry.
pub fn rank(m: &CMatrix, rel_eps: f64) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let eps = rel_eps * m.max_abs().max(1.0);
    row_echelon(m, eps).1.len()
}

/// Basis of the (right) kernel {x : m x = 0}.
pub fn kernel_basis(m: &CMatrix, rel_eps: f64) -> Vec<Vec<C64>> {
    if m.cols == 0 {
        return Vec::new();
    }
    if m.rows == 0 {
        return (0..m.cols)
            .map(|j| {
                let mut v = vec![ZERO; m.cols];
                v[j] = ONE;
                v
            })
            .collect();
    }
    let eps = rel_eps * m.max_abs().max(1.0);
    let (red, pivots) = row_echelon(m, eps);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![ZERO; m.cols];
        v[f] = ONE;
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -red.get(r, f);
        }
        basis.push(v);
    }
    basis
}

/// Gram-Schmidt with one re-orthogonalization pass. Returns an orthonormal
/// basis of the span; vectors whose residual falls below
/// `rel_eps * max(1, ||v||)` are dropped as dependent.
pub fn orthonormal_span(vectors: &[Vec<C64>], rel_eps: f64) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        let scale = vec_norm(v).max(1.0);
        let mut w = v.clone();
        for _pass in 0..2 {
            for b in &basis {
                let c = vec_dot(b, &w);
                vec_axpy(&mut w, -c, b);
            }
        }
        let n = vec_norm(&w);
        if n > rel_eps * scale {
            let inv = C64::new(1.0 / n, 0.0);
            basis.push(vec_scale(&w, inv));
        }
    }
    basis
}

/// Residual (in 2-norm) of `v` after projecting onto an orthonormal basis.
pub fn projection_residual(v: &[C64], basis: &[Vec<C64>]) -> f64 {
    let mut w = v.to_vec();
    for _pass in 0..2 {
        for b in basis {
            let c = vec_dot(b, &w);
            vec_axpy(&mut w, -c, b);
        }
    }
    vec_norm(&w)
}

/// Coefficients of the orthogonal projection of `v` onto an orthonormal basis.
pub fn projection_coefficients(v: &[C64], basis: &[Vec<C64>]) -> Vec<C64> {
    basis.iter().map(|b| vec_dot(b, v)).collect()
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver for Hermitian matrices

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-13;

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and a unitary whose columns are
/// the matching eigenvectors, so `a = v * diag(lambda) * v^H`. Convergence:
/// off-diagonal Frobenius mass below `1e-13 * max(1, ||a||_F)`; errors out
/// after 100 sweeps.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    assert_eq!(a.rows, a.cols, "eigen needs a square matrix");
    let n = a.rows;
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let scale = a.frobenius().max(1.0);
    let mut m = a.clone();
    let mut v = CMatrix::identity(n);

    let off = |m: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off(&m) <= JACOBI_OFF_TOL * scale {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r; // e^{i phi}
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rotation acting on columns/rows p and q:
                //   R[p][p] = c, R[p][q] = s*phase,
                //   R[q][p] = -s*conj(phase), R[q][q] = c
                let sp = C64::new(s, 0.0) * phase;
                let spc = C64::new(s, 0.0) * phase.conj();
                // m <- R^H m R; update rows p,q then columns p,q
                for j in 0..n {
                    let mpj = m.get(p, j);
                    let mqj = m.get(q, j);
                    m.set(p, j, mpj * c - spc.conj() * mqj);
                    m.set(q, j, sp.conj() * mpj + mqj * c);
                }
                for i in 0..n {
                    let mip = m.get(i, p);
                    let miq = m.get(i, q);
                    m.set(i, p, mip * c - spc * miq);
                    m.set(i, q, sp * mip + miq * c);
                }
                // accumulate eigenvectors: v <- v R
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * c - spc * viq);
                    v.set(i, q, sp * vip + viq * c);
                }
            }
        }
    }
    if !converged && off(&m) > JACOBI_OFF_TOL * scale {
        return Err(CoreError::Internal(format!(
            "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps \
             (off-diagonal mass {:.3e})",
            off(&m)
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let eigs: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| eigs[j].partial_cmp(&eigs[i]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| eigs[i]).collect();
    let mut vs = CMatrix::zeros(n, n);
    for (new_j, &old_j) in order.iter().enumerate() {
        vs.set_column(new_j, &v.column(old_j));
    }
    Ok((sorted, vs))
}

/// Largest singular value via the Hermitian eigenproblem on `m^H m`.
pub fn largest_singular_value(m: &CMatrix) -> Result<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Ok(0.0);
    }
    let gram = m.adjoint().matmul(m);
    let (eigs, _) = hermitian_eigen(&gram)?;
    Ok(eigs.first().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Top eigenvector of `m^H m`, i.e. the right singular vector for the
/// largest singular value.
pub fn top_right_singular_vector(m: &CMatrix) -> Result<Vec<C64>> {
    let gram = m.adjoint().matmul(m);
    let (_, v) = hermitian_eigen(&gram)?;
    Ok(v.column(0))
}
