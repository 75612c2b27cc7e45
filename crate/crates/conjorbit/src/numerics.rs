//! Dense complex/real matrices and the numerical kernels the rest of the
//! crate is built on: a cyclic Jacobi eigensolver (complex Hermitian and real
//! symmetric), an eigendecomposition for unitary matrices via the commuting
//! Hermitian pair `(U + U*)/2`, `(U − U*)/2i`, and Haar-distributed unitary
//! sampling from a seeded counter-based stream.
//!
//! Matrices are stored row-major.  Everything here is deterministic: sweep
//! orders are fixed and random sampling is reproducible from the seed alone.

use crate::error::{Error, Result};

pub use num_complex::Complex64;

/// Complex column vector.
pub type CVector = Vec<Complex64>;

/// Default entrywise tolerance for unitarity/symmetry validations.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 60;

/// Inner product `⟨x, y⟩ = Σ conj(x_i) y_i` (antilinear in the first slot).
pub fn cdot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    assert_eq!(x.len(), y.len(), "cdot: length mismatch");
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Euclidean norm of a complex vector.
pub fn cnorm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise modulus of the difference of two vectors.
pub fn vec_max_abs_diff(x: &[Complex64], y: &[Complex64]) -> f64 {
    assert_eq!(x.len(), y.len(), "vec_max_abs_diff: length mismatch");
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build a matrix from an entry function `(i, j) -> value`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from row-major entry data.
    pub fn from_data(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "from_data: shape mismatch");
        CMatrix { rows, cols, data }
    }

    /// Diagonal matrix with the given diagonal entries.
    pub fn diagonal(d: &[Complex64]) -> Self {
        let n = d.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Lift a real matrix to a complex one.
    pub fn from_real(r: &RMatrix) -> Self {
        CMatrix::from_fn(r.rows(), r.cols(), |i, j| Complex64::new(r.get(i, j), 0.0))
    }

    /// Assemble from real and imaginary parts (same shape required).
    pub fn from_parts(re: &RMatrix, im: &RMatrix) -> Self {
        assert_eq!(re.rows(), im.rows(), "from_parts: row mismatch");
        assert_eq!(re.cols(), im.cols(), "from_parts: col mismatch");
        CMatrix::from_fn(re.rows(), re.cols(), |i, j| {
            Complex64::new(re.get(i, j), im.get(i, j))
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    /// Row-major entry slice.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
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

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul: inner dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> CVector {
        assert_eq!(self.cols, x.len(), "matvec: dimension mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * x[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn column(&self, j: usize) -> CVector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex64]) {
        assert_eq!(col.len(), self.rows, "set_column: length mismatch");
        for (i, &v) in col.iter().enumerate() {
            self.set(i, j, v);
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace: matrix not square");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn real_part(&self) -> RMatrix {
        RMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).re)
    }

    pub fn imag_part(&self) -> RMatrix {
        RMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).im)
    }

    /// Residual `‖self − selfᵗ‖_max` (0 for complex-symmetric matrices).
    pub fn symmetry_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut r: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                r = r.max((self.get(i, j) - self.get(j, i)).norm());
            }
        }
        r
    }
}

/// Dense real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = RMatrix::zeros(rows, cols);
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
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> RMatrix {
        RMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn add(&self, other: &RMatrix) -> RMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RMatrix {
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

    pub fn sub(&self, other: &RMatrix) -> RMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RMatrix {
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

    pub fn scale(&self, s: f64) -> RMatrix {
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn matmul(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.rows, "matmul: inner dimension mismatch");
        let mut out = RMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matvec: dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &RMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|a| a.abs()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix::from_real(self)
    }

    /// Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps.
    ///
    /// Returns `(eigenvalues ascending, orthogonal Q)` with `A = Q Λ Qᵗ`.
    /// Errors if the matrix is not square/symmetric or sweeps fail to
    /// converge.
    pub fn sym_eig(&self) -> Result<(Vec<f64>, RMatrix)> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "sym_eig: matrix is {}x{}, not square",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let scale = self.max_norm().max(1.0);
        let sym_res = self.sub(&self.transpose()).max_norm();
        if sym_res > 1e-10 * scale {
            return Err(Error::validation("real symmetry", sym_res, 1e-10 * scale));
        }
        let mut a = self.clone();
        // Work on the symmetrized copy so roundoff asymmetry cannot drift.
        for i in 0..n {
            for j in (i + 1)..n {
                let m = 0.5 * (a.get(i, j) + a.get(j, i));
                a.set(i, j, m);
                a.set(j, i, m);
            }
        }
        let mut q = RMatrix::identity(n);
        let target = 1e-14 * a.frobenius_norm().max(1.0);
        for _sweep in 0..MAX_JACOBI_SWEEPS {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += 2.0 * a.get(i, j) * a.get(i, j);
                }
            }
            if off.sqrt() <= target {
                let mut pairs: Vec<(f64, usize)> =
                    (0..n).map(|i| (a.get(i, i), i)).collect();
                pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
                let vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
                let qs = RMatrix::from_fn(n, n, |i, j| q.get(i, pairs[j].1));
                return Ok((vals, qs));
            }
            for p in 0..n {
                for r in (p + 1)..n {
                    let apr = a.get(p, r);
                    if apr.abs() <= 1e-300 {
                        continue;
                    }
                    let (c, s) = jacobi_cs(a.get(p, p), a.get(r, r), apr);
                    // Columns: col_p ← c·col_p − s·col_r ; col_r ← s·col_p + c·col_r
                    for i in 0..n {
                        let aip = a.get(i, p);
                        let air = a.get(i, r);
                        a.set(i, p, c * aip - s * air);
                        a.set(i, r, s * aip + c * air);
                    }
                    for j in 0..n {
                        let apj = a.get(p, j);
                        let arj = a.get(r, j);
                        a.set(p, j, c * apj - s * arj);
                        a.set(r, j, s * apj + c * arj);
                    }
                    let m = 0.5 * (a.get(p, r) + a.get(r, p));
                    a.set(p, r, m);
                    a.set(r, p, m);
                    for i in 0..n {
                        let qip = q.get(i, p);
                        let qir = q.get(i, r);
                        q.set(i, p, c * qip - s * qir);
                        q.set(i, r, s * qip + c * qir);
                    }
                }
            }
        }
        Err(Error::Convergence(
            "real Jacobi sweeps exhausted without reaching the off-diagonal target".into(),
        ))
    }
}

/// Classic Jacobi rotation choice zeroing the (p,r) entry of
/// `[[app, apr], [apr, arr]]`: returns `(c, s)` with `c² + s² = 1`.
fn jacobi_cs(app: f64, arr: f64, apr: f64) -> (f64, f64) {
    let tau = (arr - app) / (2.0 * apr);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

/// Eigendecomposition of a unitary matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Unimodular eigenvalues, sorted by principal angle.
    pub eigenvalues: Vec<Complex64>,
    /// Orthonormal eigenvector columns, aligned with `eigenvalues`.
    pub eigenvectors: CMatrix,
}

/// Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi sweeps
/// (a unimodular phase rotation realigns each pivot to the real case).
///
/// Returns `(eigenvalues ascending, unitary Q)` with `A = Q Λ Q*`.
pub fn hermitian_eig(a0: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !a0.is_square() {
        return Err(Error::Dimension(format!(
            "hermitian_eig: matrix is {}x{}, not square",
            a0.rows(),
            a0.cols()
        )));
    }
    let n = a0.rows();
    let scale = a0.max_norm().max(1.0);
    let herm_res = a0.sub(&a0.adjoint()).max_norm();
    if herm_res > 1e-10 * scale {
        return Err(Error::validation("hermiticity", herm_res, 1e-10 * scale));
    }
    let mut a = a0.clone();
    for i in 0..n {
        let d = a.get(i, i);
        a.set(i, i, Complex64::new(d.re, 0.0));
        for j in (i + 1)..n {
            let m = 0.5 * (a.get(i, j) + a.get(j, i).conj());
            a.set(i, j, m);
            a.set(j, i, m.conj());
        }
    }
    let mut q = CMatrix::identity(n);
    let target = 1e-14 * a.frobenius_norm().max(1.0);
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += 2.0 * a.get(i, j).norm_sqr();
            }
        }
        if off.sqrt() <= target {
            let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a.get(i, i).re, i)).collect();
            pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            let vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let qs = CMatrix::from_fn(n, n, |i, j| q.get(i, pairs[j].1));
            return Ok((vals, qs));
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = a.get(p, r);
                let mag = apr.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // Phase e^{iφ} of the pivot; D = diag(1, e^{−iφ}) makes the
                // 2×2 core real, then a real rotation zeroes it.
                let phi = apr / mag;
                let (c, s) = jacobi_cs(a.get(p, p).re, a.get(r, r).re, mag);
                let se_m = s * phi.conj(); // s·e^{−iφ}
                let se_p = s * phi; // s·e^{+iφ}
                // A ← A·R with R = [[c, s], [−s·e^{−iφ}, c·e^{−iφ}]] on (p, r) …
                for i in 0..n {
                    let aip = a.get(i, p);
                    let air = a.get(i, r);
                    a.set(i, p, c * aip - se_m * air);
                    a.set(i, r, s * aip + c * phi.conj() * air);
                }
                // … then A ← R*·A.
                for j in 0..n {
                    let apj = a.get(p, j);
                    let arj = a.get(r, j);
                    a.set(p, j, c * apj - se_p * arj);
                    a.set(r, j, s * apj + c * phi * arj);
                }
                let d_p = a.get(p, p);
                let d_r = a.get(r, r);
                a.set(p, p, Complex64::new(d_p.re, 0.0));
                a.set(r, r, Complex64::new(d_r.re, 0.0));
                let m = 0.5 * (a.get(p, r) + a.get(r, p).conj());
                a.set(p, r, m);
                a.set(r, p, m.conj());
                for i in 0..n {
                    let qip = q.get(i, p);
                    let qir = q.get(i, r);
                    q.set(i, p, c * qip - se_m * qir);
                    q.set(i, r, s * qip + c * phi.conj() * qir);
                }
            }
        }
    }
    Err(Error::Convergence(
        "complex Jacobi sweeps exhausted without reaching the off-diagonal target".into(),
    ))
}

/// `true` when `‖U*U − I‖_max ≤ tol` and `U` is square.
pub fn unitary_check(u: &CMatrix, tol: f64) -> bool {
    u.is_square() && unitarity_residual(u) <= tol
}

/// Residual `‖U*U − I‖_max` (∞ for non-square input).
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.rows();
    u.adjoint().matmul(u).max_abs_diff(&CMatrix::identity(n))
}

/// Eigendecomposition of a unitary matrix.
///
/// `U` is split into the commuting Hermitian pair `H = (U + U*)/2`,
/// `K = (U − U*)/2i`; `H` is diagonalized by Jacobi sweeps, eigenvalue
/// clusters (gap ≤ 1e-8) are refined by diagonalizing `K` compressed to the
/// cluster, and the eigenvalues are reassembled as `λ = h + i·k`, sorted by
/// principal angle.
///
/// Errors on non-unitary input (`‖U*U − I‖_max > 1e-8`) or if the residual
/// guard `‖UQ − QΛ‖_max ≤ 1e-9·n` fails after convergence.
pub fn unitary_eig(u: &CMatrix) -> Result<EigenDecomposition> {
    let res = unitarity_residual(u);
    if res > 1e-8 {
        return Err(Error::validation("unitarity", res, 1e-8));
    }
    let n = u.rows();
    let ustar = u.adjoint();
    let h = u.add(&ustar).scale(Complex64::new(0.5, 0.0));
    let k = u.sub(&ustar).scale(Complex64::new(0.0, -0.5));
    let (hvals, mut q) = hermitian_eig(&h)?;

    let mut kvals = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && hvals[j] - hvals[j - 1] <= 1e-8 {
            j += 1;
        }
        let m = j - i;
        if m == 1 {
            let qi = q.column(i);
            kvals[i] = cdot(&qi, &k.matvec(&qi)).re;
        } else {
            // Compress K to the cluster's eigenspace and diagonalize there.
            let cols: Vec<CVector> = (i..j).map(|c| q.column(c)).collect();
            let kcols: Vec<CVector> = cols.iter().map(|c| k.matvec(c)).collect();
            let mut block = CMatrix::from_fn(m, m, |a, b| cdot(&cols[a], &kcols[b]));
            for a in 0..m {
                let d = block.get(a, a);
                block.set(a, a, Complex64::new(d.re, 0.0));
                for b in (a + 1)..m {
                    let v = 0.5 * (block.get(a, b) + block.get(b, a).conj());
                    block.set(a, b, v);
                    block.set(b, a, v.conj());
                }
            }
            let (bvals, w) = hermitian_eig(&block)?;
            for (t, bv) in bvals.iter().enumerate() {
                kvals[i + t] = *bv;
                let mut newcol = vec![Complex64::new(0.0, 0.0); n];
                for (s, col) in cols.iter().enumerate() {
                    let ws = w.get(s, t);
                    for r in 0..n {
                        newcol[r] += ws * col[r];
                    }
                }
                q.set_column(i + t, &newcol);
            }
        }
        i = j;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let angle = |idx: usize| Complex64::new(hvals[idx], kvals[idx]).arg();
    order.sort_by(|&a, &b| angle(a).partial_cmp(&angle(b)).unwrap());
    let eigenvalues: Vec<Complex64> = order
        .iter()
        .map(|&idx| Complex64::new(hvals[idx], kvals[idx]))
        .collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| q.get(r, order[c]));

    let lam = CMatrix::diagonal(&eigenvalues);
    let guard = u
        .matmul(&eigenvectors)
        .max_abs_diff(&eigenvectors.matmul(&lam));
    let ortho = unitarity_residual(&eigenvectors);
    let limit = 1e-9 * (n as f64).max(1.0);
    if guard > limit || ortho > limit {
        return Err(Error::Convergence(format!(
            "unitary_eig residual guard failed: ‖UQ−QΛ‖={guard:.3e}, ‖Q*Q−I‖={ortho:.3e}, limit={limit:.3e}"
        )));
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Haar-distributed `n × n` unitary, reproducible from the seed.
///
/// Entries are filled with complex Gaussians (Box–Muller over a ChaCha8
/// stream) and orthonormalized by modified Gram–Schmidt with a
/// reorthogonalization pass.  MGS normalizes against a positive real `R`
/// diagonal, which is exactly the phase convention under which the `Q`
/// factor of a Gaussian matrix is Haar-distributed.
pub fn haar_unitary(n: usize, seed: u64) -> CMatrix {
    use rand::{Rng, SeedableRng};
    assert!(n > 0, "haar_unitary: dimension must be positive");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = || {
        let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
        let u2: f64 = rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let th = 2.0 * std::f64::consts::PI * u2;
        Complex64::new(r * th.cos(), r * th.sin())
    };
    let a = CMatrix::from_fn(n, n, |_, _| gauss());

    let mut cols: Vec<CVector> = (0..n).map(|j| a.column(j)).collect();
    for j in 0..n {
        let mut v = cols[j].clone();
        for _pass in 0..2 {
            for i in 0..j {
                let r = cdot(&cols[i], &v);
                for t in 0..n {
                    v[t] -= r * cols[i][t];
                }
            }
        }
        let nv = cnorm(&v);
        assert!(
            nv > 1e-12,
            "haar_unitary: Gaussian columns numerically dependent (norm {nv:.3e})"
        );
        for t in 0..n {
            v[t] /= nv;
        }
        cols[j] = v;
    }
    let mut q = CMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        q.set_column(j, col);
    }
    q
}

/// Distance between two angles as points on the circle, in `[0, π]`.
pub fn circle_angle_distance(a: f64, b: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut d = (a - b).rem_euclid(two_pi);
    if d > std::f64::consts::PI {
        d = two_pi - d;
    }
    d
}

/// `true` when the two unimodular multisets agree within the angular
/// tolerance: each value of `a` is greedily paired with the nearest unused
/// value of `b` on the circle.
pub fn spectra_match(a: &[Complex64], b: &[Complex64], tol_angle: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for za in a {
        let ta = za.arg();
        let mut best: Option<(usize, f64)> = None;
        for (j, zb) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = circle_angle_distance(ta, zb.arg());
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= tol_angle => used[j] = true,
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn seeded_complex_matrix(n: usize, seed: u64) -> CMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        })
    }

    #[test]
    fn matmul_identity_and_adjoint_roundtrip() {
        let a = seeded_complex_matrix(7, 1);
        let i = CMatrix::identity(7);
        assert!(a.matmul(&i).max_abs_diff(&a) == 0.0);
        assert!(i.matmul(&a).max_abs_diff(&a) == 0.0);
        assert!(a.adjoint().adjoint().max_abs_diff(&a) == 0.0);
        assert!(a.transpose().conj().max_abs_diff(&a.adjoint()) == 0.0);
    }

    #[test]
    fn real_sym_eig_reconstructs() {
        let n = 10;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = RMatrix::from_fn(n, n, |_, _| rng.gen::<f64>() - 0.5);
        let a = g.add(&g.transpose()).scale(0.5);
        let (vals, q) = a.sym_eig().expect("sym_eig");
        for w in vals.windows(2) {
            assert!(w[0] <= w[1], "eigenvalues not ascending");
        }
        let lam = RMatrix::from_fn(n, n, |i, j| if i == j { vals[i] } else { 0.0 });
        let rec = q.matmul(&lam).matmul(&q.transpose());
        assert!(
            rec.max_abs_diff(&a) < 1e-12,
            "reconstruction residual {}",
            rec.max_abs_diff(&a)
        );
        let qtq = q.transpose().matmul(&q);
        assert!(qtq.max_abs_diff(&RMatrix::identity(n)) < 1e-13);
    }

    #[test]
    fn hermitian_eig_reconstructs() {
        let n = 12;
        let g = seeded_complex_matrix(n, 11);
        let a = g.add(&g.adjoint()).scale(Complex64::new(0.5, 0.0));
        let (vals, q) = hermitian_eig(&a).expect("hermitian_eig");
        let lam = CMatrix::diagonal(&vals.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>());
        let rec = q.matmul(&lam).matmul(&q.adjoint());
        assert!(
            rec.max_abs_diff(&a) < 1e-11,
            "reconstruction residual {}",
            rec.max_abs_diff(&a)
        );
        assert!(unitarity_residual(&q) < 1e-12, "Q not unitary");
    }

    #[test]
    fn hermitian_eig_rejects_non_hermitian() {
        let a = seeded_complex_matrix(4, 3);
        assert!(matches!(
            hermitian_eig(&a),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn haar_unitary_is_unitary_and_deterministic() {
        for n in [1, 2, 3, 5, 8] {
            for seed in [0u64, 1, 99] {
                let u = haar_unitary(n, seed);
                assert!(
                    unitary_check(&u, 1e-10),
                    "n={n} seed={seed} residual {}",
                    unitarity_residual(&u)
                );
            }
        }
        let u1 = haar_unitary(6, 42);
        let u2 = haar_unitary(6, 42);
        assert_eq!(u1, u2, "same seed must reproduce bitwise");
        let u3 = haar_unitary(6, 43);
        assert!(u1.max_abs_diff(&u3) > 1e-3, "different seeds must differ");
    }

    #[test]
    fn haar_trace_second_moment_is_one() {
        // For Haar measure E|tr U|² = 1; 300 seeded draws at n = 6 give a
        // standard error ≈ 1/√300 ≈ 0.06, well inside the ±0.15 band.
        let n = 6;
        let reps = 300;
        let mut acc = 0.0;
        for s in 0..reps {
            let u = haar_unitary(n, 12345 + s as u64);
            acc += u.trace().norm_sqr();
        }
        let avg = acc / reps as f64;
        assert!(
            (avg - 1.0).abs() < 0.15,
            "E|tr U|² estimate {avg} outside 1 ± 0.15"
        );
    }

    #[test]
    fn unitary_eig_diagonal_input() {
        let angles = [0.3, 1.7, -2.2, 2.9];
        let d: Vec<Complex64> = angles
            .iter()
            .map(|&t| Complex64::from_polar(1.0, t))
            .collect();
        let u = CMatrix::diagonal(&d);
        let eig = unitary_eig(&u).expect("unitary_eig");
        assert!(spectra_match(&eig.eigenvalues, &d, 1e-12));
        let lam = CMatrix::diagonal(&eig.eigenvalues);
        let resid = u
            .matmul(&eig.eigenvectors)
            .max_abs_diff(&eig.eigenvectors.matmul(&lam));
        assert!(resid < 1e-12, "residual {resid}");
    }

    #[test]
    fn unitary_eig_haar_input() {
        let n = 16;
        let u = haar_unitary(n, 2024);
        let eig = unitary_eig(&u).expect("unitary_eig");
        let lam = CMatrix::diagonal(&eig.eigenvalues);
        let resid = u
            .matmul(&eig.eigenvectors)
            .max_abs_diff(&eig.eigenvectors.matmul(&lam));
        assert!(resid < 1e-9 * n as f64, "residual {resid}");
        assert!(unitarity_residual(&eig.eigenvectors) < 1e-9 * n as f64);
        for lam in &eig.eigenvalues {
            assert!((lam.norm() - 1.0).abs() < 1e-9, "non-unimodular {lam}");
        }
    }

    #[test]
    fn unitary_eig_resolves_conjugate_pair_collision() {
        // e^{iθ} and e^{−iθ} share the same real part, so the first Jacobi
        // stage sees a genuine eigenvalue cluster that only the skew stage
        // can split.
        let th = 1.234;
        let d = vec![
            Complex64::from_polar(1.0, th),
            Complex64::from_polar(1.0, -th),
            Complex64::new(1.0, 0.0),
        ];
        let w = haar_unitary(3, 77);
        let u = w.matmul(&CMatrix::diagonal(&d)).matmul(&w.adjoint());
        let eig = unitary_eig(&u).expect("unitary_eig");
        assert!(
            spectra_match(&eig.eigenvalues, &d, 1e-9),
            "spectrum {:?} does not match {:?}",
            eig.eigenvalues,
            d
        );
    }

    #[test]
    fn unitary_eig_identity_cluster() {
        let u = CMatrix::identity(4);
        let eig = unitary_eig(&u).expect("unitary_eig");
        for lam in &eig.eigenvalues {
            assert!((lam - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        assert!(unitarity_residual(&eig.eigenvectors) < 1e-12);
    }

    #[test]
    fn unitary_eig_rejects_non_unitary() {
        let a = seeded_complex_matrix(5, 9);
        assert!(matches!(unitary_eig(&a), Err(Error::Validation { .. })));
    }

    #[test]
    fn spectra_match_handles_wraparound() {
        let eps = 1e-12;
        let a = vec![Complex64::from_polar(1.0, std::f64::consts::PI - eps)];
        let b = vec![Complex64::from_polar(1.0, -std::f64::consts::PI + eps)];
        assert!(spectra_match(&a, &b, 1e-8), "wraparound pair must match");
        let c = vec![Complex64::from_polar(1.0, 1.0)];
        assert!(!spectra_match(&a, &c, 1e-8));
        assert!(!spectra_match(&a, &[], 1e-8));
    }
}
