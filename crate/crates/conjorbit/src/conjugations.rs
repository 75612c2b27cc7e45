//! Conjugations and antilinear operator algebra.
//!
//! A conjugation is an antilinear, isometric involution `C`.  In coordinates
//! every conjugation factors through entrywise conjugation as
//! `C x = S·conj(x)` with `S` a *symmetric unitary* matrix, and the whole
//! calculus happens on factors:
//!
//! - composing two conjugations gives the **linear** map `S₁·conj(S₂)`;
//! - the adjoint of an antilinear operator with factor `N` has factor `Nᵗ`;
//! - `S = W Wᵗ` (Takagi) recovers an orthonormal basis fixed by `C`
//!   pointwise — the *C-real* basis — as the columns of `W`.
//!
//! Takagi factorization of a symmetric unitary is computed from the real
//! decomposition `S = A + iB`: unitarity plus symmetry force `A, B` to be
//! real symmetric and commuting, so a joint real diagonalization
//! `S = O·diag(μ_j)·Oᵗ` (with unimodular `μ_j`) exists and
//! `W = O·diag(μ_j^{1/2})` with the principal half-angle branch.

use crate::error::{Error, Result};
use crate::numerics::{cnorm, CMatrix, CVector, Complex64, RMatrix};

/// Antilinear isometric involution `x ↦ S·conj(x)` with `S` symmetric unitary.
#[derive(Debug, Clone)]
pub struct Conjugation {
    factor: CMatrix,
}

impl Conjugation {
    /// Wrap a symmetric unitary factor, validating `‖S − Sᵗ‖_max ≤ tol` and
    /// `‖S*S − I‖_max ≤ tol`.
    pub fn from_symmetric(factor: CMatrix, tol: f64) -> Result<Conjugation> {
        if !factor.is_square() {
            return Err(Error::Dimension(format!(
                "conjugation factor is {}x{}, not square",
                factor.rows(),
                factor.cols()
            )));
        }
        let sym = factor.symmetry_residual();
        if sym > tol {
            return Err(Error::validation("factor symmetry", sym, tol));
        }
        let uni = crate::numerics::unitarity_residual(&factor);
        if uni > tol {
            return Err(Error::validation("factor unitarity", uni, tol));
        }
        Ok(Conjugation { factor })
    }

    /// The plain coordinatewise conjugation (`S = I`).
    pub fn plain(n: usize) -> Conjugation {
        Conjugation {
            factor: CMatrix::identity(n),
        }
    }

    /// Conjugation with a real Householder reflection factor
    /// `S = I − 2 v vᵗ / (vᵗv)`.  Errors on a zero vector.
    pub fn householder_real(v: &[f64]) -> Result<Conjugation> {
        let n = v.len();
        let nv2: f64 = v.iter().map(|a| a * a).sum();
        if nv2 <= 0.0 {
            return Err(Error::Domain(
                "householder_real: zero direction vector".into(),
            ));
        }
        let s = CMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { 1.0 } else { 0.0 };
            Complex64::new(d - 2.0 * v[i] * v[j] / nv2, 0.0)
        });
        Conjugation::from_symmetric(s, 1e-12)
    }

    /// Conjugation permuting coordinates before conjugating:
    /// `C e_j = e_{σ(j)}`.  The factor is symmetric — hence a valid
    /// conjugation — exactly when `σ` is an involution; other permutations
    /// are rejected by the symmetry validation.
    pub fn permutation(sigma: &[usize]) -> Result<Conjugation> {
        let n = sigma.len();
        let mut seen = vec![false; n];
        for &s in sigma {
            if s >= n || seen[s] {
                return Err(Error::Domain(format!(
                    "permutation: {sigma:?} is not a permutation of 0..{n}"
                )));
            }
            seen[s] = true;
        }
        let p = CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(if sigma[j] == i { 1.0 } else { 0.0 }, 0.0)
        });
        Conjugation::from_symmetric(p, 1e-12)
    }

    /// The symmetric unitary factor `S`.
    pub fn factor(&self) -> &CMatrix {
        &self.factor
    }

    pub fn dim(&self) -> usize {
        self.factor.rows()
    }

    /// Apply the conjugation: `C x = S·conj(x)`.
    pub fn apply(&self, x: &[Complex64]) -> CVector {
        let xb: CVector = x.iter().map(|z| z.conj()).collect();
        self.factor.matvec(&xb)
    }

    /// Residual of the involution identity `C² = I`, i.e.
    /// `‖S·conj(S) − I‖_max`.
    pub fn involution_residual(&self) -> f64 {
        let n = self.dim();
        self.factor
            .matmul(&self.factor.conj())
            .max_abs_diff(&CMatrix::identity(n))
    }
}

/// Haar-seeded random conjugation: `S = W Wᵗ` for a Haar unitary `W` drawn
/// from the given seed.  `S` is symmetric and unitary by construction.
pub fn random_conjugation(n: usize, seed: u64) -> Conjugation {
    let w = crate::numerics::haar_unitary(n, seed);
    let s = w.matmul(&w.transpose());
    Conjugation::from_symmetric(s, 1e-8 * (n as f64).max(1.0))
        .expect("W·Wᵗ of a Haar unitary must be a symmetric unitary")
}

/// Takagi factorization of a symmetric unitary: returns unitary `W` with
/// `W Wᵗ = S` (residual ≤ 1e-9 guaranteed, else a convergence error).
///
/// Writes `S = A + iB`; `SS̄ = I` and `Sᵗ = S` force `A, B` real symmetric
/// with `A² + B² = I`, `AB = BA`.  A joint real diagonalization gives
/// `S = O·diag(μ_j)·Oᵗ` with `|μ_j| = 1`, and `W = O·diag(μ_j^{1/2})` with
/// the principal half-angle `arg(μ)/2 ∈ (−π/2, π/2]`.
pub fn takagi_symmetric_unitary(s: &CMatrix, tol: f64) -> Result<CMatrix> {
    if !s.is_square() {
        return Err(Error::Dimension(format!(
            "takagi: matrix is {}x{}, not square",
            s.rows(),
            s.cols()
        )));
    }
    let sym = s.symmetry_residual();
    if sym > tol {
        return Err(Error::validation("symmetry", sym, tol));
    }
    let uni = crate::numerics::unitarity_residual(s);
    if uni > tol {
        return Err(Error::validation("unitarity", uni, tol));
    }
    let n = s.rows();
    let a = s.real_part();
    let b = s.imag_part();

    // Joint diagonalization: eigenbasis of A, then B compressed to each
    // A-eigenvalue cluster (gap ≤ 1e-8) and diagonalized there.
    let (avals, mut o) = a.sym_eig()?;
    let mut bvals = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && avals[j] - avals[j - 1] <= 1e-8 {
            j += 1;
        }
        let m = j - i;
        let cols: Vec<Vec<f64>> = (i..j).map(|c| (0..n).map(|r| o.get(r, c)).collect()).collect();
        let bcols: Vec<Vec<f64>> = cols.iter().map(|c| b.matvec(c)).collect();
        if m == 1 {
            bvals[i] = cols[0].iter().zip(&bcols[0]).map(|(x, y)| x * y).sum();
        } else {
            let mut block = RMatrix::from_fn(m, m, |p, q| {
                cols[p].iter().zip(&bcols[q]).map(|(x, y)| x * y).sum()
            });
            for p in 0..m {
                for q in (p + 1)..m {
                    let v = 0.5 * (block.get(p, q) + block.get(q, p));
                    block.set(p, q, v);
                    block.set(q, p, v);
                }
            }
            let (bv, w) = block.sym_eig()?;
            for (t, val) in bv.iter().enumerate() {
                bvals[i + t] = *val;
                let mut newcol = vec![0.0; n];
                for (sc, col) in cols.iter().enumerate() {
                    let ws = w.get(sc, t);
                    for r in 0..n {
                        newcol[r] += ws * col[r];
                    }
                }
                for r in 0..n {
                    o.set(r, i + t, newcol[r]);
                }
            }
        }
        i = j;
    }

    // μ_j = a_j + i·b_j must be unimodular; take the principal square root.
    let mut w = CMatrix::zeros(n, n);
    for j in 0..n {
        let mu = Complex64::new(avals[j], bvals[j]);
        if (mu.norm() - 1.0).abs() > 1e-7 {
            return Err(Error::Convergence(format!(
                "takagi: joint eigenvalue {mu} is not unimodular"
            )));
        }
        let half = Complex64::from_polar(mu.norm().sqrt(), 0.5 * mu.arg());
        for r in 0..n {
            w.set(r, j, half * o.get(r, j));
        }
    }
    let resid = w.matmul(&w.transpose()).max_abs_diff(s);
    if resid > 1e-9 {
        return Err(Error::Convergence(format!(
            "takagi: ‖WWᵗ − S‖_max = {resid:.3e} exceeds 1e-9"
        )));
    }
    Ok(w)
}

/// Orthonormal basis fixed pointwise by the conjugation: the columns of the
/// Takagi factor `W` of `S` satisfy `C w_j = w_j` (residual ≤ 1e-9 checked
/// per column before returning).
pub fn c_real_basis(c: &Conjugation) -> Result<CMatrix> {
    let w = takagi_symmetric_unitary(c.factor(), 1e-8)?;
    for j in 0..w.cols() {
        let col = w.column(j);
        let fixed = c.apply(&col);
        let resid = crate::numerics::vec_max_abs_diff(&fixed, &col);
        if resid > 1e-9 {
            return Err(Error::Convergence(format!(
                "c_real_basis: column {j} moved by {resid:.3e} under C"
            )));
        }
    }
    Ok(w)
}

/// The composition `C₁∘C₂` of two conjugations is **linear**; its matrix is
/// `S₁·conj(S₂)`.
pub fn compose_conjugations(c1: &Conjugation, c2: &Conjugation) -> Result<CMatrix> {
    if c1.dim() != c2.dim() {
        return Err(Error::Dimension(format!(
            "compose: dimensions {} vs {}",
            c1.dim(),
            c2.dim()
        )));
    }
    Ok(c1.factor().matmul(&c2.factor().conj()))
}

/// Antilinear operator `x ↦ N·conj(x)` with arbitrary factor `N`.
#[derive(Debug, Clone)]
pub struct AntilinearOp {
    factor: CMatrix,
}

impl AntilinearOp {
    pub fn new(factor: CMatrix) -> AntilinearOp {
        AntilinearOp { factor }
    }

    pub fn factor(&self) -> &CMatrix {
        &self.factor
    }

    pub fn dim_out(&self) -> usize {
        self.factor.rows()
    }

    pub fn dim_in(&self) -> usize {
        self.factor.cols()
    }

    pub fn apply(&self, x: &[Complex64]) -> CVector {
        let xb: CVector = x.iter().map(|z| z.conj()).collect();
        self.factor.matvec(&xb)
    }

    /// Adjoint with respect to `⟨A x, y⟩ = ⟨A⋆ y, x⟩`: the factor transposes
    /// (not conjugate-transposes).
    pub fn star(&self) -> AntilinearOp {
        AntilinearOp {
            factor: self.factor.transpose(),
        }
    }
}

/// Real-linear operator `x ↦ P x + Q·conj(x)`: the general additive map that
/// is only ℝ-linear, split into its complex-linear and antilinear parts.
#[derive(Debug, Clone)]
pub struct RealLinearOp {
    linear: CMatrix,
    antilinear: CMatrix,
}

impl RealLinearOp {
    pub fn new(linear: CMatrix, antilinear: CMatrix) -> Result<RealLinearOp> {
        if linear.rows() != antilinear.rows() || linear.cols() != antilinear.cols() {
            return Err(Error::Dimension(format!(
                "real-linear op parts {}x{} vs {}x{}",
                linear.rows(),
                linear.cols(),
                antilinear.rows(),
                antilinear.cols()
            )));
        }
        Ok(RealLinearOp { linear, antilinear })
    }

    /// Recover the split from a black-box ℝ-linear action on ℂⁿ:
    /// `P e_j = (f(e_j) − i·f(i e_j))/2`, `Q e_j = (f(e_j) + i·f(i e_j))/2`.
    pub fn from_action(n: usize, mut f: impl FnMut(&[Complex64]) -> CVector) -> RealLinearOp {
        let mut p = CMatrix::zeros(n, n);
        let mut q = CMatrix::zeros(n, n);
        let i_unit = Complex64::new(0.0, 1.0);
        for j in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            let fe = f(&e);
            e[j] = i_unit;
            let fie = f(&e);
            for r in 0..n {
                p.set(r, j, 0.5 * (fe[r] - i_unit * fie[r]));
                q.set(r, j, 0.5 * (fe[r] + i_unit * fie[r]));
            }
        }
        RealLinearOp {
            linear: p,
            antilinear: q,
        }
    }

    pub fn linear_factor(&self) -> &CMatrix {
        &self.linear
    }

    pub fn antilinear_factor(&self) -> &CMatrix {
        &self.antilinear
    }

    pub fn apply(&self, x: &[Complex64]) -> CVector {
        let mut out = self.linear.matvec(x);
        let xb: CVector = x.iter().map(|z| z.conj()).collect();
        let anti = self.antilinear.matvec(&xb);
        for (o, a) in out.iter_mut().zip(anti) {
            *o += a;
        }
        out
    }

    /// Adjoint with respect to the real inner product `Re⟨·,·⟩`: linear part
    /// `P*`, antilinear part `Qᵗ`.
    pub fn dagger(&self) -> RealLinearOp {
        RealLinearOp {
            linear: self.linear.adjoint(),
            antilinear: self.antilinear.transpose(),
        }
    }
}

/// Split a real-linear operator into `(complex-linear matrix, antilinear
/// part, real adjoint)`.
pub fn real_linear_parts(a: &RealLinearOp) -> (CMatrix, AntilinearOp, RealLinearOp) {
    (
        a.linear_factor().clone(),
        AntilinearOp::new(a.antilinear_factor().clone()),
        a.dagger(),
    )
}

/// Norm-preservation check used in tests and the verification suite:
/// largest deviation of `‖C x‖` from `‖x‖` over seeded probe vectors.
pub fn isometry_residual(c: &Conjugation, probes: usize, seed: u64) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..probes {
        let x = random_cvector(c.dim(), seed.wrapping_add(k as u64));
        let cx = c.apply(&x);
        worst = worst.max((cnorm(&cx) - cnorm(&x)).abs());
    }
    worst
}

/// Seeded complex probe vector (uniform box entries), for residual checks.
pub fn random_cvector(n: usize, seed: u64) -> CVector {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect()
}
