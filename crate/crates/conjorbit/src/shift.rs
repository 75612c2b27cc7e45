//! The bilateral-shift lattice on a finite index window.
//!
//! The bilateral shift `M e_j = e_{j+1}` is modeled on the window
//! `j ∈ [−N, N]`.  A conjugation factor `V` (symmetric, columns orthonormal
//! where untruncated) produces the orbit member `W = (VJ)M(VJ)`, which acts
//! as a shift on the conjugated basis: `W v_j = v_{j+1}` for `v_j = V e_j`.
//! Truncation at the window edge cannot pollute these identities on a *core*
//! of indices recorded per operator: a factor of bandwidth `b` keeps
//! `|j| ≤ N − 2b` clean, and the index flip — unbanded but displacement-free
//! — keeps `|j| ≤ N − 2`.
//!
//! Also here: banded Toeplitz windows (which commute with the shift exactly
//! on the core — the commutant side of the picture), the half-circle symbol
//! coefficients `2·sin(nπ/2)/(πn)`, and the unitary relabeling that
//! identifies the `k`-th power of the shift with a `k`-fold direct sum of
//! shifts (the wandering-subspace picture).

use crate::error::{Error, Result};
use crate::numerics::{cdot, CMatrix, CVector, Complex64};

/// Operator on the index window `[−N, N]`, stored dense with band metadata.
#[derive(Debug, Clone)]
pub struct WindowOp {
    half_width: i64,
    bandwidth: i64,
    core_radius: i64,
    matrix: CMatrix,
}

impl WindowOp {
    /// Wrap a `(2N+1)×(2N+1)` matrix whose support lies in the band
    /// `|i − j| ≤ b`; the core radius defaults to `N − 2b`.
    pub fn from_banded(half_width: i64, bandwidth: i64, matrix: CMatrix) -> Result<WindowOp> {
        let dim = (2 * half_width + 1) as usize;
        if half_width < 0 || matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::Dimension(format!(
                "window operator must be {dim}x{dim} for half-width {half_width}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let mut outside: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                if (i as i64 - j as i64).abs() > bandwidth {
                    outside = outside.max(matrix.get(i, j).norm());
                }
            }
        }
        if outside > 1e-14 {
            return Err(Error::validation("band support", outside, 1e-14));
        }
        Ok(WindowOp {
            half_width,
            bandwidth,
            core_radius: half_width - 2 * bandwidth,
            matrix,
        })
    }

    /// Wrap a matrix with explicit band/core metadata (for operators whose
    /// truncation-safe core is not governed by a small band, like the index
    /// flip).
    pub fn from_matrix_with_core(
        half_width: i64,
        bandwidth: i64,
        core_radius: i64,
        matrix: CMatrix,
    ) -> Result<WindowOp> {
        let dim = (2 * half_width + 1) as usize;
        if half_width < 0 || matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::Dimension(format!(
                "window operator must be {dim}x{dim} for half-width {half_width}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(WindowOp {
            half_width,
            bandwidth,
            core_radius,
            matrix,
        })
    }

    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    pub fn bandwidth(&self) -> i64 {
        self.bandwidth
    }

    /// Largest `|j|` for which composed shift identities are free of window
    /// truncation.
    pub fn core_radius(&self) -> i64 {
        self.core_radius
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        (2 * self.half_width + 1) as usize
    }

    /// Row/column position of window index `j ∈ [−N, N]`.
    pub fn idx(&self, j: i64) -> usize {
        assert!(
            j.abs() <= self.half_width,
            "index {j} outside window ±{}",
            self.half_width
        );
        (j + self.half_width) as usize
    }

    pub fn entry(&self, i: i64, j: i64) -> Complex64 {
        self.matrix.get(self.idx(i), self.idx(j))
    }

    /// The column at window index `j` (the image of `e_j`).
    pub fn column_of(&self, j: i64) -> CVector {
        self.matrix.column(self.idx(j))
    }

    pub fn apply(&self, x: &[Complex64]) -> CVector {
        self.matrix.matvec(x)
    }
}

/// Standard basis vector `e_j` on the window `[−N, N]`.
pub fn window_basis(half_width: i64, j: i64) -> CVector {
    let dim = (2 * half_width + 1) as usize;
    let mut e = vec![Complex64::new(0.0, 0.0); dim];
    e[(j + half_width) as usize] = Complex64::new(1.0, 0.0);
    e
}

/// The windowed bilateral shift `M e_j = e_{j+1}` (the `e_N` column is
/// truncated to zero).
pub fn window_shift(half_width: i64) -> WindowOp {
    let dim = (2 * half_width + 1) as usize;
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..dim - 1 {
        m.set(j + 1, j, Complex64::new(1.0, 0.0));
    }
    WindowOp::from_banded(half_width, 1, m).expect("shift is banded")
}

/// Identity factor (`V = I`).
pub fn identity_factor(half_width: i64) -> WindowOp {
    let dim = (2 * half_width + 1) as usize;
    WindowOp::from_banded(half_width, 0, CMatrix::identity(dim)).expect("identity is banded")
}

/// Diagonal unimodular factor `V e_j = ξ(j)·e_j`.
pub fn diagonal_factor(half_width: i64, mut xi: impl FnMut(i64) -> Complex64) -> WindowOp {
    let dim = (2 * half_width + 1) as usize;
    let mut m = CMatrix::zeros(dim, dim);
    for j in -half_width..=half_width {
        m.set(
            (j + half_width) as usize,
            (j + half_width) as usize,
            xi(j),
        );
    }
    WindowOp::from_banded(half_width, 0, m).expect("diagonal is banded")
}

/// The index flip `V e_j = e_{−j}` (Hankel pattern).  Not banded in
/// `|i − j|`, but displacement-free, so the composed-member identities stay
/// clean on `|j| ≤ N − 2`.
pub fn hankel_flip(half_width: i64) -> WindowOp {
    let dim = (2 * half_width + 1) as usize;
    let mut m = CMatrix::zeros(dim, dim);
    for j in -half_width..=half_width {
        m.set(
            (-j + half_width) as usize,
            (j + half_width) as usize,
            Complex64::new(1.0, 0.0),
        );
    }
    WindowOp::from_matrix_with_core(half_width, 2 * half_width, half_width - 2, m)
        .expect("flip shape")
}

/// Identity except for a real Householder reflection `I − 2vvᵗ/(vᵗv)` on the
/// index block starting at `start`.
pub fn householder_block_factor(half_width: i64, start: i64, v: &[f64]) -> Result<WindowOp> {
    let len = v.len() as i64;
    if start < -half_width || start + len - 1 > half_width {
        return Err(Error::Dimension(format!(
            "householder block [{start}, {}] outside window ±{half_width}",
            start + len - 1
        )));
    }
    let nv2: f64 = v.iter().map(|a| a * a).sum();
    if nv2 <= 0.0 {
        return Err(Error::Domain("householder block: zero direction".into()));
    }
    let dim = (2 * half_width + 1) as usize;
    let mut m = CMatrix::identity(dim);
    for a in 0..v.len() {
        for b in 0..v.len() {
            let i = (start + a as i64 + half_width) as usize;
            let j = (start + b as i64 + half_width) as usize;
            let d = if a == b { 1.0 } else { 0.0 };
            m.set(i, j, Complex64::new(d - 2.0 * v[a] * v[b] / nv2, 0.0));
        }
    }
    WindowOp::from_banded(half_width, len - 1, m)
}

/// Largest `|i − j|` carrying an entry above 1e-12.
fn measured_bandwidth(m: &CMatrix) -> i64 {
    let mut b = 0i64;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m.get(i, j).norm() > 1e-12 {
                b = b.max((i as i64 - j as i64).abs());
            }
        }
    }
    b
}

/// Orbit member of the windowed shift under the conjugation with factor `V`:
/// returns `W` acting by `v_j ↦ v_{j+1}` on the conjugated basis
/// `v_j = V e_j`.
///
/// Validates that `V` is symmetric (≤ 1e-10) with orthonormal core columns
/// (≤ 1e-10), assembles `W = Σ_j v_{j+1} v_j^*`, and verifies it against the
/// independently composed route `V·M·conj(V)` (the matrix of `(VJ)M(VJ)`) on
/// all core basis vectors to 1e-10 before returning.
pub fn shift_orbit_member(v: &WindowOp) -> Result<WindowOp> {
    let n = v.half_width();
    let sym = v.matrix().symmetry_residual();
    if sym > 1e-10 {
        return Err(Error::validation("factor symmetry", sym, 1e-10));
    }
    let core = v.core_radius();
    if core < 1 {
        return Err(Error::Unsupported(format!(
            "window half-width {n} too small for factor bandwidth {} (empty core)",
            v.bandwidth()
        )));
    }
    // Orthonormality of the untruncated columns.
    for j in -core..=core {
        for j2 in j..=core {
            let g = cdot(&v.column_of(j), &v.column_of(j2));
            let expect = if j == j2 { 1.0 } else { 0.0 };
            let dev = (g - Complex64::new(expect, 0.0)).norm();
            if dev > 1e-10 {
                return Err(Error::validation(
                    format!("core column orthonormality at ({j}, {j2})"),
                    dev,
                    1e-10,
                ));
            }
        }
    }

    // Action-defined member: W = Σ_j v_{j+1} v_j^*.
    let dim = v.dim();
    let mut w = CMatrix::zeros(dim, dim);
    for j in -n..n {
        let vj = v.column_of(j);
        let vj1 = v.column_of(j + 1);
        for r in 0..dim {
            if vj1[r].norm() == 0.0 {
                continue;
            }
            for c in 0..dim {
                let add = vj1[r] * vj[c].conj();
                w.set(r, c, w.get(r, c) + add);
            }
        }
    }

    // Independent route: the linear matrix of (VJ)M(VJ) is V·M·conj(V)
    // (M has real entries).
    let m = window_shift(n);
    let composed = v.matrix().matmul(m.matrix()).matmul(&v.matrix().conj());
    for j in -(core - 1)..=(core - 1) {
        let e = window_basis(n, j);
        let lhs = w.matvec(&e);
        let rhs = composed.matvec(&e);
        let resid = crate::numerics::vec_max_abs_diff(&lhs, &rhs);
        if resid > 1e-10 {
            return Err(Error::Convergence(format!(
                "member mismatch between action and composed routes at j={j}: {resid:.3e}"
            )));
        }
    }

    let bw = measured_bandwidth(&w);
    WindowOp::from_matrix_with_core(n, bw, core - 1, w)
}

/// Toeplitz window: coefficients `c(d)` for diagonals `d ∈ [−b, b]`,
/// realized as the banded matrix `T_{ij} = c(i − j)`.
#[derive(Debug, Clone)]
pub struct ToeplitzWindow {
    coefficients: Vec<Complex64>,
    half_width: i64,
    bandwidth: i64,
}

impl ToeplitzWindow {
    /// `coefficients[k]` is the diagonal `d = k − b`.
    pub fn new(half_width: i64, bandwidth: i64, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != (2 * bandwidth + 1) as usize {
            return Err(Error::Dimension(format!(
                "Toeplitz window needs {} coefficients for bandwidth {bandwidth}, got {}",
                2 * bandwidth + 1,
                coefficients.len()
            )));
        }
        Ok(ToeplitzWindow {
            coefficients,
            half_width,
            bandwidth,
        })
    }

    pub fn coefficient(&self, d: i64) -> Complex64 {
        if d.abs() > self.bandwidth {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[(d + self.bandwidth) as usize]
        }
    }

    pub fn bandwidth(&self) -> i64 {
        self.bandwidth
    }

    pub fn to_window_op(&self) -> WindowOp {
        let n = self.half_width;
        let dim = (2 * n + 1) as usize;
        let m = CMatrix::from_fn(dim, dim, |i, j| self.coefficient(i as i64 - j as i64));
        WindowOp::from_banded(n, self.bandwidth, m).expect("Toeplitz band")
    }
}

/// Fourier coefficients of the half-circle ±1 symbol (value `+1` on the
/// right half-circle, `−1` on the left): `c(0) = 0` and
/// `c(n) = 2·sin(nπ/2)/(πn)` — zero for even `n`, `±2/(π n)` alternating on
/// odd `n`, even in `n`.
pub fn halfcircle_coeffs(n: i64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let s = match n.rem_euclid(4) {
        1 => 1.0,
        3 => -1.0,
        _ => 0.0,
    };
    2.0 * s / (std::f64::consts::PI * n as f64)
}

/// Toeplitz window of the half-circle symbol truncated to bandwidth `b`.
pub fn halfcircle_window(half_width: i64, bandwidth: i64) -> ToeplitzWindow {
    let coeffs = (-bandwidth..=bandwidth)
        .map(|d| Complex64::new(halfcircle_coeffs(d), 0.0))
        .collect();
    ToeplitzWindow::new(half_width, bandwidth, coeffs).expect("coefficient count")
}

/// Report of the commutant test for a banded window against the shift.
#[derive(Debug, Clone)]
pub struct ToeplitzCommutantReport {
    /// `‖[T, M] e_j‖_∞ ≤ 1e-6` over all core columns.
    pub commutes: bool,
    /// Diagonal-constancy of the stored band within 1e-9.
    pub is_toeplitz: bool,
    pub commutator_residual: f64,
    pub toeplitz_residual: f64,
}

/// Check whether a banded window commutes with the shift on the core and
/// whether it is Toeplitz (diagonal-constant).  For genuinely Toeplitz
/// windows the commutator vanishes identically on the core — the two
/// verdicts must agree there.
pub fn toeplitz_commutant_check(t: &WindowOp) -> Result<ToeplitzCommutantReport> {
    let n = t.half_width();
    let b = t.bandwidth();
    if n - b - 1 < 0 {
        return Err(Error::Unsupported(format!(
            "window half-width {n} too small for bandwidth {b} commutator core"
        )));
    }
    let m = window_shift(n);
    let tm = t.matrix().matmul(m.matrix());
    let mt = m.matrix().matmul(t.matrix());
    let mut comm_resid: f64 = 0.0;
    for j in -(n - b - 1)..=(n - b - 1) {
        let e = window_basis(n, j);
        let lhs = tm.matvec(&e);
        let rhs = mt.matvec(&e);
        comm_resid = comm_resid.max(crate::numerics::vec_max_abs_diff(&lhs, &rhs));
    }

    let mut toep_resid: f64 = 0.0;
    for d in -b..=b {
        let mut first: Option<Complex64> = None;
        for j in -n..=n {
            let i = j + d;
            if i.abs() > n {
                continue;
            }
            let val = t.entry(i, j);
            match first {
                None => first = Some(val),
                Some(f) => toep_resid = toep_resid.max((val - f).norm()),
            }
        }
    }

    Ok(ToeplitzCommutantReport {
        commutes: comm_resid <= 1e-6,
        is_toeplitz: toep_resid <= 1e-9,
        commutator_residual: comm_resid,
        toeplitz_residual: toep_resid,
    })
}

/// Report of the wandering-subspace relabeling check.
#[derive(Debug, Clone)]
pub struct WanderingReport {
    pub k: usize,
    pub half_width: i64,
    /// Dimension of the wandering subspace: the number of shift components.
    pub wandering_dim: usize,
    /// `max_j ‖Γ·M_{ξᵏ}·e_j − M⁽ᵏ⁾·Γ·e_j‖_∞` over the core `|j| ≤ N − 2k`.
    pub residual: f64,
}

/// Verify that the relabeling `Γ: e_n ↦ (component n mod k, position ⌊n/k⌋)`
/// intertwines the `k`-th shift power with a `k`-fold direct sum of shifts:
/// `Γ·M_{ξᵏ} = M⁽ᵏ⁾·Γ` on the core `|n| ≤ N − 2k`.
pub fn wandering_equivalence(k: usize, half_width: i64) -> Result<WanderingReport> {
    if k == 0 {
        return Err(Error::Domain("wandering_equivalence: k must be ≥ 1".into()));
    }
    let n = half_width;
    let ki = k as i64;
    if n - 2 * ki < 0 {
        return Err(Error::Unsupported(format!(
            "window half-width {n} too small for shift power {k}"
        )));
    }
    let dim = (2 * n + 1) as usize;

    // M_{ξ^k}: e_j ↦ e_{j+k}.
    let mut mk = CMatrix::zeros(dim, dim);
    for j in -n..=(n - ki) {
        mk.set((j + ki + n) as usize, (j + n) as usize, Complex64::new(1.0, 0.0));
    }

    // Component layout: residue r gets positions q with −N ≤ kq + r ≤ N.
    let qmin = |r: i64| (-(n + r) as f64 / k as f64).ceil() as i64;
    let qmax = |r: i64| ((n - r) as f64 / k as f64).floor() as i64;
    let mut offset = vec![0usize; k + 1];
    for r in 0..ki {
        offset[(r + 1) as usize] =
            offset[r as usize] + (qmax(r) - qmin(r) + 1) as usize;
    }
    assert_eq!(offset[k], dim, "relabeling must be a bijection");
    let target = |nn: i64| -> usize {
        let r = nn.rem_euclid(ki);
        let q = (nn - r) / ki;
        offset[r as usize] + (q - qmin(r)) as usize
    };

    // Γ as a permutation matrix, and the direct sum of shifts on components.
    let mut gamma = CMatrix::zeros(dim, dim);
    for j in -n..=n {
        gamma.set(target(j), (j + n) as usize, Complex64::new(1.0, 0.0));
    }
    let mut mblk = CMatrix::zeros(dim, dim);
    for r in 0..ki {
        for q in qmin(r)..qmax(r) {
            let from = offset[r as usize] + (q - qmin(r)) as usize;
            mblk.set(from + 1, from, Complex64::new(1.0, 0.0));
        }
    }

    let lhs = gamma.matmul(&mk);
    let rhs = mblk.matmul(&gamma);
    let mut resid: f64 = 0.0;
    for j in -(n - 2 * ki)..=(n - 2 * ki) {
        let e = window_basis(n, j);
        resid = resid.max(crate::numerics::vec_max_abs_diff(
            &lhs.matvec(&e),
            &rhs.matvec(&e),
        ));
    }
    Ok(WanderingReport {
        k,
        half_width,
        wandering_dim: k,
        residual: resid,
    })
}
