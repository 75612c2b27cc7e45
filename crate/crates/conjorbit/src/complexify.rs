//! Realification of unitaries relative to an adjoint-witness conjugation.
//!
//! A conjugation `C` on `Cⁿ` fixes a real orthonormal frame `B` (columns
//! fixed by `C`).  The model requires `C·U·C = U*`: in that case the matrix
//! `M = B*·U·B = R + i·K` is complex symmetric, its blocks `R`, `K` are
//! real symmetric, commute, and satisfy `R² + K² = I`, and the operator `U`
//! becomes the real orthogonal `2n×2n` matrix `Û = [[R, −K], [K, R]]`
//! acting on real and imaginary coordinate stacks.  In this picture the
//! conjugation itself is `Ĵ = diag(I, −I)`, it flips `Û` to `Û*`, and
//! conjugation factors become real orthogonal matrices of the form
//! `Ŵ = [[Wr, −Wc], [Wc, Wr]]` with `Wr + i·Wc` symmetric unitary — so
//! orbit members can be produced by pure real arithmetic and cross-checked
//! against the complex route.
//!
//! The module also verifies the block anatomy of conjugations on a direct
//! sum `Cⁿ ⊕ Cⁿ`: writing `C = [[N₁, N₂], [N₃, N₄]]` with antilinear
//! blocks, symmetry forces `N₁ᵗ = N₁`, `N₄ᵗ = N₄`, `N₃ = N₂ᵗ`, and the
//! involution property forces `N₁·conj(N₁) + N₂·conj(N₃) = I`,
//! `N₃·conj(N₂) + N₄·conj(N₄) = I`, and the mixed products to vanish.

use crate::conjugations::{c_real_basis, Conjugation};
use crate::error::{Error, Result};
use crate::numerics::{unitarity_residual, CMatrix, RMatrix};
use crate::orbit;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A unitary expressed in the real frame of a conjugation.
#[derive(Debug, Clone)]
pub struct Realification {
    basis: CMatrix,
    real: RMatrix,
    imag: RMatrix,
}

impl Realification {
    /// Express `u` in the `c`-fixed orthonormal frame and split it into
    /// commuting real and imaginary blocks.
    ///
    /// Precondition: `c` must send `u` to its adjoint, `‖CUC − U*‖ ≤ 1e-8`
    /// (obtain such a conjugation from [`crate::orbit::adjoint_witness`]).
    /// This makes the frame matrix `M = B*·U·B` complex symmetric, which is
    /// what gives the block model its structure; the constructor validates
    /// the precondition, the round trip `B·M·B* = U` at `1e-8·n`, and the
    /// block relations (symmetry, commutation, `R² + K² = I`) at `1e-10`.
    pub fn new(u: &CMatrix, c: &Conjugation) -> Result<Realification> {
        if !u.is_square() || u.rows() != c.dim() {
            return Err(Error::Dimension(format!(
                "realification: {}x{} matrix vs conjugation dim {}",
                u.rows(),
                u.cols(),
                c.dim()
            )));
        }
        let adj_dev = orbit::cuc(c, u)?.matrix.max_abs_diff(&u.adjoint());
        if adj_dev > 1e-8 {
            return Err(Error::validation(
                "realification frame must send U to U* (adjoint-witness precondition)",
                adj_dev,
                1e-8,
            ));
        }
        let basis = c_real_basis(c)?;
        let m = basis.adjoint().matmul(u).matmul(&basis);
        let real = m.real_part();
        let imag = m.imag_part();
        let out = Realification { basis, real, imag };
        let tol = 1e-8 * u.rows() as f64;
        let round_trip = out.restore().max_abs_diff(u);
        if round_trip > tol {
            return Err(Error::validation(
                "realification round trip B·M·B* = U",
                round_trip,
                tol,
            ));
        }
        let relations = out.block_relation_residuals();
        let labels = [
            "realification block R symmetric",
            "realification block K symmetric",
            "realification blocks satisfy R² + K² = I",
            "realification blocks commute",
        ];
        for (label, residual) in labels.iter().zip(relations) {
            if residual > 1e-10 {
                return Err(Error::validation(*label, residual, 1e-10));
            }
        }
        Ok(out)
    }

    /// Measured residuals of the block relations, in order:
    /// `‖Rᵗ − R‖`, `‖Kᵗ − K‖`, `‖R² + K² − I‖`, `‖RK − KR‖`.
    pub fn block_relation_residuals(&self) -> [f64; 4] {
        let n = self.real.rows();
        [
            self.real.transpose().max_abs_diff(&self.real),
            self.imag.transpose().max_abs_diff(&self.imag),
            self.real
                .matmul(&self.real)
                .add(&self.imag.matmul(&self.imag))
                .max_abs_diff(&RMatrix::identity(n)),
            self.real
                .matmul(&self.imag)
                .sub(&self.imag.matmul(&self.real))
                .max_norm(),
        ]
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn real_block(&self) -> &RMatrix {
        &self.real
    }

    pub fn imag_block(&self) -> &RMatrix {
        &self.imag
    }

    /// The real `2n×2n` model `[[R, −K], [K, R]]`.
    pub fn hat(&self) -> RMatrix {
        hat_from_blocks(&self.real, &self.imag)
    }

    /// Map the blocks back to the original frame: `B·(R + iK)·B*`.
    pub fn restore(&self) -> CMatrix {
        let m = CMatrix::from_parts(&self.real, &self.imag);
        self.basis.matmul(&m).matmul(&self.basis.adjoint())
    }
}

/// Assemble `[[R, −K], [K, R]]` from real blocks.
pub fn hat_from_blocks(r: &RMatrix, k: &RMatrix) -> RMatrix {
    let n = r.rows();
    assert!(r.rows() == r.cols() && k.rows() == n && k.cols() == n);
    RMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => r.get(i, j),
        (true, false) => -k.get(i, j - n),
        (false, true) => k.get(i - n, j),
        (false, false) => r.get(i - n, j - n),
    })
}

fn rblock(m: &RMatrix, r0: usize, c0: usize, n: usize) -> RMatrix {
    RMatrix::from_fn(n, n, |i, j| m.get(r0 + i, c0 + j))
}

fn even_half(m: &RMatrix) -> Result<usize> {
    if !(m.rows() == m.cols() && m.rows() % 2 == 0 && m.rows() > 0) {
        return Err(Error::Dimension(format!(
            "expected an even-dimensional square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.rows() / 2)
}

/// Deviation of a real `2n×2n` matrix from the complex-linear pattern
/// `[[A, −B], [B, A]]`, measured as `‖M·J − J·M‖_max` for the complex
/// structure `J = [[0, −I], [I, 0]]`.
pub fn clinear_pattern_residual(m: &RMatrix) -> Result<f64> {
    let n = even_half(m)?;
    let mut worst: f64 = 0.0;
    // (MJ)_{ij} vs (JM)_{ij} without materializing J.
    for i in 0..2 * n {
        for j in 0..2 * n {
            // J e_j = e_{j+n} (j < n), −e_{j−n} (j ≥ n):  MJ(i,j) = ±M(i, j∓n).
            let mj = if j < n { m.get(i, j + n) } else { -m.get(i, j - n) };
            // (JM)(i, j): row i of J picks ∓row: JM(i,j) = −M(i+n→) …
            let jm = if i < n { -m.get(i + n, j) } else { m.get(i - n, j) };
            worst = worst.max((mj - jm).abs());
        }
    }
    Ok(worst)
}

/// Residual of the conjugation flip `Ĵ·M̂·Ĵ = [[TL, −TR], [−BL, BR]]`
/// against the conjugate pattern `[[TL, BL-slot…]]` — concretely: for a
/// matrix in complex-linear pattern, `Ĵ·M̂·Ĵ` must equal the hat of the
/// conjugated complex matrix, `[[R, K], [−K, R]]`.
pub fn jhat_flip_residual(m: &RMatrix) -> Result<f64> {
    let n = even_half(m)?;
    let r = rblock(m, 0, 0, n);
    let k = rblock(m, n, 0, n);
    // Ĵ M̂ Ĵ negates the off-diagonal blocks of M̂.
    let flipped = RMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let sign = if (i < n) == (j < n) { 1.0 } else { -1.0 };
        sign * m.get(i, j)
    });
    let expected = hat_from_blocks(&r, &k.scale(-1.0));
    Ok(flipped.max_abs_diff(&expected))
}

/// Seeded Haar-like real orthogonal matrix (Gaussian entries, modified
/// Gram–Schmidt with one re-orthogonalization pass).
pub fn random_orthogonal(n: usize, seed: u64) -> RMatrix {
    assert!(n > 0, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = || {
        let u1: f64 = 1.0 - rng.gen::<f64>();
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    };
    let mut cols: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| normal()).collect()).collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let proj: f64 = (0..n).map(|i| cols[k][i] * cols[j][i]).sum();
                for i in 0..n {
                    cols[j][i] -= proj * cols[k][i];
                }
            }
        }
        let nrm: f64 = (0..n).map(|i| cols[j][i] * cols[j][i]).sum::<f64>().sqrt();
        assert!(nrm > 1e-12, "degenerate random draw");
        for i in 0..n {
            cols[j][i] /= nrm;
        }
    }
    RMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Seeded conjugation-factor blocks: `Wr = O·diag(cos θ)·Oᵗ`,
/// `Wc = O·diag(sin θ)·Oᵗ` for a random orthogonal `O` and random angles.
/// `W = Wr + i·Wc` is then symmetric unitary, and `Wr`, `Wc` are commuting
/// symmetric real matrices with `Wr² + Wc² = I`.
pub fn wblock_generate(n: usize, seed: u64) -> (RMatrix, RMatrix) {
    let o = random_orthogonal(n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
    let angles: Vec<f64> = (0..n)
        .map(|_| rng.gen::<f64>() * 2.0 * std::f64::consts::PI - std::f64::consts::PI)
        .collect();
    let sandwich = |d: &dyn Fn(usize) -> f64| -> RMatrix {
        let diag = RMatrix::from_fn(n, n, |i, j| if i == j { d(i) } else { 0.0 });
        o.matmul(&diag).matmul(&o.transpose())
    };
    let wr = sandwich(&|i| angles[i].cos());
    let wc = sandwich(&|i| angles[i].sin());
    (wr, wc)
}

/// Orbit member produced through the real block model, with its complex
/// cross-check.
#[derive(Debug, Clone)]
pub struct BlockOrbitMember {
    /// Member from the complex route `S·conj(U)·conj(S)`, `S = B·W·Bᵗ`.
    pub member: CMatrix,
    /// Member from the real route `Ŵ·(Ĵ·Û·Ĵ)·Ŵᵗ`, mapped back to the
    /// original frame.
    pub via_blocks: CMatrix,
    /// Max entry difference between the two routes.
    pub agreement: f64,
    /// The conjugation used, in the original frame.
    pub factor: Conjugation,
}

/// Conjugate `u` by the conjugation whose factor is `W = Wr + i·Wc` in the
/// `c`-fixed frame, computing the member twice: once by real `2n×2n` block
/// arithmetic (`V̂ = Ŵ·Û*·Ŵᵗ`, which under the adjoint-witness precondition
/// on `c` equals `Ŵ·Ĵ·Û·Ĵ·Ŵᵗ`, mapped back through the basis), once by
/// complex arithmetic with the frame-transported factor `S = B·W·Bᵗ`.
/// The two routes must agree to `1e-8·n`.
///
/// `c` must send `u` to `u*` (inherited from [`Realification::new`]).
/// `Wr = I, Wc = 0` then reproduces the frame conjugation itself, so the
/// member is `u*`.
pub fn orbit_via_blocks(
    u: &CMatrix,
    c: &Conjugation,
    wr: &RMatrix,
    wc: &RMatrix,
) -> Result<BlockOrbitMember> {
    let n = u.rows();
    if wr.rows() != n || wr.cols() != n || wc.rows() != n || wc.cols() != n {
        return Err(Error::Dimension(format!(
            "W blocks must be {n}x{n} to match the unitary"
        )));
    }
    let w = CMatrix::from_parts(wr, wc);
    let sym = w.symmetry_residual();
    if sym > 1e-9 {
        return Err(Error::validation("W symmetric", sym, 1e-9));
    }
    let unit = unitarity_residual(&w);
    if unit > 1e-9 {
        return Err(Error::validation("W unitary", unit, 1e-9));
    }

    let real = Realification::new(u, c)?;
    // Real route: Ĵ·Û·Ĵ is the hat of conj(M), i.e. blocks (R, −K).
    let uhat_conj = hat_from_blocks(real.real_block(), &real.imag_block().scale(-1.0));
    let what = hat_from_blocks(wr, wc);
    let vhat = what.matmul(&uhat_conj).matmul(&what.transpose());
    let vr = rblock(&vhat, 0, 0, n);
    let vk = rblock(&vhat, n, 0, n);
    let pattern = clinear_pattern_residual(&vhat)?;
    if pattern > 1e-10 {
        return Err(Error::validation(
            "block member complex-linear pattern",
            pattern,
            1e-10,
        ));
    }
    let via_blocks = real
        .basis()
        .matmul(&CMatrix::from_parts(&vr, &vk))
        .matmul(&real.basis().adjoint());

    // Complex route: transport the factor out of the frame with Bᵗ (the
    // conjugation acts as W∘conj on frame coordinates, and conj(B*) = Bᵗ).
    let s = real.basis().matmul(&w).matmul(&real.basis().transpose());
    let factor = Conjugation::from_symmetric(s, 1e-8 * n as f64)?;
    let member = orbit::cuc(&factor, u)?.matrix;

    let agreement = member.max_abs_diff(&via_blocks);
    if agreement > 1e-8 * n as f64 {
        return Err(Error::Convergence(format!(
            "block route and complex route disagree: {agreement:.3e}"
        )));
    }
    Ok(BlockOrbitMember {
        member,
        via_blocks,
        agreement,
        factor,
    })
}

/// Split the factor of a conjugation on `Cⁿ ⊕ Cⁿ` into its four antilinear
/// block factors `[N₁, N₂, N₃, N₄]`.
pub fn conjugation_blocks(c: &Conjugation) -> Result<[CMatrix; 4]> {
    let d = c.dim();
    if d % 2 != 0 || d == 0 {
        return Err(Error::Dimension(format!(
            "block split needs an even dimension, got {d}"
        )));
    }
    let n = d / 2;
    let s = c.factor();
    let cblock = |r0: usize, c0: usize| CMatrix::from_fn(n, n, |i, j| s.get(r0 + i, c0 + j));
    Ok([
        cblock(0, 0),
        cblock(0, n),
        cblock(n, 0),
        cblock(n, n),
    ])
}

/// Structural residuals of four antilinear block factors assembling to a
/// conjugation.
#[derive(Debug, Clone)]
pub struct BlockConjugationReport {
    /// `‖N₁ᵗ − N₁‖` — the first diagonal block must be symmetric.
    pub symmetry_first: f64,
    /// `‖N₄ᵗ − N₄‖` — the last diagonal block must be symmetric.
    pub symmetry_last: f64,
    /// `‖N₃ − N₂ᵗ‖` — off-diagonal blocks are transposes of each other.
    pub transpose_pairing: f64,
    /// Involution residuals, row by row:
    /// `[‖N₁N̄₁ + N₂N̄₃ − I‖, ‖N₁N̄₂ + N₂N̄₄‖, ‖N₃N̄₁ + N₄N̄₃‖, ‖N₃N̄₂ + N₄N̄₄ − I‖]`.
    pub involution: [f64; 4],
    /// Symmetry of the assembled `2n×2n` factor.
    pub assembled_symmetry: f64,
    /// Unitarity of the assembled factor.
    pub assembled_unitarity: f64,
}

impl BlockConjugationReport {
    pub fn max_residual(&self) -> f64 {
        let mut m = self
            .symmetry_first
            .max(self.symmetry_last)
            .max(self.transpose_pairing)
            .max(self.assembled_symmetry)
            .max(self.assembled_unitarity);
        for &r in &self.involution {
            m = m.max(r);
        }
        m
    }
}

/// Assemble four blocks into the full `2n×2n` matrix `[[N₁, N₂], [N₃, N₄]]`.
pub fn assemble_blocks(n1: &CMatrix, n2: &CMatrix, n3: &CMatrix, n4: &CMatrix) -> CMatrix {
    let n = n1.rows();
    CMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => n1.get(i, j),
        (true, false) => n2.get(i, j - n),
        (false, true) => n3.get(i - n, j),
        (false, false) => n4.get(i - n, j - n),
    })
}

/// Check the block anatomy of a conjugation written as
/// `[[N₁, N₂], [N₃, N₄]]` with antilinear blocks (each acting
/// `x ↦ N_k·conj(x)`).  Reports the symmetry, transpose-pairing, and
/// involution residuals together with the assembled factor's symmetry and
/// unitarity.
pub fn block_conjugation_check(
    n1: &CMatrix,
    n2: &CMatrix,
    n3: &CMatrix,
    n4: &CMatrix,
) -> Result<BlockConjugationReport> {
    let n = n1.rows();
    for (label, b) in [("N₁", n1), ("N₂", n2), ("N₃", n3), ("N₄", n4)] {
        if !b.is_square() || b.rows() != n {
            return Err(Error::Dimension(format!(
                "{label} must be {n}x{n}, got {}x{}",
                b.rows(),
                b.cols()
            )));
        }
    }
    let eye = CMatrix::identity(n);
    let zero = CMatrix::zeros(n, n);
    let involution = [
        n1.matmul(&n1.conj())
            .add(&n2.matmul(&n3.conj()))
            .max_abs_diff(&eye),
        n1.matmul(&n2.conj())
            .add(&n2.matmul(&n4.conj()))
            .max_abs_diff(&zero),
        n3.matmul(&n1.conj())
            .add(&n4.matmul(&n3.conj()))
            .max_abs_diff(&zero),
        n3.matmul(&n2.conj())
            .add(&n4.matmul(&n4.conj()))
            .max_abs_diff(&eye),
    ];
    let assembled = assemble_blocks(n1, n2, n3, n4);
    Ok(BlockConjugationReport {
        symmetry_first: n1.transpose().max_abs_diff(n1),
        symmetry_last: n4.transpose().max_abs_diff(n4),
        transpose_pairing: n3.max_abs_diff(&n2.transpose()),
        involution,
        assembled_symmetry: assembled.symmetry_residual(),
        assembled_unitarity: unitarity_residual(&assembled),
    })
}
