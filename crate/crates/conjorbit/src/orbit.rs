//! Conjugate orbits of unitary matrices.
//!
//! For a unitary `U`, the conjugate orbit is `{CUC : C a conjugation}`.
//! Since `C x = S·conj(x)` with `S` symmetric unitary, each member is the
//! unitary matrix `S·conj(U)·conj(S)`.  Key structure implemented here:
//!
//! - the adjoint is always a member: `C U C = U*` for the witness built from
//!   any orthonormal eigenbasis `Q` of `U` as `S = Q Qᵗ`;
//! - `U` itself is a member iff the eigenvalue multiset is invariant under
//!   complex conjugation;
//! - for `U` with distinct eigenvalues, the conjugated diagonal matrix
//!   `diag(conj(λ_{ord(j)}))` is a member iff the correspondingly permuted
//!   eigenbasis can be made complex-symmetric by per-column phases —
//!   decided exactly by [`symmetrizable_by_phases`].

use crate::conjugations::Conjugation;
use crate::error::{Error, Result};
use crate::numerics::{
    circle_angle_distance, spectra_match, unitarity_residual, unitary_eig, CMatrix, Complex64,
};

/// An orbit member together with the conjugation that produced it.
#[derive(Debug, Clone)]
pub struct OrbitMember {
    /// The unitary matrix `C U C`.
    pub matrix: CMatrix,
    /// The conjugation `C` used.
    pub witness: Conjugation,
}

/// The matrix of the linear map `x ↦ C(U(C x))` for `C = S∘conj`:
/// `S·conj(U)·conj(S)`.
pub fn cuc_matrix(s: &CMatrix, u: &CMatrix) -> CMatrix {
    s.matmul(&u.conj()).matmul(&s.conj())
}

/// Conjugate `U` by the conjugation `C`, returning the member `C U C` with
/// its witness.  Errors on dimension mismatch or non-unitary `U`
/// (`‖U*U − I‖_max > 1e-8`).
pub fn cuc(c: &Conjugation, u: &CMatrix) -> Result<OrbitMember> {
    if c.dim() != u.rows() || !u.is_square() {
        return Err(Error::Dimension(format!(
            "cuc: conjugation dim {} vs matrix {}x{}",
            c.dim(),
            u.rows(),
            u.cols()
        )));
    }
    let res = unitarity_residual(u);
    if res > 1e-8 {
        return Err(Error::validation("unitarity of U", res, 1e-8));
    }
    Ok(OrbitMember {
        matrix: cuc_matrix(c.factor(), u),
        witness: c.clone(),
    })
}

/// Witness conjugation sending `U` to its adjoint: `S = Q Qᵗ` for an
/// orthonormal eigenbasis `Q` of `U`.  The defining identity
/// `‖C U C − U*‖_max ≤ 1e-8` is verified before returning.
pub fn adjoint_witness(u: &CMatrix) -> Result<Conjugation> {
    let eig = unitary_eig(u)?;
    let q = &eig.eigenvectors;
    let s = q.matmul(&q.transpose());
    let c = Conjugation::from_symmetric(s, 1e-8 * (u.rows() as f64).max(1.0))?;
    let resid = cuc_matrix(c.factor(), u).max_abs_diff(&u.adjoint());
    if resid > 1e-8 {
        return Err(Error::Convergence(format!(
            "adjoint_witness: ‖CUC − U*‖_max = {resid:.3e} exceeds 1e-8"
        )));
    }
    Ok(c)
}

/// Whether `U` lies in its own conjugate orbit: true iff the eigenvalue
/// multiset is conjugation-invariant (compared at 1e-8 angular tolerance).
pub fn self_in_orbit(u: &CMatrix) -> Result<bool> {
    let eig = unitary_eig(u)?;
    let conj_spec: Vec<Complex64> = eig.eigenvalues.iter().map(|z| z.conj()).collect();
    Ok(spectra_match(&eig.eigenvalues, &conj_spec, 1e-8))
}

/// Whether two conjugations produce the same orbit member of `U`
/// (`‖C₁UC₁ − C₂UC₂‖_max ≤ 1e-10`).
pub fn same_member(c1: &Conjugation, c2: &Conjugation, u: &CMatrix) -> Result<bool> {
    let m1 = cuc(c1, u)?;
    let m2 = cuc(c2, u)?;
    Ok(m1.matrix.max_abs_diff(&m2.matrix) <= 1e-10)
}

/// Result of a successful phase symmetrization: per-column unimodular
/// phases `z_j` with `(Q·diag(z))ᵗ = Q·diag(z)`, and the connected-component
/// label of each column in the constraint graph (free components get
/// phase 1).
#[derive(Debug, Clone)]
pub struct PhaseAssignment {
    pub phases: Vec<Complex64>,
    pub component_labels: Vec<usize>,
}

/// Decide whether per-column unimodular phases can make `Q` complex
/// symmetric, and produce them if so.
///
/// Entrywise, `(Q·diag(z))ᵗ = Q·diag(z)` reads `q_ij·z_j = q_ji·z_i`, which
/// is only satisfiable if `|q_ij| = |q_ji|` for every pair (checked within
/// 1e-8 wherever either entry exceeds 1e-10); the phases then propagate
/// through the constraint graph `z_j = (q_ji/q_ij)·z_i` (edges where both
/// entries exceed 1e-10) by weighted union-find, with cycle consistency
/// checked on the fly and the assembled assignment verified against the
/// symmetry contract (residual ≤ 1e-8) before returning `Some`.
pub fn symmetrizable_by_phases(q: &CMatrix) -> Result<Option<PhaseAssignment>> {
    if !q.is_square() {
        return Err(Error::Dimension(format!(
            "symmetrizable_by_phases: matrix is {}x{}, not square",
            q.rows(),
            q.cols()
        )));
    }
    let n = q.rows();
    const ENTRY_FLOOR: f64 = 1e-10;
    const PHASE_TOL: f64 = 1e-8;

    for i in 0..n {
        for j in (i + 1)..n {
            let a = q.get(i, j).norm();
            let b = q.get(j, i).norm();
            if a.max(b) > ENTRY_FLOOR && (a - b).abs() > PHASE_TOL {
                return Ok(None);
            }
        }
    }

    // Weighted union-find: z_i = weight[i] · z_{root(i)}.
    let mut parent: Vec<usize> = (0..n).collect();
    let mut weight: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); n];

    fn find(parent: &mut Vec<usize>, weight: &mut Vec<Complex64>, i: usize) -> (usize, Complex64) {
        if parent[i] == i {
            return (i, Complex64::new(1.0, 0.0));
        }
        let (root, wp) = find(parent, weight, parent[i]);
        let w = weight[i] * wp;
        let w = w / w.norm();
        parent[i] = root;
        weight[i] = w;
        (root, w)
    }

    for i in 0..n {
        for j in (i + 1)..n {
            let qij = q.get(i, j);
            let qji = q.get(j, i);
            if qij.norm() <= ENTRY_FLOOR || qji.norm() <= ENTRY_FLOOR {
                continue;
            }
            // Constraint: z_j = ρ·z_i with ρ = q_ji/q_ij (unimodular here).
            let rho = qji / qij;
            let rho = rho / rho.norm();
            let (ri, wi) = find(&mut parent, &mut weight, i);
            let (rj, wj) = find(&mut parent, &mut weight, j);
            if ri == rj {
                // Cycle: the accumulated phases must already satisfy it.
                if (wj - rho * wi).norm() > PHASE_TOL {
                    return Ok(None);
                }
            } else {
                // z_j = w_j·z_rj and z_j = ρ·w_i·z_ri ⇒ z_rj = (ρ·w_i/w_j)·z_ri.
                let w = rho * wi / wj;
                parent[rj] = ri;
                weight[rj] = w / w.norm();
            }
        }
    }

    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    let mut component_labels = vec![0usize; n];
    let mut label_of_root: Vec<Option<usize>> = vec![None; n];
    let mut next_label = 0usize;
    for i in 0..n {
        let (root, w) = find(&mut parent, &mut weight, i);
        phases[i] = w;
        component_labels[i] = *label_of_root[root].get_or_insert_with(|| {
            let l = next_label;
            next_label += 1;
            l
        });
    }

    // Verify the contract on the assembled assignment.
    let qz = CMatrix::from_fn(n, n, |i, j| q.get(i, j) * phases[j]);
    if qz.symmetry_residual() > PHASE_TOL {
        return Ok(None);
    }
    Ok(Some(PhaseAssignment {
        phases,
        component_labels,
    }))
}

/// Whether the conjugated diagonal matrix `diag(conj(λ_{ordering(j)}))` is
/// an orbit member of `U`.
///
/// `ordering` indexes into the eigenvalue list of [`unitary_eig`], i.e. the
/// spectrum sorted by principal angle — for a diagonal `U` whose entries are
/// already angle-sorted this coincides with the diagonal position.
///
/// Requires distinct eigenvalues: the minimum circular gap must be at least
/// 1e-6, otherwise the membership criterion (phase-symmetrizability of the
/// permuted eigenbasis) is not well posed and an unsupported-input error is
/// returned.
pub fn diag_in_orbit(u: &CMatrix, ordering: &[usize]) -> Result<bool> {
    let n = u.rows();
    if ordering.len() != n {
        return Err(Error::Dimension(format!(
            "diag_in_orbit: ordering length {} vs dimension {}",
            ordering.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &s in ordering {
        if s >= n || seen[s] {
            return Err(Error::Domain(format!(
                "diag_in_orbit: {ordering:?} is not a permutation of 0..{n}"
            )));
        }
        seen[s] = true;
    }
    let eig = unitary_eig(u)?;
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = circle_angle_distance(eig.eigenvalues[i].arg(), eig.eigenvalues[j].arg());
            if gap < 1e-6 {
                return Err(Error::Unsupported(format!(
                    "diag_in_orbit: eigenvalues {} and {} collide (circular gap {gap:.3e} < 1e-6)",
                    eig.eigenvalues[i], eig.eigenvalues[j]
                )));
            }
        }
    }
    let permuted = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors.get(r, ordering[c]));
    Ok(symmetrizable_by_phases(&permuted)?.is_some())
}

/// The worked 2×2 conjugation family: factor
/// `V = e^{iφ/2}·[[e^{iα}cosθ, i(−1)ⁿ sinθ], [i(−1)ⁿ sinθ, e^{−iα}cosθ]]`,
/// which enumerates all symmetric unitaries of order 2 as `(θ, α, n, φ)`
/// range over their domains.
pub fn two_by_two_factor(theta: f64, alpha: f64, odd: bool, phi: f64) -> Conjugation {
    let eps = if odd { -1.0 } else { 1.0 };
    let g = Complex64::from_polar(1.0, 0.5 * phi);
    let c = theta.cos();
    let s = theta.sin();
    let v = CMatrix::from_data(
        2,
        2,
        vec![
            g * Complex64::from_polar(c, alpha),
            g * Complex64::new(0.0, eps * s),
            g * Complex64::new(0.0, eps * s),
            g * Complex64::from_polar(c, -alpha),
        ],
    );
    Conjugation::from_symmetric(v, 1e-12).expect("two_by_two_factor is symmetric unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugations::{random_conjugation, random_cvector};
    use crate::numerics::haar_unitary;

    /// The explicit 3×3 orthonormal basis whose diagonal models are *not*
    /// orbit members for any column ordering: the magnitude pattern
    /// |q₁₃| = 0 ≠ 1/√6 = |q₃₁| obstructs phase symmetrization.
    fn obstructed_basis() -> CMatrix {
        let s3 = 3.0_f64.sqrt();
        let s6 = 6.0_f64.sqrt();
        CMatrix::from_data(
            3,
            3,
            vec![
                Complex64::new(1.0 / s3, 1.0 / s3),
                Complex64::new(1.0 / s6, -1.0 / s6),
                Complex64::new(0.0, 0.0),
                //
                Complex64::new(0.0, -1.0 / s6),
                Complex64::new(1.0 / s3, 0.0),
                Complex64::new(1.0 / s6, 1.0 / s3),
                //
                Complex64::new(1.0 / s6, 0.0),
                Complex64::new(0.0, 1.0 / s3),
                Complex64::new(1.0 / s3, -1.0 / s6),
            ],
        )
    }

    #[test]
    fn obstructed_basis_is_unitary() {
        let q = obstructed_basis();
        assert!(
            unitarity_residual(&q) < 1e-12,
            "transcribed basis must be orthonormal, residual {}",
            unitarity_residual(&q)
        );
    }

    #[test]
    fn cuc_members_are_unitary_and_plain_conjugation_transposes() {
        let u = haar_unitary(5, 301);
        let c = random_conjugation(5, 302);
        let m = cuc(&c, &u).expect("cuc");
        assert!(unitarity_residual(&m.matrix) < 1e-10);
        // S = I gives C U C = conj(U) = (U*)ᵗ.
        let plain = Conjugation::plain(5);
        let m0 = cuc(&plain, &u).expect("cuc plain");
        assert!(m0.matrix.max_abs_diff(&u.conj()) == 0.0);
        // The member action agrees with applying C, U, C in sequence.
        let x = random_cvector(5, 303);
        let seq = c.apply(&u.matvec(&c.apply(&x)));
        let direct = m.matrix.matvec(&x);
        assert!(crate::numerics::vec_max_abs_diff(&seq, &direct) < 1e-12);
    }

    #[test]
    fn adjoint_witness_sends_u_to_its_adjoint() {
        for (n, seed) in [(2, 601u64), (3, 602), (6, 603), (10, 604)] {
            let u = haar_unitary(n, seed);
            let c = adjoint_witness(&u).expect("adjoint_witness");
            let m = cuc_matrix(c.factor(), &u);
            let resid = m.max_abs_diff(&u.adjoint());
            assert!(resid <= 1e-8, "n={n}: ‖CUC − U*‖ = {resid:.3e}");
        }
    }

    #[test]
    fn two_by_two_orbit_matches_closed_form() {
        // Independent oracle: hand-derived closed form of V·U·conj(V) for
        // U = diag(1, −1), with the global phase dropping out.
        let u = CMatrix::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        for (k, (theta, alpha, odd, phi)) in [
            (0.3, 0.0, false, 0.0),
            (1.1, -0.8, true, 2.0),
            (-0.45, 2.4, false, -1.3),
            (0.0, 0.7, true, 0.4),
            (std::f64::consts::FRAC_PI_2, 1.0, false, 3.0),
        ]
        .into_iter()
        .enumerate()
        {
            let c = two_by_two_factor(theta, alpha, odd, phi);
            let member = cuc(&c, &u).expect("cuc").matrix;
            let eps = if odd { -1.0 } else { 1.0 };
            let expected = CMatrix::from_data(
                2,
                2,
                vec![
                    Complex64::new((2.0 * theta).cos(), 0.0),
                    Complex64::new(0.0, -eps * (2.0 * theta).sin()) * Complex64::from_polar(1.0, alpha),
                    Complex64::new(0.0, eps * (2.0 * theta).sin()) * Complex64::from_polar(1.0, -alpha),
                    Complex64::new(-(2.0 * theta).cos(), 0.0),
                ],
            );
            let resid = member.max_abs_diff(&expected);
            assert!(resid < 1e-12, "case {k}: residual {resid:.3e}");
        }
    }

    #[test]
    fn self_in_orbit_tracks_spectrum_conjugation_symmetry() {
        // Conjugation-symmetric spectrum: yes.
        let th = 0.9;
        let d = vec![
            Complex64::from_polar(1.0, th),
            Complex64::from_polar(1.0, -th),
            Complex64::new(-1.0, 0.0),
        ];
        let w = haar_unitary(3, 71);
        let u = w.matmul(&CMatrix::diagonal(&d)).matmul(&w.adjoint());
        assert!(self_in_orbit(&u).unwrap());
        // Asymmetric spectrum: no.
        let d2 = vec![
            Complex64::from_polar(1.0, 0.5),
            Complex64::from_polar(1.0, 1.1),
        ];
        let u2 = CMatrix::diagonal(&d2);
        assert!(!self_in_orbit(&u2).unwrap());
    }

    #[test]
    fn same_member_detection() {
        let u = CMatrix::identity(4);
        let c1 = random_conjugation(4, 81);
        let c2 = random_conjugation(4, 82);
        // Every conjugation sends the identity to S·conj(S) = I.
        assert!(same_member(&c1, &c2, &u).unwrap());
        let v = haar_unitary(4, 83);
        assert!(same_member(&c1, &c1, &v).unwrap());
        assert!(!same_member(&c1, &Conjugation::plain(4), &v).unwrap());
    }

    #[test]
    fn symmetrizable_recovers_constructed_phases() {
        // Build Q = M·diag(conj(z)) from a symmetric unitary M and random
        // phases z, so that Q·diag(z) = M is symmetric by construction.
        let n = 6;
        let m = random_conjugation(n, 91).factor().clone();
        let z: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, 0.7 * j as f64 - 1.2))
            .collect();
        let q = CMatrix::from_fn(n, n, |i, j| m.get(i, j) * z[j].conj());
        let assignment = symmetrizable_by_phases(&q)
            .expect("well-posed")
            .expect("constructed case must be symmetrizable");
        let qz = CMatrix::from_fn(n, n, |i, j| q.get(i, j) * assignment.phases[j]);
        assert!(qz.symmetry_residual() < 1e-8);
        for p in &assignment.phases {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetrizable_labels_free_components() {
        let q = CMatrix::identity(4);
        let a = symmetrizable_by_phases(&q).unwrap().unwrap();
        assert_eq!(a.component_labels, vec![0, 1, 2, 3]);
        for p in &a.phases {
            assert!((p - Complex64::new(1.0, 0.0)).norm() == 0.0);
        }
    }

    #[test]
    fn obstructed_basis_fails_all_orderings() {
        let q = obstructed_basis();
        let orderings: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for ord in orderings {
            let permuted = CMatrix::from_fn(3, 3, |r, c| q.get(r, ord[c]));
            assert!(
                symmetrizable_by_phases(&permuted).unwrap().is_none(),
                "ordering {ord:?} unexpectedly symmetrizable"
            );
        }
    }

    #[test]
    fn diag_in_orbit_on_diagonal_input_reduces_to_involutions() {
        // Angles chosen ascending so the eigensolver's angular sort keeps
        // the diagonal arrangement and `ordering` acts on diagonal slots.
        let d = vec![
            Complex64::from_polar(1.0, -2.0),
            Complex64::from_polar(1.0, 0.2),
            Complex64::from_polar(1.0, 1.3),
        ];
        let u = CMatrix::diagonal(&d);
        assert!(diag_in_orbit(&u, &[0, 1, 2]).unwrap());
        assert!(diag_in_orbit(&u, &[1, 0, 2]).unwrap());
        assert!(!diag_in_orbit(&u, &[1, 2, 0]).unwrap(), "3-cycle must fail");
    }

    #[test]
    fn diag_in_orbit_rejects_collisions_and_bad_orderings() {
        assert!(matches!(
            diag_in_orbit(&CMatrix::identity(3), &[0, 1, 2]),
            Err(Error::Unsupported(_))
        ));
        let d = vec![
            Complex64::from_polar(1.0, 0.2),
            Complex64::from_polar(1.0, 1.3),
        ];
        let u = CMatrix::diagonal(&d);
        assert!(matches!(
            diag_in_orbit(&u, &[0, 0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            diag_in_orbit(&u, &[0]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn diag_in_orbit_rejects_obstructed_explicit_basis() {
        let q = obstructed_basis();
        let d = vec![
            Complex64::from_polar(1.0, 0.3),
            Complex64::from_polar(1.0, 1.7),
            Complex64::from_polar(1.0, -2.2),
        ];
        let u = q.matmul(&CMatrix::diagonal(&d)).matmul(&q.adjoint());
        for ord in [[0usize, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            assert!(
                !diag_in_orbit(&u, &ord).unwrap(),
                "ordering {ord:?} unexpectedly a member"
            );
        }
    }

    #[test]
    fn diag_in_orbit_cross_validates_against_known_basis() {
        // Independent route: for U = Q₀ D Q₀* with known Q₀, membership for
        // ordering σ must equal symmetrizability of Q₀'s σ-permuted columns.
        let mut agree = 0;
        for trial in 0..24u64 {
            let n = 2 + (trial % 5) as usize; // 2..=6
            let q0 = haar_unitary(n, 7000 + trial);
            let d: Vec<Complex64> = (0..n)
                .map(|j| Complex64::from_polar(1.0, -2.8 + 5.6 * (j as f64 + 0.3) / n as f64))
                .collect();
            let u = q0.matmul(&CMatrix::diagonal(&d)).matmul(&q0.adjoint());
            let mut ord: Vec<usize> = (0..n).collect();
            if trial % 3 == 1 && n >= 2 {
                ord.swap(0, n - 1);
            }
            if trial % 3 == 2 && n >= 3 {
                ord.rotate_left(1);
            }
            let expected = {
                let permuted = CMatrix::from_fn(n, n, |r, c| q0.get(r, ord[c]));
                symmetrizable_by_phases(&permuted).unwrap().is_some()
            };
            let got = diag_in_orbit(&u, &ord).unwrap();
            assert_eq!(got, expected, "trial {trial} n={n} ord={ord:?}");
            agree += 1;
        }
        assert_eq!(agree, 24);
    }
}
