//! Property tests over randomized dimensions and seeds: structural
//! invariants that must hold for *every* conjugation, unitary, and angle
//! map, not just the curated examples.

use conjorbit::circle::{involution_residual, CircleMap};
use conjorbit::conjugations::{
    c_real_basis, compose_conjugations, random_conjugation, random_cvector,
};
use conjorbit::numerics::{
    cdot, haar_unitary, unitarity_residual, unitary_eig, vec_max_abs_diff, CMatrix,
};
use conjorbit::orbit::{adjoint_witness, cuc, self_in_orbit};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every random conjugation is an antilinear isometric involution.
    #[test]
    fn conjugations_are_involutive_isometries(n in 2usize..9, seed in 0u64..10_000) {
        let c = random_conjugation(n, seed);
        prop_assert!(c.involution_residual() < 1e-8 * n as f64);
        let x = random_cvector(n, seed ^ 0xabcd);
        let y = random_cvector(n, seed ^ 0x1234);
        let cx = c.apply(&x);
        let cy = c.apply(&y);
        // Antiunitarity: ⟨Cx, Cy⟩ = conj(⟨x, y⟩).
        let lhs = cdot(&cx, &cy);
        let rhs = cdot(&x, &y).conj();
        prop_assert!((lhs - rhs).norm() < 1e-8 * n as f64);
    }

    /// Orbit members are unitary and share the conjugated spectrum shape:
    /// conjugating twice by the same conjugation restores the operator.
    #[test]
    fn conjugating_twice_restores_the_unitary(n in 2usize..9, seed in 0u64..10_000) {
        let u = haar_unitary(n, seed);
        let c = random_conjugation(n, seed ^ 0x55aa);
        let v = cuc(&c, &u).unwrap().matrix;
        prop_assert!(unitarity_residual(&v) < 1e-8 * n as f64);
        let back = cuc(&c, &v).unwrap().matrix;
        prop_assert!(back.max_abs_diff(&u) < 1e-8 * n as f64);
    }

    /// The eigensolver reconstructs the unitary it factors.
    #[test]
    fn unitary_eigensolver_reconstructs(n in 2usize..9, seed in 0u64..10_000) {
        let u = haar_unitary(n, seed);
        let eig = unitary_eig(&u).unwrap();
        let lambda = CMatrix::diagonal(&eig.eigenvalues);
        let rebuilt = eig
            .eigenvectors
            .matmul(&lambda)
            .matmul(&eig.eigenvectors.adjoint());
        prop_assert!(rebuilt.max_abs_diff(&u) < 1e-7 * n as f64);
    }

    /// The adjoint witness always works: C U C = U*.
    #[test]
    fn adjoint_witness_always_lands_on_the_adjoint(n in 2usize..9, seed in 0u64..10_000) {
        let u = haar_unitary(n, seed);
        let c = adjoint_witness(&u).unwrap();
        let member = cuc(&c, &u).unwrap().matrix;
        prop_assert!(member.max_abs_diff(&u.adjoint()) < 1e-8 * n as f64);
    }

    /// Composition of two conjugations is linear with the expected factor,
    /// and fixed frames are genuinely fixed.
    #[test]
    fn composition_and_fixed_frames(n in 2usize..8, seed in 0u64..10_000) {
        let c1 = random_conjugation(n, seed);
        let c2 = random_conjugation(n, seed ^ 0x77);
        let m = compose_conjugations(&c1, &c2).unwrap();
        let x = random_cvector(n, seed ^ 0x99);
        let direct = c1.apply(&c2.apply(&x));
        let via_matrix = m.matvec(&x);
        prop_assert!(vec_max_abs_diff(&direct, &via_matrix) < 1e-9 * n as f64);

        let basis = c_real_basis(&c1).unwrap();
        for j in 0..n {
            let col = basis.column(j);
            let fixed = c1.apply(&col);
            prop_assert!(vec_max_abs_diff(&fixed, &col) < 1e-8);
        }
    }

    /// A unitary with conjugation-symmetric spectrum contains itself in its
    /// orbit; randomly phased diagonals with an added conjugate pair do.
    #[test]
    fn symmetric_spectra_put_u_in_its_own_orbit(n in 1usize..4, seed in 0u64..10_000) {
        use conjorbit::numerics::Complex64;
        let mut rng_angle = |k: u64| {
            let h = seed.wrapping_mul(6364136223846793005).wrapping_add(k);
            ((h >> 11) as f64 / (1u64 << 53) as f64) * std::f64::consts::PI - std::f64::consts::PI / 2.0
        };
        // n conjugate pairs e^{±iθ}: spectrum symmetric by construction.
        let mut ev = Vec::new();
        for k in 0..n {
            let t = rng_angle(k as u64);
            ev.push(Complex64::from_polar(1.0, t));
            ev.push(Complex64::from_polar(1.0, -t));
        }
        let u = CMatrix::diagonal(&ev);
        prop_assert!(self_in_orbit(&u).unwrap());
    }

    /// Catalog reflections are involutions at every axis.
    #[test]
    fn reflections_are_involutions(axis in -3.1f64..3.1) {
        let alpha = CircleMap::reflection(axis);
        prop_assert!(involution_residual(&alpha, 1 << 8) < 1e-9);
    }
}
