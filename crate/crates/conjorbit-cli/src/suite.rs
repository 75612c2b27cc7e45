//! The reproducible verification suite: one deterministic battery of
//! checks per theory family, reported with measured residuals against
//! pinned tolerances.  All randomness is derived from the suite seed, so
//! two runs with the same seed produce identical reports (up to wall
//! clock; see [`SuiteReport::canonical_json`]).

use crate::report::{CheckRecord, SuiteReport};
use conjorbit::circle::{mult_orbit_decision, CircleMap, CircleSymbol};
use conjorbit::complexify::{
    block_conjugation_check, conjugation_blocks, orbit_via_blocks, wblock_generate,
};
use conjorbit::conjugations::{c_real_basis, random_conjugation, Conjugation};
use conjorbit::numerics::{haar_unitary, unitary_eig, vec_max_abs_diff, CMatrix};
use conjorbit::orbit::{
    adjoint_witness, cuc, cuc_matrix, diag_in_orbit, symmetrizable_by_phases, two_by_two_factor,
};
use conjorbit::shift::{
    diagonal_factor, halfcircle_coeffs, halfcircle_window, hankel_flip, householder_block_factor,
    shift_orbit_member, toeplitz_commutant_check, wandering_equivalence, window_basis,
    window_shift,
};
use conjorbit::transforms::{
    fourier_apply, hermite_basis, hilbert_apply_pv, hilbert_gram, hilbert_vector,
    sigma_diagonal_member, LineGrid,
};
use conjorbit::Complex64;
use std::time::Instant;

/// Sentinel residual for checks that fail structurally (an unexpected
/// decision or an error) rather than by a measured tolerance; finite so the
/// report stays valid JSON.
const BROKEN: f64 = 9e99;

fn run_check(
    check_id: &str,
    anchor: &str,
    tolerance: f64,
    body: impl FnOnce() -> Result<f64, String>,
) -> CheckRecord {
    let start = Instant::now();
    let residual = match body() {
        Ok(r) => r,
        Err(_) => BROKEN,
    };
    let status = if residual <= tolerance { "pass" } else { "fail" };
    CheckRecord {
        check_id: check_id.to_string(),
        anchor: anchor.to_string(),
        status: status.to_string(),
        residual,
        tolerance,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

fn err_str(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Run the complete verification battery.
pub fn run_suite(seed: u64) -> SuiteReport {
    let mut records = Vec::new();

    // 01 — adjoint witness: C U C = U* for eigenbasis-derived factors.
    records.push(run_check("01-adjoint-witness", "adjoint-witness", 1e-8, || {
        let mut worst: f64 = 0.0;
        for (k, n) in [3usize, 5, 8, 10, 13, 16].into_iter().enumerate() {
            let u = haar_unitary(n, seed.wrapping_add(101 + k as u64));
            let c = adjoint_witness(&u).map_err(err_str)?;
            let member = cuc(&c, &u).map_err(err_str)?.matrix;
            worst = worst.max(member.max_abs_diff(&u.adjoint()));
        }
        Ok(worst)
    }));

    // 02 — planar family: 2×2 conjugations of diag(1, −1) against the
    // hand-derived closed form.
    records.push(run_check("02-planar-family", "planar-family", 1e-12, || {
        let u = CMatrix::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        let mut worst: f64 = 0.0;
        for (i, theta) in [0.0, 0.3, -0.45, 1.1].into_iter().enumerate() {
            for (j, alpha) in [0.0, 0.7, 2.4].into_iter().enumerate() {
                for odd in [false, true] {
                    let phi = 0.7 * i as f64 - 1.1 * j as f64;
                    let c = two_by_two_factor(theta, alpha, odd, phi);
                    let member = cuc(&c, &u).map_err(err_str)?.matrix;
                    let eps = if odd { -1.0 } else { 1.0 };
                    let expected = CMatrix::from_data(
                        2,
                        2,
                        vec![
                            Complex64::new((2.0 * theta).cos(), 0.0),
                            Complex64::new(0.0, -eps * (2.0 * theta).sin())
                                * Complex64::from_polar(1.0, alpha),
                            Complex64::new(0.0, eps * (2.0 * theta).sin())
                                * Complex64::from_polar(1.0, -alpha),
                            Complex64::new(-(2.0 * theta).cos(), 0.0),
                        ],
                    );
                    worst = worst.max(member.max_abs_diff(&expected));
                }
            }
        }
        Ok(worst)
    }));

    // 03 — diagonal ordering decisions: on a diagonal unitary, involutive
    // orderings admit members and cycles do not; a generic (Haar) eigenbasis
    // obstructs every ordering; and each positive decision is certified by
    // actually constructing the conjugation and landing on the expected
    // diagonal member.
    records.push(run_check(
        "03-diagonal-ordering",
        "diagonal-ordering",
        1e-8,
        || {
            let angles = |n: usize| -> Vec<Complex64> {
                (0..n)
                    .map(|j| {
                        Complex64::from_polar(1.0, -2.8 + 5.6 * (j as f64 + 0.3) / n as f64)
                    })
                    .collect()
            };
            let mut worst: f64 = 0.0;
            let certify = |u: &CMatrix, ordering: &[usize]| -> Result<f64, String> {
                let eig = unitary_eig(u).map_err(err_str)?;
                let n = u.rows();
                let permuted =
                    CMatrix::from_fn(n, n, |r, c| eig.eigenvectors.get(r, ordering[c]));
                let pa = symmetrizable_by_phases(&permuted)
                    .map_err(err_str)?
                    .ok_or_else(|| "missing certificate".to_string())?;
                let s = CMatrix::from_fn(n, n, |r, c| permuted.get(r, c) * pa.phases[c]);
                let c = Conjugation::from_symmetric(s, 1e-8).map_err(err_str)?;
                let member = cuc(&c, u).map_err(err_str)?.matrix;
                let expected = CMatrix::diagonal(
                    &ordering
                        .iter()
                        .map(|&j| eig.eigenvalues[j].conj())
                        .collect::<Vec<_>>(),
                );
                Ok(member.max_abs_diff(&expected))
            };

            // Diagonal input: decision ⟺ the ordering is an involution.
            let u = CMatrix::diagonal(&angles(4));
            for (ordering, expect) in [
                (vec![0usize, 1, 2, 3], true),
                (vec![1, 0, 3, 2], true),
                (vec![3, 1, 2, 0], true),
                (vec![1, 2, 3, 0], false),
                (vec![1, 2, 0, 3], false),
            ] {
                if diag_in_orbit(&u, &ordering).map_err(err_str)? != expect {
                    return Ok(BROKEN);
                }
                if expect {
                    worst = worst.max(certify(&u, &ordering)?);
                }
            }

            // Real-symmetric (Householder) eigenbasis: the identity ordering
            // is certified; the basis stays in place under conjugation.
            let refl = [2.0, -1.0, 0.5, 1.5];
            let norm2: f64 = refl.iter().map(|x| x * x).sum();
            let h = conjorbit::numerics::RMatrix::from_fn(4, 4, |r, c| {
                (if r == c { 1.0 } else { 0.0 }) - 2.0 * refl[r] * refl[c] / norm2
            })
            .to_cmatrix();
            let rotated = h.matmul(&u).matmul(&h.adjoint());
            if !diag_in_orbit(&rotated, &[0, 1, 2, 3]).map_err(err_str)? {
                return Ok(BROKEN);
            }
            worst = worst.max(certify(&rotated, &[0, 1, 2, 3])?);

            // Generic eigenbasis: no ordering admits a diagonal member.
            for k in 0..3u64 {
                let nn = 3 + k as usize;
                let d = CMatrix::diagonal(&angles(nn));
                let w = haar_unitary(nn, seed.wrapping_add(300 + k));
                let generic = w.matmul(&d).matmul(&w.adjoint());
                let mut invol: Vec<usize> = (0..nn).collect();
                invol.swap(0, nn - 1);
                let mut cycle: Vec<usize> = (0..nn).collect();
                cycle.rotate_left(1);
                for ordering in [invol, cycle] {
                    if diag_in_orbit(&generic, &ordering).map_err(err_str)? {
                        return Ok(BROKEN);
                    }
                }
            }
            Ok(worst)
        },
    ));

    // 04 — conjugation frames: fixed orthonormal bases from the symmetric
    // factor decomposition.
    records.push(run_check("04-takagi-frame", "conjugation-frames", 1e-8, || {
        let mut worst: f64 = 0.0;
        for (k, n) in [2usize, 5, 8, 10, 12].into_iter().enumerate() {
            let c = random_conjugation(n, seed.wrapping_add(400 + k as u64));
            let basis = c_real_basis(&c).map_err(err_str)?;
            worst = worst.max(
                basis
                    .adjoint()
                    .matmul(&basis)
                    .max_abs_diff(&CMatrix::identity(n)),
            );
            for j in 0..n {
                let col = basis.column(j);
                worst = worst.max(vec_max_abs_diff(&c.apply(&col), &col));
            }
        }
        Ok(worst)
    }));

    // 05 — shift-window members: W = C M C computed two ways for the flip,
    // a diagonal factor, and a Householder block.
    records.push(run_check("05-window-members", "shift-windows", 1e-10, || {
        let n = 64i64;
        let shift = window_shift(n);
        let factors = vec![
            hankel_flip(n),
            diagonal_factor(n, |j| Complex64::from_polar(1.0, 0.37 * j as f64)),
            householder_block_factor(n, 5, &[3.0, -1.0, 2.0]).map_err(err_str)?,
        ];
        let mut worst: f64 = 0.0;
        for v in &factors {
            let member = shift_orbit_member(v).map_err(err_str)?;
            let composed = v
                .matrix()
                .matmul(shift.matrix())
                .matmul(&v.matrix().conj());
            for j in -member.core_radius()..=member.core_radius() {
                let e = window_basis(n, j);
                let lhs = member.matrix().matvec(&e);
                let rhs = composed.matvec(&e);
                worst = worst.max(vec_max_abs_diff(&lhs, &rhs));
            }
        }
        Ok(worst)
    }));

    // 06 — half-circle coefficients: closed form against a fine Riemann
    // quadrature of the symbol (jump points averaged).
    records.push(run_check(
        "06-halfcircle-coefficients",
        "halfcircle-coefficients",
        1e-8,
        || {
            let g = 1 << 18;
            let mut worst: f64 = 0.0;
            for n in 0..=64i64 {
                let mut acc = 0.0;
                for m in 0..g {
                    let t = -std::f64::consts::PI
                        + 2.0 * std::f64::consts::PI * m as f64 / g as f64;
                    let c = t.cos();
                    let sym = if c.abs() < 1e-15 {
                        0.0
                    } else if c > 0.0 {
                        1.0
                    } else {
                        -1.0
                    };
                    acc += sym * (n as f64 * t).cos();
                }
                let quad = acc / g as f64;
                worst = worst.max((halfcircle_coeffs(n) - quad).abs());
            }
            Ok(worst)
        },
    ));

    // 07 — Toeplitz commutant: the truncated half-circle window commutes
    // with the shift on the core and is diagonal-constant.
    records.push(run_check(
        "07-toeplitz-commutant",
        "toeplitz-commutant",
        1e-6,
        || {
            let w = halfcircle_window(64, 32).to_window_op();
            let rep = toeplitz_commutant_check(&w).map_err(err_str)?;
            if !rep.commutes || !rep.is_toeplitz {
                return Ok(BROKEN);
            }
            Ok(rep.commutator_residual.max(rep.toeplitz_residual))
        },
    ));

    // 08 — multiplication-symbol membership: the quadratic flip is a
    // member; the ±1 symbol fails the range prescan; the increasing
    // reparametrization fails the involution condition.
    records.push(run_check(
        "08-symbol-membership",
        "symbol-membership",
        1e-3,
        || {
            let g = 1 << 14;
            let flip = mult_orbit_decision(
                &CircleSymbol::from_angle_fn(|t| {
                    if t >= 0.0 {
                        -t * t / std::f64::consts::PI
                    } else {
                        (-std::f64::consts::PI * t).sqrt()
                    }
                }),
                &CircleMap::quadratic_flip(),
                g,
                1e-3,
            )
            .map_err(err_str)?;
            let half = mult_orbit_decision(
                &CircleSymbol::halfcircle(),
                &CircleMap::halfcircle_action(),
                g,
                1e-3,
            )
            .map_err(err_str)?;
            let power = CircleMap::power_increasing(1.5).map_err(err_str)?;
            let incr = mult_orbit_decision(
                &CircleSymbol::from_angle_fn(|t| {
                    -std::f64::consts::PI
                        + 2.0
                            * std::f64::consts::PI
                            * ((t + std::f64::consts::PI) / (2.0 * std::f64::consts::PI))
                                .powf(1.5)
                }),
                &power,
                g,
                1e-3,
            )
            .map_err(err_str)?;
            let decisions_ok = flip.member
                && !half.member
                && half.condition_a.is_none() // prescan short-circuited
                && !incr.member
                && incr.condition_a == Some(false);
            if !decisions_ok {
                return Ok(BROKEN);
            }
            Ok(flip.pairing_residual.unwrap_or(BROKEN))
        },
    ));

    // 09 — Fourier eigenrelation on Hermite functions.
    records.push(run_check(
        "09-fourier-eigenrelation",
        "fourier-model",
        1e-6,
        || {
            let grid = LineGrid::new(30.0, 2001).map_err(err_str)?;
            let basis = hermite_basis(&grid, 13);
            let mut worst: f64 = 0.0;
            for (n, h) in basis.iter().enumerate() {
                let fh = fourier_apply(&grid, h).map_err(err_str)?;
                let lambda = Complex64::new(0.0, -1.0).powu(n as u32);
                let expect: Vec<Complex64> = h.iter().map(|&v| v * lambda).collect();
                worst = worst.max(grid.max_abs_diff(&fh, &expect));
            }
            Ok(worst)
        },
    ));

    // 10 — Fourier diagonal model in its own orbit via the swap 4m+1↔4m+3.
    records.push(run_check(
        "10-fourier-permutation",
        "fourier-model",
        1e-12,
        || {
            let ev: Vec<Complex64> = (0..21).map(|n| Complex64::new(0.0, -1.0).powu(n)).collect();
            let mut sigma: Vec<usize> = (0..21).collect();
            for m in 0..5 {
                sigma.swap(4 * m + 1, 4 * m + 3);
            }
            let out = sigma_diagonal_member(&ev, &sigma).map_err(err_str)?;
            Ok(out.member.max_abs_diff(&CMatrix::diagonal(&ev)))
        },
    ));

    // 11 — Hilbert Gram matrix with analytic tail corrections.
    records.push(run_check("11-hilbert-gram", "hilbert-model", 1e-6, || {
        let grid = LineGrid::new(400.0, 60001).map_err(err_str)?;
        let orders: Vec<i64> = (-8..8).collect();
        let gram = hilbert_gram(&grid, &orders);
        Ok(gram.max_abs_diff(&CMatrix::identity(orders.len())))
    }));

    // 12 — principal-value Hilbert eigenrelation on Cauchy kernels.
    records.push(run_check("12-hilbert-pv", "hilbert-model", 1e-2, || {
        let grid = LineGrid::new(200.0, 15001).map_err(err_str)?;
        let mut worst: f64 = 0.0;
        for n in [0i64, -1] {
            let f = hilbert_vector(&grid, n);
            let hf = hilbert_apply_pv(&grid, &f).map_err(err_str)?;
            let lambda = if n >= 0 {
                Complex64::new(0.0, -1.0)
            } else {
                Complex64::new(0.0, 1.0)
            };
            for (m, &x) in grid.nodes().iter().enumerate() {
                if x.abs() <= grid.half_length() / 2.0 {
                    worst = worst.max((hf[m] - f[m] * lambda).norm());
                }
            }
        }
        Ok(worst)
    }));

    // 13 — Hilbert diagonal model in its own orbit via index reversal.
    records.push(run_check(
        "13-hilbert-permutation",
        "hilbert-model",
        1e-12,
        || {
            let ev: Vec<Complex64> = (-8..8i64)
                .map(|n| {
                    if n >= 0 {
                        Complex64::new(0.0, -1.0)
                    } else {
                        Complex64::new(0.0, 1.0)
                    }
                })
                .collect();
            let sigma: Vec<usize> = (0..16).map(|p| 15 - p).collect();
            let out = sigma_diagonal_member(&ev, &sigma).map_err(err_str)?;
            Ok(out.member.max_abs_diff(&CMatrix::diagonal(&ev)))
        },
    ));

    // 14 — block realification: real 2n×2n route vs complex route over
    // adjoint-witness frames, plus the block relations of the source.
    records.push(run_check(
        "14-block-realification",
        "block-realification",
        6e-8,
        || {
            let n = 6;
            let mut worst: f64 = 0.0;
            for k in 0..3u64 {
                let u = haar_unitary(n, seed.wrapping_add(1400 + k));
                let c = adjoint_witness(&u).map_err(err_str)?;
                let real = conjorbit::complexify::Realification::new(&u, &c).map_err(err_str)?;
                for r in real.block_relation_residuals() {
                    worst = worst.max(r);
                }
                let (wr, wc) = wblock_generate(n, seed.wrapping_add(1470 + k));
                let out = orbit_via_blocks(&u, &c, &wr, &wc).map_err(err_str)?;
                worst = worst.max(out.agreement);
            }
            Ok(worst)
        },
    ));

    // 15 — block anatomy of conjugations on a direct sum.
    records.push(run_check("15-block-anatomy", "block-anatomy", 1e-7, || {
        let c = random_conjugation(8, seed.wrapping_add(1500));
        let [n1, n2, n3, n4] = conjugation_blocks(&c).map_err(err_str)?;
        let report = block_conjugation_check(&n1, &n2, &n3, &n4).map_err(err_str)?;
        Ok(report.max_residual())
    }));

    // 16 — wandering-subspace relabeling of shift powers.
    records.push(run_check(
        "16-wandering-blocks",
        "wandering-blocks",
        1e-12,
        || {
            let mut worst: f64 = 0.0;
            for k in 1..=3 {
                let rep = wandering_equivalence(k, 24).map_err(err_str)?;
                if rep.wandering_dim != k {
                    return Ok(BROKEN);
                }
                worst = worst.max(rep.residual);
            }
            Ok(worst)
        },
    ));

    SuiteReport::new(seed, records)
}

/// Self-contained member computation used by the `orbit member` command:
/// conjugates `u` by the conjugation with symmetric factor `s` and
/// re-verifies the result is unitary.
pub fn member_from_factor(
    s: CMatrix,
    u: &CMatrix,
) -> anyhow::Result<(CMatrix, f64)> {
    let c = Conjugation::from_symmetric(s, 1e-8).map_err(|e| anyhow::anyhow!("{e}"))?;
    let member = cuc(&c, u).map_err(|e| anyhow::anyhow!("{e}"))?.matrix;
    let composed = cuc_matrix(c.factor(), u);
    let agreement = member.max_abs_diff(&composed);
    Ok((member, agreement))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_is_deterministic() {
        let a = run_suite(20260815);
        assert!(
            a.passed(),
            "suite failed:\n{}",
            a.table()
        );
        assert_eq!(a.records.len(), 16);
        let b = run_suite(20260815);
        assert_eq!(a.canonical_json(), b.canonical_json());
    }
}
