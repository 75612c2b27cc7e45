//! Conjugate orbits of unitary operators, at desk scale.
//!
//! A *conjugation* on a finite-dimensional complex inner-product space is an
//! antilinear, isometric involution `C`.  Every conjugation factors as
//! `C = V ∘ conj` with `V` a *symmetric* unitary matrix (`Vᵗ = V`), so the
//! whole theory is computable from the factor alone.  For a unitary `U`, the
//! *conjugate orbit* is the set of operators `CUC` with `C` ranging over all
//! conjugations; this crate implements the structure theory of that orbit and
//! verifies it numerically:
//!
//! - [`numerics`]: dense complex/real matrices, a Jacobi eigensolver for
//!   unitary matrices, Haar-distributed sampling;
//! - [`conjugations`]: conjugations, their Takagi factorization, fixed real
//!   bases, antilinear and real-linear operator algebra;
//! - [`orbit`]: orbit members `CUC`, the adjoint witness, membership of `U`
//!   itself, diagonal membership via phase-symmetrizable eigenbases;
//! - [`shift`]: the bilateral-shift lattice on a finite index window, banded
//!   symmetric factors, Toeplitz commutants, the half-circle symbol, and the
//!   wandering-subspace equivalence;
//! - [`circle`]: multiplication operators on the circle, pushforward
//!   densities of angle maps, and the membership decision for `conj(φ)·f∘α`
//!   conjugations;
//! - [`transforms`]: Fourier and Hilbert transforms on sampled line grids,
//!   their explicit eigenbases, and diagonal-model members built from
//!   order-two index permutations;
//! - [`complexify`]: the real/imaginary block picture `Û`, block conjugation
//!   identities, and orbit members computed entirely in real blocks.
//!
//! All kernels are deterministic: random inputs are drawn from a counter-based
//! stream seeded explicitly, and iterative kernels have fixed sweep orders.

pub mod circle;
pub mod complexify;
pub mod conjugations;
pub mod error;
pub mod numerics;
pub mod orbit;
pub mod shift;
pub mod transforms;

pub use error::{Error, Result};
pub use numerics::{CMatrix, CVector, Complex64, RMatrix};
