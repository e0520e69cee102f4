//! Exact-amplitude simulation of one-dimensional quantum cellular automata
//! (QCA) and coined quantum walks, together with machine checks of the
//! correspondences between the two model families.
//!
//! The lattice is the integers and every state is finitely supported, so
//! evolution is exact up to floating-point round-off and never truncated.
//!
//! * [`amplitudes`]: sparse amplitude fields and probability distributions.
//! * [`qca`]: parameter tuples `(a, b, c, d)`, unitarity checks,
//!   classification and the banded QCA step.
//! * [`coined`]: plain and generalized (stay-put) A/B-type coined walks.
//! * [`correspondence`]: QCA ↔ walk identities, two-step coin
//!   factorizations and the even/odd layer factorization.
//! * [`asymptotics`]: the closed-form weak-limit law of the symmetric
//!   walk and finite-`n` comparisons against it.

pub mod amplitudes;
pub mod asymptotics;
pub mod coined;
pub mod correspondence;
pub mod linalg;
pub mod qca;

pub use num_complex::Complex64;

/// Tolerance used for every exact identity checked by this crate.
pub const IDENTITY_TOL: f64 = 1e-12;
