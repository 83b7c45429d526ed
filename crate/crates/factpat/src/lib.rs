//! Polynomial factorization over finite fields with per-stage cost
//! instrumentation, and empirical verification of explicit estimates on the
//! distribution of factorization patterns over families of monic polynomials.
//!
//! The crate is organized bottom-up:
//!
//! - [`ff`] — exact arithmetic in `F_q` for `q = p^k` (enumeration, random
//!   sampling, Frobenius, p-th roots).
//! - [`poly`] — dense univariate polynomials over `F_q`: gcd, modular
//!   exponentiation, resultant, first subresultant, discriminant.
//! - [`factor`] — the classical four-stage factorization algorithm
//!   (ERF / DDF / EDF / recursion on the repeated part) with per-stage
//!   operation counters `X1..X4`.
//! - [`patterns`] — exact combinatorics of factorization / cycle patterns:
//!   weights `w(λ)`, proportions `T(λ)`, longest-cycle and distinct-length
//!   statistics.
//! - [`symfun`] — numerical verification of the symmetric-function and
//!   determinant identities used by the analysis.
//! - [`families`] — the polynomial families under study (prescribed
//!   coefficients, trinomial-plus-one, Toeplitz–Hessenberg, explicit filters)
//!   with their degree parameters `(δ, D, δ_G)`.
//! - [`estimate`] — evaluators for the explicit error bounds, with exact
//!   rational arithmetic and outward-rounded square roots.
//! - [`xpmt`] — the experiment harness: irreducible sieve, trial-division
//!   oracle, pattern and cost censuses, report emission.
//!
//! The `factpat` binary exposes all of this on the command line.

pub mod count;
pub mod error;
pub mod estimate;
pub mod factor;
pub mod families;
pub mod ff;
pub mod patterns;
pub mod poly;
pub mod symfun;
pub mod xpmt;

pub use error::Error;

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
