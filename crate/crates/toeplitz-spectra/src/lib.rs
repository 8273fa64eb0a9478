//! Spectra of Toeplitz matrices with two off-diagonals.
//!
//! A Toeplitz matrix with ones on its r-th subdiagonal and s-th
//! superdiagonal has a spectrum with an exact rotational structure: all of
//! its eigenvalues are rotations of a small set of positive real values
//! (plus a known number of zeros), and those positive values are roots of
//! the characteristic polynomial of a much smaller integer matrix that this
//! crate constructs exactly. The crate provides
//!
//! - exact big-integer construction of all involved matrices and their
//!   characteristic polynomials ([`exact`]),
//! - a configurable-precision complex eigensolver (Hessenberg reduction plus
//!   shifted QR) used both by the fast path and as a brute-force oracle
//!   ([`mp`], [`mplinalg`]),
//! - the spectrum algorithms themselves ([`spectrum`], [`params`]),
//! - verification tooling: exact characteristic-polynomial identities, a
//!   spectral error metric, condition numbers, and a timing harness
//!   ([`verify`]).

pub mod error;
pub mod exact;
pub mod mp;
pub mod mplinalg;
pub mod par;
pub mod params;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
