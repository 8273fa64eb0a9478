//! Exact integer constructions: the unit two-diagonal Toeplitz matrices, the
//! banded binomial factors, the reduced matrices carrying the positive real
//! spectrum, and exact characteristic polynomials.

mod matrix;
mod poly;
mod reduced;

pub use matrix::{binomial_band, unit_toeplitz, IntMatrix};
pub use poly::{char_poly, IntPolynomial};
pub use reduced::{exponent_tables, reduced_matrix};
