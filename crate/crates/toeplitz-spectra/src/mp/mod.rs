//! Configurable-precision real and complex scalars and dense matrices.
//!
//! Precision is explicit everywhere: every value carries its mantissa width
//! in bits and operations never mix widths. Machine epsilon at precision p
//! is 2^(1-p).

mod complex;
mod matrix;
mod real;

pub use complex::{sort_spectrum, MPComplex};
pub use matrix::MPMatrix;
pub use real::MPReal;
