use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::mp::complex::MPComplex;
use crate::mp::real::MPReal;

/// Dense complex matrix at one shared precision.
#[derive(Clone)]
pub struct MPMatrix {
    rows: usize,
    cols: usize,
    prec: usize,
    data: Vec<MPComplex>,
}

impl MPMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: usize) -> Self {
        MPMatrix {
            rows,
            cols,
            prec,
            data: vec![MPComplex::zero(prec); rows * cols],
        }
    }

    /// Exact conversion from an integer matrix; errors when any entry does
    /// not fit the target mantissa.
    pub fn from_int(a: &IntMatrix, prec: usize) -> Result<Self> {
        let mut out = Self::zeros(a.rows(), a.cols(), prec);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                out[(i, j)] = MPComplex::from_bigint(&a[(i, j)], prec)?;
            }
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        if prec == self.prec {
            return self.clone();
        }
        let data = self
            .data
            .iter()
            .map(|z| MPComplex::new(z.re.with_precision(prec), z.im.with_precision(prec)))
            .collect();
        MPMatrix { rows: self.rows, cols: self.cols, prec, data }
    }

    /// Maximum row sum of entry moduli.
    pub fn inf_norm(&self) -> MPReal {
        let mut best = MPReal::zero(self.prec);
        for i in 0..self.rows {
            let mut sum = MPReal::zero(self.prec);
            for j in 0..self.cols {
                sum = sum.add(&self[(i, j)].modulus());
            }
            best = best.max(&sum);
        }
        best
    }

    pub fn trace(&self) -> MPComplex {
        debug_assert!(self.is_square());
        let mut t = MPComplex::zero(self.prec);
        for i in 0..self.rows {
            t = t.add(&self[(i, i)]);
        }
        t
    }
}

impl Index<(usize, usize)> for MPMatrix {
    type Output = MPComplex;
    fn index(&self, (i, j): (usize, usize)) -> &MPComplex {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for MPMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut MPComplex {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::unit_toeplitz;
    use num_bigint::BigInt;

    #[test]
    fn from_int_is_exact_and_checked() {
        let t = unit_toeplitz(4, 1, 2).unwrap();
        let m = MPMatrix::from_int(&t, 64).unwrap();
        assert!(m[(1, 0)].re == MPReal::one(64));
        assert!(m[(0, 2)].re == MPReal::one(64));
        assert!(m[(0, 0)].is_zero());

        let mut big = IntMatrix::zeros(1, 1);
        big[(0, 0)] = (BigInt::from(1) << 90) + 1;
        assert!(matches!(
            MPMatrix::from_int(&big, 64),
            Err(Error::PrecisionOverflow { .. })
        ));
        assert!(MPMatrix::from_int(&big, 128).is_ok());
    }

    #[test]
    fn inf_norm_of_two_diagonal_matrix() {
        let t = unit_toeplitz(5, 1, 2).unwrap();
        let m = MPMatrix::from_int(&t, 64).unwrap();
        assert_eq!(m.inf_norm(), MPReal::from_i64(2, 64));
    }
}
