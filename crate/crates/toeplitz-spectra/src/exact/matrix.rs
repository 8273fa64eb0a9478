use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};

/// Dense matrix of arbitrary-precision integers.
///
/// Entries are unbounded: the reduced matrices for large offsets carry values
/// past 2^63, so machine integers are never used for storage. Band structure
/// is exploited only inside the multiplication kernel; the data model stays
/// dense.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from rows of machine integers; intended for fixtures and tests.
    pub fn from_rows<I: Into<BigInt> + Clone>(rows: &[Vec<I>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().cloned().map(Into::into))
            .collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self[(i, j)].is_zero() {
                    t[(j, i)] = self[(i, j)].clone();
                }
            }
        }
        t
    }

    pub fn trace(&self) -> BigInt {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| &self[(i, i)]).sum()
    }

    /// Matrix product, skipping zero entries of the left factor. For the
    /// banded factors used throughout, this brings the cost down from n^3 to
    /// n * bandwidth^2 without leaving the dense representation.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let crow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (cj, oj) in crow.iter_mut().zip(orow) {
                    if !oj.is_zero() {
                        *cj += a * oj;
                    }
                }
            }
        }
        out
    }

    /// Right-multiply by the exact inverse of the unit upper bidiagonal
    /// matrix K (ones on the diagonal and first superdiagonal). K^-1 is upper
    /// triangular with entries (-1)^(j-i), so the product satisfies the
    /// column recurrence C[:,0] = B[:,0], C[:,j] = B[:,j] - C[:,j-1] and
    /// stays integer-valued.
    pub fn div_unit_upper_bidiagonal(&self) -> IntMatrix {
        let mut out = self.clone();
        for j in 1..self.cols {
            for i in 0..self.rows {
                let prev = out[(i, j - 1)].clone();
                out[(i, j)] -= prev;
            }
        }
        out
    }

    /// Largest absolute entry; zero for an empty matrix.
    pub fn max_abs_entry(&self) -> BigInt {
        self.data
            .iter()
            .map(|v| v.magnitude().clone())
            .max()
            .map(BigInt::from)
            .unwrap_or_else(BigInt::zero)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Dump format: rows, cols and row-major decimal strings, so entries survive
/// any JSON consumer without 64-bit truncation.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("IntMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        let entries: Vec<String> = self.data.iter().map(|v| v.to_string()).collect();
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Toeplitz matrix with ones on the r-th subdiagonal and the s-th
/// superdiagonal and zeros elsewhere.
pub fn unit_toeplitz(n: usize, r: usize, s: usize) -> Result<IntMatrix> {
    if n == 0 {
        return Err(Error::InvalidOrder { n: 0 });
    }
    if r == 0 || s == 0 {
        return Err(Error::InvalidOffsets { r: r as i64, s: s as i64 });
    }
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        if i >= r {
            m[(i, i - r)] = BigInt::one();
        }
        if i + s < n {
            m[(i, i + s)] = BigInt::one();
        }
    }
    Ok(m)
}

/// Banded Toeplitz factor with binomial(m, k+1) on the k-th diagonal for
/// k = -1..m-1 (counting subdiagonals as positive): ones on the first
/// superdiagonal, binomial(m, 1) on the main diagonal, and so on down to
/// binomial(m, m) on the (m-1)-th subdiagonal.
pub fn binomial_band(n: usize, m: usize) -> IntMatrix {
    // diag_value[d+1] = binomial(m, d+1) for diagonal offset d = i-j in -1..=m-1
    let mut values = Vec::with_capacity(m + 1);
    let mut b = BigInt::one(); // binomial(m, 0)
    values.push(b.clone());
    for k in 0..m {
        b = b * BigInt::from(m - k) / BigInt::from(k + 1);
        values.push(b.clone());
    }
    let mut out = IntMatrix::zeros(n, n);
    for i in 0..n {
        // valid columns satisfy -1 <= i-j <= m-1
        let lo = (i + 1).saturating_sub(m);
        let hi = (i + 1).min(n.saturating_sub(1));
        for j in lo..=hi {
            let d = i as i64 - j as i64;
            if d >= -1 {
                out[(i, j)] = values[(d + 1) as usize].clone();
            }
        }
    }
    out
}
