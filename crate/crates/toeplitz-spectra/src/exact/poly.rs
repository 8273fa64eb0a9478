use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::matrix::IntMatrix;

/// Polynomial with exact integer coefficients, stored ascending by degree.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::new(vec![BigInt::one()])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    /// Substitute x^k for x, spreading the coefficients.
    pub fn compose_power(&self, k: usize) -> Self {
        assert!(k >= 1, "composition power must be positive");
        let mut out = vec![BigInt::zero(); self.degree() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self::new(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Multiply by x^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.coeffs.len() == 1 && self.coeffs[0].is_zero() {
            return self.clone();
        }
        let mut out = vec![BigInt::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        Self::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.degree() > 0 {
                continue;
            }
            if !first {
                let op = if c.sign() == num_bigint::Sign::Minus { "-" } else { "+" };
                write!(f, " {op} ")?;
            } else if c.sign() == num_bigint::Sign::Minus {
                write!(f, "-")?;
            }
            let mag = c.magnitude();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exact monic characteristic polynomial det(xI - A) by the
/// Faddeev-LeVerrier recurrence. Every division in the recurrence is exact
/// for integer matrices, which is asserted.
pub fn char_poly(a: &IntMatrix) -> Result<IntPolynomial> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    if n == 0 {
        return Ok(IntPolynomial::new(coeffs));
    }
    // M_1 = I, N_k = A * M_k, c_{n-k} = -tr(N_k) / k, M_{k+1} = N_k + c_{n-k} I
    let mut n_mat = a.clone();
    coeffs[n - 1] = -n_mat.trace();
    for k in 2..=n {
        let mut m_mat = n_mat;
        let c = coeffs[n - k + 1].clone();
        for i in 0..n {
            m_mat[(i, i)] += &c;
        }
        n_mat = a.mul(&m_mat);
        let t = n_mat.trace();
        let (q, rem) = (-t).div_rem(&BigInt::from(k));
        assert!(rem.is_zero(), "Faddeev-LeVerrier division must be exact");
        coeffs[n - k] = q;
    }
    Ok(IntPolynomial::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::unit_toeplitz;

    /// Fraction-free determinant (Bareiss), an oracle independent of the
    /// Faddeev-LeVerrier path.
    fn bareiss_det(a: &IntMatrix) -> BigInt {
        let n = a.rows();
        assert!(a.is_square());
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| a[(i, j)].clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    let (q, rem) = num.div_rem(&prev);
                    assert!(rem.is_zero());
                    m[i][j] = q;
                }
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }

    #[test]
    fn char_poly_identity_3x3() {
        let p = char_poly(&IntMatrix::identity(3)).unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[-1, 3, -3, 1]));
        assert!(p.is_monic());
    }

    #[test]
    fn char_poly_of_empty_matrix_is_one() {
        let p = char_poly(&IntMatrix::zeros(0, 0)).unwrap();
        assert_eq!(p, IntPolynomial::one());
    }

    #[test]
    fn char_poly_rejects_non_square() {
        assert!(char_poly(&IntMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn char_poly_matches_det_and_trace() {
        // constant term = (-1)^n det(A); coefficient of x^(n-1) = -tr(A)
        let cases = [
            IntMatrix::from_rows(&[vec![1i64, 2], vec![1, 3]]),
            IntMatrix::from_rows(&[vec![2i64, -7, 0], vec![5, 1, 1], vec![0, 3, -4]]),
            unit_toeplitz(6, 1, 2).unwrap(),
            unit_toeplitz(7, 2, 3).unwrap(),
        ];
        for a in &cases {
            let n = a.rows();
            let p = char_poly(a).unwrap();
            let det = bareiss_det(a);
            let expect_c0 = if n % 2 == 0 { det.clone() } else { -det.clone() };
            assert_eq!(p.coefficients()[0], expect_c0);
            assert_eq!(p.coefficients()[n - 1], -a.trace());
            assert!(p.is_monic());
        }
    }

    #[test]
    fn compose_power_spreads_coefficients() {
        let q = IntPolynomial::from_i64(&[1, -4, 1]); // x^2 - 4x + 1
        assert_eq!(
            q.compose_power(3),
            IntPolynomial::from_i64(&[1, 0, 0, -4, 0, 0, 1])
        );
        let x = IntPolynomial::from_i64(&[0, 1]);
        assert_eq!(
            x.compose_power(5),
            IntPolynomial::from_i64(&[0, 0, 0, 0, 0, 1])
        );
        let q8 = IntPolynomial::from_i64(&[6, -6, 1]); // x^2 - 6x + 6
        assert_eq!(
            q8.compose_power(3),
            IntPolynomial::from_i64(&[6, 0, 0, -6, 0, 0, 1])
        );
    }

    #[test]
    fn poly_display_is_readable() {
        let q = IntPolynomial::from_i64(&[1, -4, 1]);
        assert_eq!(q.to_string(), "x^2 - 4x + 1");
    }
}
