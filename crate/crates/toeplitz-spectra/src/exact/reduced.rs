use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::exact::matrix::{binomial_band, IntMatrix};

/// Corner blocks are a function of (r, s, beta_sigma) only, so reference
/// builds are shared across orders. Concurrent reads, exclusive writes;
/// identical values make last-writer-wins harmless.
static CORNER_CACHE: Lazy<RwLock<HashMap<(usize, usize, usize), IntMatrix>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

fn check_coprime(r: usize, s: usize) -> Result<()> {
    if r == 0 || s == 0 || r > s {
        return Err(Error::InvalidOffsets { r: r as i64, s: s as i64 });
    }
    let g = r.gcd(&s);
    if g != 1 {
        return Err(Error::NonCoprime { r, s, gcd: g });
    }
    Ok(())
}

/// The two (r+s) x r integer tables whose rows select the exponents
/// (m_k, p_k) of the factors in the reduced-matrix product. Both start as
/// rectangular Toeplitz matrices built by a row recurrence; for r > 1 the
/// columns are permuted by mod(tau, 2 tau, ..., r tau; r) with the final
/// zero replaced by r.
pub fn exponent_tables(r: usize, s: usize) -> Result<(IntMatrix, IntMatrix)> {
    check_coprime(r, s)?;
    let sigma = r + s;
    let tau = s % r;
    let ri = r as i64;

    let mut m = IntMatrix::zeros(sigma, r);
    let mut p = IntMatrix::zeros(sigma, r);
    for j in 0..r {
        m[(0, j)] = BigInt::from(1);
        let base = ((s - tau) / r) as i64;
        p[(0, j)] = BigInt::from(base + i64::from(j >= r - tau));
    }
    let m_step = (-1i64).rem_euclid(ri);
    let p_step = (ri - tau as i64 - 1).rem_euclid(ri);
    for i in 1..sigma {
        for j in 0..r {
            let d = (j as i64 - i as i64).rem_euclid(ri);
            let bump = BigInt::from(i64::from(d == m_step));
            let drop = BigInt::from(i64::from(d == p_step));
            m[(i, j)] = &m[(i - 1, j)] + bump;
            p[(i, j)] = &p[(i - 1, j)] - drop;
        }
    }

    if r > 1 {
        // p_perm[k] = mod((k+1) tau, r), with the trailing zero replaced by r
        let perm: Vec<usize> = (1..=r)
            .map(|k| {
                let v = (k * tau) % r;
                if k == r { r } else { v }
            })
            .collect();
        let permute = |a: &IntMatrix| {
            let mut out = IntMatrix::zeros(sigma, r);
            for (newj, &pj) in perm.iter().enumerate() {
                for i in 0..sigma {
                    out[(i, newj)] = a[(i, pj - 1)].clone();
                }
            }
            out
        };
        m = permute(&m);
        p = permute(&p);
    }
    Ok((m, p))
}

fn table_row(t: &IntMatrix, row: usize) -> Vec<i64> {
    (0..t.cols())
        .map(|j| i64::try_from(&t[(row, j)]).expect("exponent table entries are small"))
        .collect()
}

fn raw_product(n_sigma: usize, m_row: &[i64], p_row: &[i64]) -> IntMatrix {
    let unit = binomial_band(n_sigma, 1);
    let mut b = IntMatrix::identity(n_sigma);
    for (&mk, &pk) in m_row.iter().zip(p_row) {
        b = b.mul(&binomial_band(n_sigma, mk as usize).transpose());
        if pk >= 0 {
            for _ in 0..pk {
                b = b.mul(&unit);
            }
        } else {
            for _ in 0..(-pk) {
                b = b.div_unit_upper_bidiagonal();
            }
        }
    }
    b
}

fn corner_block(r: usize, s: usize, beta: usize) -> IntMatrix {
    let key = (r, s, beta);
    if let Some(c) = CORNER_CACHE.read().expect("corner cache poisoned").get(&key) {
        return c.clone();
    }
    let sigma = r + s;
    // Reference order sigma^3 + beta: same table row, and the corner falls
    // outside the band, so its absolute value is the perturbation itself.
    let n_ref_sigma = sigma * sigma;
    let (m, p) = exponent_tables(r, s).expect("checked by caller");
    let raw = raw_product(n_ref_sigma, &table_row(&m, beta), &table_row(&p, beta));
    let k = r - 1;
    let mut block = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            block[(i, j)] = raw[(i, n_ref_sigma - k + j)].abs();
        }
    }
    CORNER_CACHE
        .write()
        .expect("corner cache poisoned")
        .insert(key, block.clone());
    block
}

/// Toeplitz-like integer matrix of order n div (r+s) whose eigenvalues are
/// the (r+s)-th powers of the positive real eigenvalues of the unit
/// two-diagonal Toeplitz matrix of order n. Requires coprime offsets; reduce
/// by the gcd first.
///
/// When mod(n, r+s) > s the factor product uses exact inverses of the unit
/// upper bidiagonal factor, which leaves an integer perturbation in the top
/// right corner; the perturbation is identified from a larger reference
/// build and removed (subtracted for odd orders, added for even ones). That
/// correction needs n > (r-1)(r+s); smaller orders in that regime are
/// rejected.
pub fn reduced_matrix(n: usize, r: usize, s: usize) -> Result<IntMatrix> {
    check_coprime(r, s)?;
    let sigma = r + s;
    let beta = n % sigma;
    let n_sigma = n / sigma;
    if n_sigma == 0 {
        return Ok(IntMatrix::zeros(0, 0));
    }
    if beta > s && n <= (r - 1) * sigma {
        return Err(Error::ManualConstructionRegime { n, r, s });
    }
    let (m, p) = exponent_tables(r, s)?;
    let mut b = raw_product(n_sigma, &table_row(&m, beta), &table_row(&p, beta));
    if beta > s {
        let block = corner_block(r, s, beta);
        let k = (r - 1).min(n_sigma);
        let negate = n_sigma % 2 == 1;
        for i in 0..k {
            for j in 0..k {
                // top-right k x k sub-block of the stored (r-1) x (r-1) corner
                let c = &block[(i, (r - 1) - k + j)];
                if negate {
                    b[(i, n_sigma - k + j)] -= c;
                } else {
                    b[(i, n_sigma - k + j)] += c;
                }
            }
        }
    }
    Ok(b)
}
