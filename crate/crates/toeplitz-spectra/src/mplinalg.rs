//! Dense nonsymmetric eigensolver at configurable precision: unitary
//! Hessenberg reduction followed by implicit single-shift QR with Wilkinson
//! shifts, in complex arithmetic throughout (also for real input; the
//! precision cost dominates either way).

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::mp::{sort_spectrum, MPComplex, MPMatrix, MPReal};

/// Iterations allowed per undeflated eigenvalue.
const MAX_ITERS_PER_EIGENVALUE: usize = 30;
/// An ad hoc shift is substituted every this many stalled iterations.
const EXCEPTIONAL_EVERY: usize = 10;

/// Reduce to upper Hessenberg form by Householder similarity transforms.
/// Entries below the first subdiagonal are exactly zero on return.
pub fn hessenberg(a: &MPMatrix) -> Result<MPMatrix> {
    a.require_square()?;
    let mut h = a.clone();
    let n = h.rows();
    let p = h.precision();
    let two = MPReal::from_i64(2, p);
    for k in 0..n.saturating_sub(2) {
        let tail_zero = (k + 2..n).all(|i| h[(i, k)].is_zero());
        if tail_zero {
            continue;
        }
        let mut norm_sq = MPReal::zero(p);
        for i in k + 1..n {
            norm_sq = norm_sq.add(&h[(i, k)].modulus_sq());
        }
        let norm = norm_sq.sqrt();
        let alpha = h[(k + 1, k)].clone();
        let phase = if alpha.is_zero() {
            MPComplex::one(p)
        } else {
            alpha.scale(&MPReal::one(p).div(&alpha.modulus()))
        };
        // reflector v = x + phase * ||x|| * e1, P = I - tau v v^H with real tau
        let mut v: Vec<MPComplex> = (k + 1..n).map(|i| h[(i, k)].clone()).collect();
        v[0] = v[0].add(&phase.scale(&norm));
        let mut vhv = MPReal::zero(p);
        for z in &v {
            vhv = vhv.add(&z.modulus_sq());
        }
        if vhv.is_zero() {
            continue;
        }
        let tau = two.div(&vhv);

        // P acts on rows k+1..n; column k is set from the closed form below
        for j in k + 1..n {
            let mut w = MPComplex::zero(p);
            for (idx, i) in (k + 1..n).enumerate() {
                w = w.add(&v[idx].conj().mul(&h[(i, j)]));
            }
            w = w.scale(&tau);
            for (idx, i) in (k + 1..n).enumerate() {
                let upd = h[(i, j)].sub(&w.mul(&v[idx]));
                h[(i, j)] = upd;
            }
        }
        // and on columns k+1..n from the right
        for i in 0..n {
            let mut w = MPComplex::zero(p);
            for (idx, j) in (k + 1..n).enumerate() {
                w = w.add(&h[(i, j)].mul(&v[idx]));
            }
            w = w.scale(&tau);
            for (idx, j) in (k + 1..n).enumerate() {
                let upd = h[(i, j)].sub(&w.mul(&v[idx].conj()));
                h[(i, j)] = upd;
            }
        }
        h[(k + 1, k)] = phase.scale(&norm).neg();
        for i in k + 2..n {
            h[(i, k)] = MPComplex::zero(p);
        }
    }
    Ok(h)
}

/// Complex Givens rotation G = [[c, s], [-conj(s), c]] with real c, mapping
/// (a, b) to (r, 0).
fn givens(a: &MPComplex, b: &MPComplex) -> (MPReal, MPComplex) {
    let p = a.precision();
    if b.is_zero() {
        return (MPReal::one(p), MPComplex::zero(p));
    }
    if a.is_zero() {
        let babs = b.modulus();
        return (MPReal::zero(p), b.conj().scale(&MPReal::one(p).div(&babs)));
    }
    let aabs = a.modulus();
    let rho = aabs.hypot(&b.modulus());
    let c = aabs.div(&rho);
    let unit_a = a.scale(&MPReal::one(p).div(&aabs));
    let s = unit_a.mul(&b.conj()).scale(&MPReal::one(p).div(&rho));
    (c, s)
}

/// Eigenvalues of the trailing 2x2 of the active block; the one closer to
/// the bottom corner is the Wilkinson shift.
fn wilkinson_shift(h: &MPMatrix, m: usize) -> MPComplex {
    let p = h.precision();
    let a = &h[(m - 2, m - 2)];
    let b = &h[(m - 2, m - 1)];
    let c = &h[(m - 1, m - 2)];
    let d = &h[(m - 1, m - 1)];
    let half = MPReal::one(p).div(&MPReal::from_i64(2, p));
    let mid = a.add(d).scale(&half);
    let gap = a.sub(d).scale(&half);
    let disc = gap.mul(&gap).add(&b.mul(c)).sqrt();
    let mu1 = mid.add(&disc);
    let mu2 = mid.sub(&disc);
    let d1 = mu1.sub(d).modulus();
    let d2 = mu2.sub(d).modulus();
    if d1.total_cmp(&d2) == Ordering::Less {
        mu1
    } else {
        mu2
    }
}

/// One implicit single-shift QR sweep on the active block [l, m).
fn qr_sweep(h: &mut MPMatrix, l: usize, m: usize, shift: &MPComplex) {
    let mut x = h[(l, l)].sub(shift);
    let mut y = h[(l + 1, l)].clone();
    for k in l..m - 1 {
        let (c, s) = givens(&x, &y);
        let sc = s.conj();
        // rows k and k+1, from the bulge column onward
        let jlo = if k > l { k - 1 } else { l };
        for j in jlo..m {
            let hk = h[(k, j)].clone();
            let hk1 = h[(k + 1, j)].clone();
            h[(k, j)] = hk.scale(&c).add(&s.mul(&hk1));
            h[(k + 1, j)] = hk1.scale(&c).sub(&sc.mul(&hk));
        }
        // columns k and k+1, down to the bulge row
        let ihi = (k + 2).min(m - 1);
        for i in l..=ihi {
            let hk = h[(i, k)].clone();
            let hk1 = h[(i, k + 1)].clone();
            h[(i, k)] = hk.scale(&c).add(&sc.mul(&hk1));
            h[(i, k + 1)] = hk1.scale(&c).sub(&s.mul(&hk));
        }
        if k + 2 < m {
            x = h[(k + 1, k)].clone();
            y = h[(k + 2, k)].clone();
        }
    }
}

/// All eigenvalues (with multiplicity) by shifted QR with deflation, sorted
/// ascending by (modulus, phase in [0, 2pi)). A subdiagonal entry deflates
/// when |h[i+1,i]| <= eps(p) (|h[i,i]| + |h[i+1,i+1]|). Exceeding the
/// iteration budget is an error naming the stuck subdiagonal, never a
/// silent partial result.
pub fn eigenvalues(a: &MPMatrix, prec: usize) -> Result<Vec<MPComplex>> {
    a.require_square()?;
    let work = if a.precision() == prec { a.clone() } else { a.with_precision(prec) };
    let mut h = hessenberg(&work)?;
    let n = h.rows();
    let p = prec;
    let eps = MPReal::machine_epsilon(p);
    let mut eig: Vec<MPComplex> = Vec::with_capacity(n);
    let mut m = n;
    let mut stalled = 0usize;
    while m > 0 {
        if m == 1 {
            eig.push(h[(0, 0)].clone());
            m = 0;
            continue;
        }
        // isolate the unreduced trailing block [l, m)
        let mut l = m - 1;
        while l > 0 {
            let sub = h[(l, l - 1)].modulus();
            let tol = eps.mul(&h[(l - 1, l - 1)].modulus().add(&h[(l, l)].modulus()));
            if sub.total_cmp(&tol) != Ordering::Greater {
                h[(l, l - 1)] = MPComplex::zero(p);
                break;
            }
            l -= 1;
        }
        if l == m - 1 {
            eig.push(h[(m - 1, m - 1)].clone());
            m -= 1;
            stalled = 0;
            continue;
        }
        stalled += 1;
        if stalled > MAX_ITERS_PER_EIGENVALUE {
            return Err(Error::NonConvergence { index: m - 1 });
        }
        let shift = if stalled % EXCEPTIONAL_EVERY == 0 {
            // ad hoc shift to break symmetric stalls
            let kick = h[(m - 1, m - 2)].modulus();
            let three_halves = MPReal::from_f64(1.5, p);
            h[(m - 1, m - 1)].add(&MPComplex::from_real(kick.mul(&three_halves)))
        } else {
            wilkinson_shift(&h, m)
        };
        qr_sweep(&mut h, l, m, &shift);
    }
    sort_spectrum(&mut eig);
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{char_poly, reduced_matrix, unit_toeplitz, IntMatrix};

    fn close(a: &MPReal, b: &MPReal, tol: &MPReal) -> bool {
        a.sub(b).abs().total_cmp(tol) != Ordering::Greater
    }

    /// Characteristic polynomial coefficients of a complex matrix by the
    /// same recurrence the exact module uses, over floating scalars; test
    /// helper for similarity checks.
    fn char_poly_numeric(h: &MPMatrix) -> Vec<MPComplex> {
        let n = h.rows();
        let p = h.precision();
        let mul = |a: &MPMatrix, b: &MPMatrix| -> MPMatrix {
            let mut out = MPMatrix::zeros(n, n, p);
            for i in 0..n {
                for k in 0..n {
                    if a[(i, k)].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let upd = out[(i, j)].add(&a[(i, k)].mul(&b[(k, j)]));
                        out[(i, j)] = upd;
                    }
                }
            }
            out
        };
        let mut coeffs = vec![MPComplex::zero(p); n + 1];
        coeffs[n] = MPComplex::one(p);
        let mut n_mat = h.clone();
        coeffs[n - 1] = n_mat.trace().neg();
        for k in 2..=n {
            let mut m_mat = n_mat.clone();
            for i in 0..n {
                let upd = m_mat[(i, i)].add(&coeffs[n - k + 1]);
                m_mat[(i, i)] = upd;
            }
            n_mat = mul(h, &m_mat);
            let kk = MPComplex::from_i64(k as i64, 0, p);
            coeffs[n - k] = n_mat.trace().div(&kk).neg();
        }
        coeffs
    }

    #[test]
    fn hessenberg_zeroes_below_subdiagonal() {
        let p = 192;
        let a = MPMatrix::from_int(&reduced_matrix(15, 1, 2).unwrap(), p).unwrap();
        let h = hessenberg(&a).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                if i > j + 1 {
                    assert!(h[(i, j)].is_zero(), "entry ({i},{j}) must be exactly zero");
                }
            }
        }
    }

    #[test]
    fn hessenberg_preserves_characteristic_polynomial() {
        let p = 256;
        let b = reduced_matrix(15, 1, 2).unwrap();
        let a = MPMatrix::from_int(&b, p).unwrap();
        let h = hessenberg(&a).unwrap();
        let num = char_poly_numeric(&h);
        let exact = char_poly(&b).unwrap();
        let tol = MPReal::exp2i(-200, p);
        for (c_num, c_exact) in num.iter().zip(exact.coefficients()) {
            let want = MPReal::from_bigint(c_exact, p).unwrap();
            assert!(close(&c_num.re, &want, &tol), "{c_num:?} vs {want:?}");
            assert!(c_num.im.abs().total_cmp(&tol) != Ordering::Greater);
        }
    }

    #[test]
    fn hessenberg_keeps_hessenberg_input() {
        let p = 128;
        let a = MPMatrix::from_int(
            &IntMatrix::from_rows(&[vec![1i64, 2, 3], vec![4, 5, 6], vec![0, 7, 8]]),
            p,
        )
        .unwrap();
        let h = hessenberg(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(h[(i, j)] == a[(i, j)], "untouched at ({i},{j})");
            }
        }
    }

    #[test]
    fn hessenberg_tridiagonalizes_symmetric_input() {
        let p = 128;
        let a = MPMatrix::from_int(
            &IntMatrix::from_rows(&[
                vec![4i64, 1, 2, 3],
                vec![1, 5, 1, 0],
                vec![2, 1, 6, 2],
                vec![3, 0, 2, 7],
            ]),
            p,
        )
        .unwrap();
        let h = hessenberg(&a).unwrap();
        let tol = MPReal::exp2i(-110, p).mul(&MPReal::from_i64(16, p));
        for i in 0..4usize {
            for j in 0..4usize {
                if j > i + 1 {
                    assert!(
                        h[(i, j)].modulus().total_cmp(&tol) != Ordering::Greater,
                        "super entry ({i},{j}) should vanish for symmetric input"
                    );
                }
            }
        }
    }

    #[test]
    fn eigenvalues_of_identity() {
        let p = 256;
        let a = MPMatrix::from_int(&IntMatrix::identity(3), p).unwrap();
        let ev = eigenvalues(&a, p).unwrap();
        assert_eq!(ev.len(), 3);
        for v in &ev {
            assert!(v == &MPComplex::one(p));
        }
    }

    #[test]
    fn eigenvalues_of_involution() {
        let p = 128;
        let a = MPMatrix::from_int(&IntMatrix::from_rows(&[vec![0i64, 1], vec![1, 0]]), p).unwrap();
        let ev = eigenvalues(&a, p).unwrap();
        let tol = MPReal::exp2i(-120, p);
        let neg = MPReal::one(p).neg();
        assert!(close(&ev[0].re, &MPReal::one(p), &tol) || close(&ev[0].re, &neg, &tol));
        assert!(close(&ev[1].re, &MPReal::one(p), &tol) || close(&ev[1].re, &neg, &tol));
        assert!(ev[0].re.total_cmp(&ev[1].re) != Ordering::Equal);
    }

    #[test]
    fn eigenvalues_of_smallest_reduced_matrix() {
        // roots of x^2 - 4x + 1 are 2 -+ sqrt(3)
        let p = 256;
        let b = MPMatrix::from_int(&reduced_matrix(6, 1, 2).unwrap(), p).unwrap();
        let ev = eigenvalues(&b, p).unwrap();
        let sqrt3 = MPReal::from_i64(3, p).sqrt();
        let two = MPReal::from_i64(2, p);
        let tol = MPReal::machine_epsilon(p).mul(&MPReal::from_i64(10, p));
        assert!(close(&ev[0].re, &two.sub(&sqrt3), &tol));
        assert!(close(&ev[1].re, &two.add(&sqrt3), &tol));
        for v in &ev {
            assert!(v.im.is_zero() || v.im.abs().total_cmp(&tol) != Ordering::Greater);
        }
    }

    #[test]
    fn eigenvalues_of_cyclic_permutation() {
        // the 3-cycle has the three cube roots of unity; also exercises the
        // exceptional shift (Wilkinson alone stalls on this matrix)
        let p = 192;
        let a = MPMatrix::from_int(&unit_toeplitz(3, 1, 2).unwrap(), p).unwrap();
        let ev = eigenvalues(&a, p).unwrap();
        let tol = MPReal::exp2i(-150, p);
        let two_pi = MPReal::pi(p).mul(&MPReal::from_i64(2, p));
        for (j, v) in ev.iter().enumerate() {
            assert!(close(&v.modulus(), &MPReal::one(p), &tol));
            let want = two_pi
                .mul(&MPReal::from_i64(j as i64, p))
                .div(&MPReal::from_i64(3, p));
            let mut phase = v.arg();
            if phase.is_negative() {
                phase = phase.add(&two_pi);
            }
            assert!(close(&phase, &want, &tol), "phase {j}");
        }
    }

    #[test]
    fn trace_and_determinant_identities() {
        let p = 256;
        let b = reduced_matrix(15, 1, 2).unwrap();
        let a = MPMatrix::from_int(&b, p).unwrap();
        let ev = eigenvalues(&a, p).unwrap();
        let mut sum = MPComplex::zero(p);
        let mut prod = MPComplex::one(p);
        for v in &ev {
            sum = sum.add(v);
            prod = prod.mul(v);
        }
        // n 2^10 eps scale, with the inf norm as scale
        let tol = MPReal::machine_epsilon(p)
            .mul(&MPReal::from_i64(5 << 10, p))
            .mul(&a.inf_norm());
        assert!(close(&sum.re, &MPReal::from_i64(13, p), &tol), "trace");
        assert!(sum.im.abs().total_cmp(&tol) != Ordering::Greater);
        // det = (-1)^5 * (constant term -1) = 1
        assert!(close(&prod.re, &MPReal::one(p), &tol), "determinant");
    }

    #[test]
    fn similarity_invariance_under_hessenberg() {
        let p = 192;
        let a = MPMatrix::from_int(
            &IntMatrix::from_rows(&[
                vec![2i64, 7, 1, 0],
                vec![3, -1, 4, 2],
                vec![5, 0, 1, 1],
                vec![1, 2, 0, 3],
            ]),
            p,
        )
        .unwrap();
        let ev_a = eigenvalues(&a, p).unwrap();
        let ev_h = eigenvalues(&hessenberg(&a).unwrap(), p).unwrap();
        let tol = MPReal::machine_epsilon(p)
            .mul(&MPReal::from_i64(4 << 10, p))
            .mul(&a.inf_norm());
        for (x, y) in ev_a.iter().zip(&ev_h) {
            assert!(x.sub(y).modulus().total_cmp(&tol) != Ordering::Greater);
        }
    }

    #[test]
    fn precision_monotonicity_on_quadratic_fixture() {
        // error against the exact roots of x^2 - 4x + 1 must not grow when
        // precision doubles
        let b = reduced_matrix(6, 1, 2).unwrap();
        let mut last_err: Option<f64> = None;
        for p in [64usize, 128, 256, 512] {
            let a = MPMatrix::from_int(&b, p).unwrap();
            let ev = eigenvalues(&a, p).unwrap();
            let hi = 1024usize;
            let sqrt3 = MPReal::from_i64(3, hi).sqrt();
            let two = MPReal::from_i64(2, hi);
            let err = ev[0]
                .re
                .with_precision(hi)
                .sub(&two.sub(&sqrt3))
                .abs()
                .max(&ev[1].re.with_precision(hi).sub(&two.add(&sqrt3)).abs());
            let err = err.to_f64().max(1e-300);
            if let Some(prev) = last_err {
                assert!(err <= prev, "error grew from {prev} to {err} at {p} bits");
            }
            last_err = Some(err);
        }
    }

    #[test]
    fn eigenvalue_count_matches_order() {
        let p = 128;
        let a = MPMatrix::from_int(&unit_toeplitz(8, 2, 3).unwrap(), p).unwrap();
        assert_eq!(eigenvalues(&a, p).unwrap().len(), 8);
        let empty = MPMatrix::zeros(0, 0, p);
        assert!(eigenvalues(&empty, p).unwrap().is_empty());
    }
}
