use std::fmt;

use num_bigint::BigInt;

use crate::error::Result;
use crate::mp::real::MPReal;

/// Complex number over [`MPReal`]; both parts share one precision.
#[derive(Clone, PartialEq)]
pub struct MPComplex {
    pub re: MPReal,
    pub im: MPReal,
}

impl MPComplex {
    pub fn new(re: MPReal, im: MPReal) -> Self {
        assert_eq!(re.precision(), im.precision(), "mixed precisions");
        MPComplex { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        Self::new(MPReal::zero(prec), MPReal::zero(prec))
    }

    pub fn one(prec: usize) -> Self {
        Self::new(MPReal::one(prec), MPReal::zero(prec))
    }

    pub fn from_real(re: MPReal) -> Self {
        let p = re.precision();
        Self::new(re, MPReal::zero(p))
    }

    pub fn from_i64(re: i64, im: i64, prec: usize) -> Self {
        Self::new(MPReal::from_i64(re, prec), MPReal::from_i64(im, prec))
    }

    pub fn from_bigint(v: &BigInt, prec: usize) -> Result<Self> {
        Ok(Self::from_real(MPReal::from_bigint(v, prec)?))
    }

    pub fn precision(&self) -> usize {
        self.re.precision()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Self::new(re, im)
    }

    pub fn div(&self, o: &Self) -> Self {
        let den = o.re.mul(&o.re).add(&o.im.mul(&o.im));
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im)).div(&den);
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im)).div(&den);
        Self::new(re, im)
    }

    pub fn scale(&self, t: &MPReal) -> Self {
        Self::new(self.re.mul(t), self.im.mul(t))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn modulus(&self) -> MPReal {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        self.re.hypot(&self.im)
    }

    pub fn modulus_sq(&self) -> MPReal {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// Principal argument in (-pi, pi]; zero for the zero value.
    pub fn arg(&self) -> MPReal {
        self.im.atan2(&self.re)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.precision();
        if self.is_zero() {
            return Self::zero(p);
        }
        let two = MPReal::from_i64(2, p);
        let r = self.modulus();
        let w = r.add(&self.re.abs()).div(&two).sqrt();
        if !self.re.is_negative() {
            let im = self.im.div(&two.mul(&w));
            Self::new(w, im)
        } else {
            let re = self.im.abs().div(&two.mul(&w));
            let im = if self.im.is_negative() { w.neg() } else { w };
            Self::new(re, im)
        }
    }

    /// Principal power with a real exponent: |z|^t cis(t arg z).
    pub fn powf_real(&self, t: &MPReal) -> Self {
        let p = self.precision();
        if self.is_zero() {
            return Self::zero(p);
        }
        let r = self.modulus().powf(t);
        let theta = self.arg().mul(t);
        Self::new(r.mul(&theta.cos()), r.mul(&theta.sin()))
    }

    /// Change the precision of both parts; widening is exact.
    pub fn with_precision(&self, prec: usize) -> Self {
        Self::new(self.re.with_precision(prec), self.im.with_precision(prec))
    }

    /// Sort key for spectra: ascending modulus, then phase in [0, 2pi).
    pub fn sort_key(&self) -> (MPReal, MPReal) {
        let p = self.precision();
        let modulus = self.modulus();
        let mut phase = self.arg();
        if phase.is_negative() {
            let two_pi = MPReal::pi(p).mul(&MPReal::from_i64(2, p));
            phase = phase.add(&two_pi);
        }
        (modulus, phase)
    }
}

/// Order eigenvalues by the global (modulus, phase) key.
pub fn sort_spectrum(values: &mut [MPComplex]) {
    let mut keyed: Vec<((MPReal, MPReal), MPComplex)> =
        values.iter().map(|v| (v.sort_key(), v.clone())).collect();
    keyed.sort_by(|a, b| {
        a.0 .0
            .total_cmp(&b.0 .0)
            .then_with(|| a.0 .1.total_cmp(&b.0 .1))
    });
    for (slot, (_, v)) in values.iter_mut().zip(keyed) {
        *slot = v;
    }
}

impl fmt::Debug for MPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &MPReal, b: &MPReal, bits: i64) -> bool {
        a.sub(b).abs() < MPReal::exp2i(-bits, a.precision())
    }

    #[test]
    fn sqrt_principal_branch() {
        let p = 128;
        // sqrt(-4) = 2i
        let z = MPComplex::from_i64(-4, 0, p).sqrt();
        assert!(z.re.is_zero());
        assert!(close(&z.im, &MPReal::from_i64(2, p), 100));
        // sqrt(2i) = 1 + i
        let w = MPComplex::from_i64(0, 2, p).sqrt();
        assert!(close(&w.re, &MPReal::one(p), 100));
        assert!(close(&w.im, &MPReal::one(p), 100));
        // sqrt(-2i) = 1 - i
        let u = MPComplex::from_i64(0, -2, p).sqrt();
        assert!(close(&u.re, &MPReal::one(p), 100));
        assert!(close(&u.im, &MPReal::one(p).neg(), 100));
    }

    #[test]
    fn powf_cube_root_of_eight() {
        let p = 128;
        let third = MPReal::one(p).div(&MPReal::from_i64(3, p));
        let z = MPComplex::from_i64(8, 0, p).powf_real(&third);
        assert!(close(&z.re, &MPReal::from_i64(2, p), 100));
        assert!(z.im.abs() < MPReal::exp2i(-100, p));
        // principal branch of (-8)^(1/3) is 2 cis(pi/3) = 1 + sqrt(3) i
        let w = MPComplex::from_i64(-8, 0, p).powf_real(&third);
        assert!(close(&w.re, &MPReal::one(p), 100));
        assert!(close(&w.im, &MPReal::from_i64(3, p).sqrt(), 100));
    }

    #[test]
    fn division_inverts_multiplication() {
        let p = 128;
        let a = MPComplex::from_i64(3, -7, p);
        let b = MPComplex::from_i64(-2, 5, p);
        let q = a.mul(&b).div(&b);
        assert!(close(&q.re, &a.re, 100));
        assert!(close(&q.im, &a.im, 100));
    }

    #[test]
    fn sort_key_orders_by_modulus_then_phase() {
        let p = 64;
        let mut vals = vec![
            MPComplex::from_i64(0, -1, p), // modulus 1, phase 3pi/2
            MPComplex::from_i64(2, 0, p),  // modulus 2
            MPComplex::from_i64(-1, 0, p), // modulus 1, phase pi
            MPComplex::from_i64(1, 0, p),  // modulus 1, phase 0
        ];
        sort_spectrum(&mut vals);
        assert_eq!(vals[0], MPComplex::from_i64(1, 0, p));
        assert_eq!(vals[1], MPComplex::from_i64(-1, 0, p));
        assert_eq!(vals[2], MPComplex::from_i64(0, -1, p));
        assert_eq!(vals[3], MPComplex::from_i64(2, 0, p));
    }
}
