use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::{Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Real number at an explicit mantissa precision in bits. The precision is
/// carried by every value and propagates through all arithmetic; mixing
/// precisions in one operation is a bug and asserts.
#[derive(Clone)]
pub struct MPReal {
    x: BigFloat,
    prec: usize,
}

impl MPReal {
    pub(crate) fn wrap(x: BigFloat, prec: usize) -> Self {
        debug_assert!(!x.is_nan(), "NaN leaked into MPReal");
        MPReal { x, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::new(prec.max(64)), prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        // the named integer constructors refuse precisions below the integer
        // width, so go through the word representation
        if v == 0 {
            return Self::zero(prec);
        }
        let sign = if v < 0 { Sign::Neg } else { Sign::Pos };
        let mut x = BigFloat::from_words(&[v.unsigned_abs()], sign, 64);
        x.set_precision(prec, RM).expect("precision change");
        Self::wrap(x, prec)
    }

    pub fn from_f64(v: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(v, prec), prec)
    }

    pub fn infinity(prec: usize) -> Self {
        MPReal { x: astro_float::INF_POS, prec }
    }

    /// Exact conversion from a big integer. Errors when the integer's
    /// significant bits (ignoring trailing zeros) exceed the target mantissa,
    /// rather than rounding silently.
    pub fn from_bigint(v: &BigInt, prec: usize) -> Result<Self> {
        if v.is_zero() {
            return Ok(Self::zero(prec));
        }
        let bits = v.bits();
        let trailing = v.trailing_zeros().unwrap_or(0);
        if bits - trailing > prec as u64 {
            return Err(Error::PrecisionOverflow {
                needed: bits - trailing,
                precision: prec,
            });
        }
        let digits: Vec<u64> = v.iter_u64_digits().collect();
        let sign = if v.sign() == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
        let mut x = BigFloat::from_words(&digits, sign, (digits.len() * 64) as astro_float::Exponent);
        x.set_precision(prec, RM).expect("precision change");
        debug_assert!(!x.inexact(), "big-integer conversion must be exact");
        Ok(Self::wrap(x, prec))
    }

    /// Conversion from a big integer with rounding when it does not fit.
    pub fn from_bigint_rounded(v: &BigInt, prec: usize) -> Self {
        if v.is_zero() {
            return Self::zero(prec);
        }
        let digits: Vec<u64> = v.iter_u64_digits().collect();
        let sign = if v.sign() == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
        let mut x = BigFloat::from_words(&digits, sign, (digits.len() * 64) as astro_float::Exponent);
        x.set_precision(prec, RM).expect("precision change");
        Self::wrap(x, prec)
    }

    pub fn parse(s: &str, prec: usize) -> Result<Self> {
        let x = with_consts(|cc| BigFloat::parse(s, Radix::Dec, prec, RM, cc));
        if x.is_nan() {
            return Err(Error::BadNumberLiteral { literal: s.to_string() });
        }
        Ok(Self::wrap(x, prec))
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    /// 2^k, exact.
    pub fn exp2i(k: i64, prec: usize) -> Self {
        let mut one = Self::from_i64(1, prec);
        let e = i32::try_from(k + 1).expect("exponent in range");
        one.x.set_exponent(e);
        one
    }

    /// Machine epsilon 2^(1-p) for precision p.
    pub fn machine_epsilon(prec: usize) -> Self {
        Self::exp2i(1 - prec as i64, prec)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    fn binop(&self, o: &Self, f: impl FnOnce(&BigFloat, &BigFloat) -> BigFloat) -> Self {
        assert_eq!(self.prec, o.prec, "mixed precisions");
        Self::wrap(f(&self.x, &o.x), self.prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a.add(b, self.prec, RM))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a.sub(b, self.prec, RM))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a.mul(b, self.prec, RM))
    }

    pub fn div(&self, o: &Self) -> Self {
        assert_eq!(self.prec, o.prec, "mixed precisions");
        let x = self.x.div(&o.x, self.prec, RM);
        // 0/0 and inf/inf are the only NaN routes here
        assert!(!x.is_nan(), "indeterminate division");
        MPReal { x, prec: self.prec }
    }

    pub fn neg(&self) -> Self {
        MPReal { x: self.x.neg(), prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        MPReal { x: self.x.abs(), prec: self.prec }
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.x.sqrt(self.prec, RM), self.prec)
    }

    pub fn hypot(&self, o: &Self) -> Self {
        self.mul(self).add(&o.mul(o)).sqrt()
    }

    pub fn ln(&self) -> Self {
        Self::wrap(with_consts(|cc| self.x.ln(self.prec, RM, cc)), self.prec)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(with_consts(|cc| self.x.exp(self.prec, RM, cc)), self.prec)
    }

    pub fn sin(&self) -> Self {
        Self::wrap(with_consts(|cc| self.x.sin(self.prec, RM, cc)), self.prec)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(with_consts(|cc| self.x.cos(self.prec, RM, cc)), self.prec)
    }

    pub fn atan(&self) -> Self {
        Self::wrap(with_consts(|cc| self.x.atan(self.prec, RM, cc)), self.prec)
    }

    /// Principal value of atan2(self, x), in (-pi, pi].
    pub fn atan2(&self, x: &Self) -> Self {
        assert_eq!(self.prec, x.prec, "mixed precisions");
        let p = self.prec;
        if x.is_zero() {
            if self.is_zero() {
                return Self::zero(p);
            }
            let half_pi = Self::pi(p).div(&Self::from_i64(2, p));
            return if self.is_negative() { half_pi.neg() } else { half_pi };
        }
        let base = self.div(x).atan();
        if x.is_negative() {
            let pi = Self::pi(p);
            if self.is_negative() {
                base.sub(&pi)
            } else {
                base.add(&pi)
            }
        } else {
            base
        }
    }

    /// self^t for positive self, via exp(t ln self).
    pub fn powf(&self, t: &Self) -> Self {
        if self.is_zero() {
            assert!(t.is_positive(), "0^t needs t > 0");
            return Self::zero(self.prec);
        }
        assert!(self.is_positive(), "powf needs a positive base");
        self.ln().mul(t).exp()
    }

    pub fn powi(&self, e: usize) -> Self {
        Self::wrap(self.x.powi(e, self.prec, RM), self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.x.is_negative() && !self.x.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.x.is_positive() && !self.x.is_zero()
    }

    pub fn is_infinite(&self) -> bool {
        self.x.is_inf()
    }

    pub fn total_cmp(&self, o: &Self) -> Ordering {
        match self.x.cmp(&o.x) {
            Some(v) if v < 0 => Ordering::Less,
            Some(v) if v > 0 => Ordering::Greater,
            Some(_) => Ordering::Equal,
            None => panic!("NaN in comparison"),
        }
    }

    pub fn min(&self, o: &Self) -> Self {
        if self.total_cmp(o) == Ordering::Greater { o.clone() } else { self.clone() }
    }

    pub fn max(&self, o: &Self) -> Self {
        if self.total_cmp(o) == Ordering::Less { o.clone() } else { self.clone() }
    }

    /// Change the precision; widening is exact, narrowing rounds.
    pub fn with_precision(&self, prec: usize) -> Self {
        if prec == self.prec {
            return self.clone();
        }
        let mut x = self.x.clone();
        if !x.is_inf() {
            x.set_precision(prec, RM).expect("precision change");
        }
        MPReal { x, prec }
    }

    pub fn to_f64(&self) -> f64 {
        if self.x.is_inf() {
            return if self.x.is_inf_neg() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        format!("{}", self.x).parse().unwrap_or(f64::NAN)
    }

    /// Number of significant decimal digits carried by serialized values:
    /// ceil(p log10 2) + 2, enough for lossless round trips.
    pub fn decimal_digits(prec: usize) -> usize {
        (prec * 30103).div_ceil(100_000) + 2
    }

    /// Normalized scientific decimal string with the precision-derived digit
    /// count, e.g. "1.25000e2". Parsing it back at the same precision
    /// reproduces the value bit for bit.
    pub fn to_decimal_string(&self) -> String {
        if self.x.is_inf() {
            return if self.x.is_inf_neg() { "-inf".into() } else { "inf".into() };
        }
        if self.x.is_zero() {
            return "0".into();
        }
        let (sign, digits, e10) = with_consts(|cc| self.x.convert_to_radix(Radix::Dec, RM, cc))
            .expect("finite value converts");
        let want = Self::decimal_digits(self.prec);
        let mut ds: Vec<u8> = digits.iter().map(|d| b'0' + d).collect();
        ds.resize(want.max(1), b'0');
        let head = ds[0] as char;
        let tail = std::str::from_utf8(&ds[1..]).expect("ascii digits");
        let neg = if sign == Sign::Neg { "-" } else { "" };
        format!("{neg}{head}.{tail}e{}", e10 as i64 - 1)
    }
}

impl fmt::Display for MPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl fmt::Debug for MPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}b)", self.x, self.prec)
    }
}

impl PartialEq for MPReal {
    fn eq(&self, o: &Self) -> bool {
        self.total_cmp(o) == Ordering::Equal
    }
}

impl PartialOrd for MPReal {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.total_cmp(o))
    }
}

impl Serialize for MPReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string())
    }
}
