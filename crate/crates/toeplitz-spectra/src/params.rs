//! Symbol normalization and the integer parameters that drive the spectrum
//! reduction.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mp::{MPComplex, MPReal};

/// Generating symbol with one coefficient on the r-th subdiagonal, one on
/// the s-th superdiagonal, and a constant term. Offsets must be positive;
/// the same-side degenerate layout (both off-diagonals above or both below
/// the main diagonal) is handled by a separate fast path, not by this type.
#[derive(Clone, Debug)]
pub struct SymbolSpec {
    r: usize,
    s: usize,
    f0: MPComplex,
    fr: MPComplex,
    fms: MPComplex,
}

impl SymbolSpec {
    pub fn new(r: usize, s: usize, f0: MPComplex, fr: MPComplex, fms: MPComplex) -> Result<Self> {
        if r == 0 || s == 0 {
            return Err(Error::InvalidOffsets { r: r as i64, s: s as i64 });
        }
        assert_eq!(f0.precision(), fr.precision(), "mixed precisions");
        assert_eq!(f0.precision(), fms.precision(), "mixed precisions");
        Ok(SymbolSpec { r, s, f0, fr, fms })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn constant_coefficient(&self) -> &MPComplex {
        &self.f0
    }

    pub fn sub_coefficient(&self) -> &MPComplex {
        &self.fr
    }

    pub fn super_coefficient(&self) -> &MPComplex {
        &self.fms
    }

    pub fn precision(&self) -> usize {
        self.f0.precision()
    }

    /// Exchange the roles of the two off-diagonals; the spectrum is
    /// unchanged because the result generates the transposed matrix.
    pub fn transposed(&self) -> Self {
        SymbolSpec {
            r: self.s,
            s: self.r,
            f0: self.f0.clone(),
            fr: self.fms.clone(),
            fms: self.fr.clone(),
        }
    }
}

/// All derived integer parameters for a given (n, r, s).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamSet {
    pub n: usize,
    pub r: usize,
    pub s: usize,
    /// gcd(r, s)
    pub gamma: usize,
    /// r + s
    pub sigma: usize,
    /// sigma / gamma, the number of distinct arms
    pub omega: usize,
    /// n mod sigma
    pub beta_sigma: usize,
    /// (n - beta_sigma) / sigma, the reduced matrix order
    pub n_sigma: usize,
    /// n mod gamma
    pub beta_gamma: usize,
    /// (n - beta_gamma) / gamma
    pub n_gamma: usize,
    /// r / gamma
    pub r_gamma: usize,
    /// s / gamma
    pub s_gamma: usize,
    /// r_gamma + s_gamma (equals omega)
    pub sigma_gamma: usize,
    /// n_gamma mod sigma_gamma
    pub beta_gamma_sigma: usize,
    /// (n_gamma - beta_gamma_sigma) / sigma_gamma
    pub n_gamma_sigma: usize,
    /// number of zero eigenvalues
    pub n_zero: usize,
}

/// Derive every integer parameter of the reduction for (n, r, s).
pub fn compute_params(n: usize, r: usize, s: usize) -> Result<ParamSet> {
    if n == 0 {
        return Err(Error::InvalidOrder { n: 0 });
    }
    if r == 0 || s == 0 || r > s {
        return Err(Error::InvalidOffsets { r: r as i64, s: s as i64 });
    }
    let gamma = r.gcd(&s);
    let sigma = r + s;
    let omega = sigma / gamma;
    let beta_sigma = n % sigma;
    let n_sigma = n / sigma;
    let beta_gamma = n % gamma;
    let n_gamma = n / gamma;
    let r_gamma = r / gamma;
    let s_gamma = s / gamma;
    let sigma_gamma = r_gamma + s_gamma;
    let beta_gamma_sigma = n_gamma % sigma_gamma;
    let n_gamma_sigma = n_gamma / sigma_gamma;
    let n_zero = (gamma - beta_gamma) * (n_gamma % omega) + beta_gamma * ((n_gamma + 1) % omega);
    Ok(ParamSet {
        n,
        r,
        s,
        gamma,
        sigma,
        omega,
        beta_sigma,
        n_sigma,
        beta_gamma,
        n_gamma,
        r_gamma,
        s_gamma,
        sigma_gamma,
        beta_gamma_sigma,
        n_gamma_sigma,
        n_zero,
    })
}

/// Affine reduction of the general symbol to the unit one: every eigenvalue
/// of the generated matrix equals shift + scale * (an eigenvalue of the unit
/// two-diagonal matrix with the same offsets).
#[derive(Clone, Debug)]
pub struct SymbolReduction {
    pub shift: MPComplex,
    pub scale: MPComplex,
    pub r: usize,
    pub s: usize,
}

/// Split a symbol into shift, scale and unit-coefficient offsets. The scale
/// is fr^(s/(r+s)) fms^(r/(r+s)) on the principal branch of both fractional
/// powers; the branch choice is validated numerically per instance by the
/// verification tooling rather than asserted globally.
pub fn reduce_symbol(spec: &SymbolSpec) -> Result<SymbolReduction> {
    if spec.fr.is_zero() || spec.fms.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let p = spec.precision();
    let sigma = MPReal::from_i64((spec.r + spec.s) as i64, p);
    let s_over = MPReal::from_i64(spec.s as i64, p).div(&sigma);
    let r_over = MPReal::from_i64(spec.r as i64, p).div(&sigma);
    let scale = spec.fr.powf_real(&s_over).mul(&spec.fms.powf_real(&r_over));
    Ok(SymbolReduction {
        shift: spec.f0.clone(),
        scale,
        r: spec.r,
        s: spec.s,
    })
}
