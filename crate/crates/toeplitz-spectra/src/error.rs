use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("offsets must satisfy 1 <= r <= s, got r={r}, s={s} (transpose the matrix for r > s)")]
    InvalidOffsets { r: i64, s: i64 },

    #[error("matrix order must be positive, got n={n}")]
    InvalidOrder { n: i64 },

    #[error("offsets must be coprime, got r={r}, s={s} with gcd {gcd}")]
    NonCoprime { r: usize, s: usize, gcd: usize },

    #[error("off-diagonal coefficient is zero; every eigenvalue equals the diagonal coefficient, use the degenerate path")]
    ZeroCoefficient,

    #[error(
        "no automatic construction for n={n}, r={r}, s={s}: the corner correction requires n > (r-1)*(r+s) when mod(n, r+s) > s; such matrices must be found manually"
    )]
    ManualConstructionRegime { n: usize, r: usize, s: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("precision must be at least {min} bits, got {got}")]
    InvalidPrecision { min: usize, got: usize },

    #[error("integer needs {needed} mantissa bits but target precision is {precision}; raise the precision")]
    PrecisionOverflow { needed: u64, precision: usize },

    #[error("QR iteration failed to converge within the budget at subdiagonal index {index}")]
    NonConvergence { index: usize },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("invalid complex literal {literal:?}: expected forms like 1.5, 2i, 1+2i, -0.5-1i")]
    BadComplexLiteral { literal: String },

    #[error("invalid decimal number {literal:?}")]
    BadNumberLiteral { literal: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True when the error is a property of the inputs rather than a
    /// computation that went wrong part-way.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::NonConvergence { .. } | Error::Singular | Error::PrecisionOverflow { .. }
        )
    }
}
