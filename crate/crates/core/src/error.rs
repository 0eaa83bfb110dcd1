use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the kernel can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclotomic order mismatch: {from} does not embed into {to}")]
    OrderMismatch { from: u64, to: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("no {n}-th root of {value} is available in the coefficient field")]
    RootNotInField { n: u64, value: String },
    #[error("exponent leaves the configured window |e| <= {window}")]
    WindowExceeded { window: i64 },
    #[error("lattice violation: {0}")]
    LatticeViolation(String),
    #[error("operands belong to different rings")]
    SignatureMismatch,
    #[error("the zero series has no valuation")]
    ZeroValuation,
    #[error("series is not of the form 1 + (positive valuation)")]
    NotAOneUnit,
    #[error("support is not phase-commutative; root extraction needs a commutative subring")]
    TwistObstruction,
    #[error("exponent is not divisible by {n}")]
    ExponentNotDivisible { n: u64 },
    #[error("denominator cap p^{cap} exceeded")]
    DenominatorCapExceeded { cap: u32 },
    #[error("support lies outside the constrained subfield")]
    NotInCenter,
    #[error("invalid ring signature: {0}")]
    InvalidSignature(String),
}

impl Error {
    /// Stable numeric code per variant (used as process exit status by the CLI).
    pub fn code(&self) -> i32 {
        match self {
            Error::OrderMismatch { .. } => 10,
            Error::DivisionByZero => 11,
            Error::RootNotInField { .. } => 12,
            Error::WindowExceeded { .. } => 13,
            Error::LatticeViolation(_) => 14,
            Error::SignatureMismatch => 15,
            Error::ZeroValuation => 16,
            Error::NotAOneUnit => 17,
            Error::TwistObstruction => 18,
            Error::ExponentNotDivisible { .. } => 19,
            Error::DenominatorCapExceeded { .. } => 20,
            Error::NotInCenter => 21,
            Error::InvalidSignature(_) => 22,
        }
    }
}
