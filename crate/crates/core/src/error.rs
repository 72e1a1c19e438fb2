// SPDX-License-Identifier: Apache-2.0

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Why a decoder gave up. Every variant is an explicit refusal, never a
/// silent guess.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeFailure {
    /// The received word is not within the requested error radius of any codeword.
    Inconsistent,
    /// The key equation only has the trivial solution.
    NoLocator,
    /// The error locator does not divide the interpolated polynomial.
    DivisionRemainder,
    /// A candidate codeword was found but the residual is too large.
    ResidualTooLarge { rank: usize, bound: usize },
    /// The observed columns do not pin down the coset.
    Ambiguous,
    /// 2t exceeds what the observed columns can correct.
    CapabilityExceeded { t: usize, d: usize, k: usize },
}

impl fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Inconsistent => write!(f, "no codeword within the error radius"),
            Self::NoLocator => write!(f, "no nonzero error locator"),
            Self::DivisionRemainder => write!(f, "locator does not divide the interpolant"),
            Self::ResidualTooLarge { rank, bound } => {
                write!(f, "residual rank {rank} exceeds radius {bound}")
            }
            Self::Ambiguous => write!(f, "secret not determined by the observed columns"),
            Self::CapabilityExceeded { t, d, k } => {
                write!(f, "2t = {} exceeds d - k = {} - {}", 2 * t, d, k)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("reducible polynomial {0}")]
    ReduciblePolynomial(String),
    #[error("basis is not linearly independent over the base field")]
    DependentBasis,
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("decoding failure{}: {reason}", stage.map(|s| format!(" at stage {s}")).unwrap_or_default())]
    DecodingFailure { stage: Option<usize>, reason: DecodeFailure },
    #[error("d = {0} is not in the planned set D")]
    NotInD(usize),
    #[error("codes are not nested: {0}")]
    NotNested(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("security lemma violated: {0}")]
    SecurityViolation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn decode(reason: DecodeFailure) -> Self {
        Error::DecodingFailure { stage: None, reason }
    }

    pub(crate) fn at_stage(self, stage: usize) -> Self {
        match self {
            Error::DecodingFailure { reason, .. } => {
                Error::DecodingFailure { stage: Some(stage), reason }
            }
            other => other,
        }
    }

    pub fn is_decoding_failure(&self) -> bool {
        matches!(self, Error::DecodingFailure { .. })
    }
}

pub(crate) fn dims(what: &str, expected: impl fmt::Debug, got: impl fmt::Debug) -> Error {
    Error::DimensionMismatch(format!("{what}: expected {expected:?}, got {got:?}"))
}
