use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HbnError {
    #[error("splitting type must have at least one part")]
    EmptySplittingType,

    #[error("parts not nondecreasing: e_{index} = {left} > e_{next} = {right}", next = index + 1)]
    NotNondecreasing {
        index: usize,
        left: BigInt,
        right: BigInt,
    },

    #[error("genus must be nonnegative, got {0}")]
    NegativeGenus(BigInt),

    #[error("empty locus: rho' = {rho} < 0")]
    EmptyLocus { rho: BigInt },

    #[error("rank k = {k} is too small; the classification needs k >= 2")]
    RankTooSmall { k: usize },

    #[error("ample degree p = {p} outside [0, {max}] for rank k = {k}", max = k.saturating_sub(1))]
    BadAmpleDegree { p: usize, k: usize },

    #[error("dependent-divisor count needs exactly {expected} nonnegative parts, found {found}")]
    PreconditionNonnegParts { expected: usize, found: usize },

    #[error("closed form N = {closed} disagrees with assembled N = {assembled}")]
    OracleMismatch { closed: BigInt, assembled: BigInt },

    #[error("inconsistent h0 profile: {0}")]
    InconsistentProfile(String),

    #[error("invalid domain: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl HbnError {
    /// Stable name used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            HbnError::EmptySplittingType => "EmptySplittingType",
            HbnError::NotNondecreasing { .. } => "NotNondecreasing",
            HbnError::NegativeGenus(_) => "NegativeGenus",
            HbnError::EmptyLocus { .. } => "EmptyLocus",
            HbnError::RankTooSmall { .. } => "RankTooSmall",
            HbnError::BadAmpleDegree { .. } => "BadAmpleDegree",
            HbnError::PreconditionNonnegParts { .. } => "PreconditionNonnegParts",
            HbnError::OracleMismatch { .. } => "OracleMismatch",
            HbnError::InconsistentProfile(_) => "InconsistentProfile",
            HbnError::Domain(_) => "Domain",
            HbnError::Parse(_) => "Parse",
        }
    }

    /// True for errors caused by syntactically bad input rather than a
    /// refusal on well-formed values.
    pub fn is_malformed_input(&self) -> bool {
        matches!(
            self,
            HbnError::EmptySplittingType
                | HbnError::NotNondecreasing { .. }
                | HbnError::NegativeGenus(_)
                | HbnError::Domain(_)
                | HbnError::Parse(_)
        )
    }
}

pub type Result<T, E = HbnError> = std::result::Result<T, E>;
