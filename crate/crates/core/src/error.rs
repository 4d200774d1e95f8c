use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field of order {p}^{k} exceeds the cap of 2^20 elements")]
    FieldTooLarge { p: u64, k: u32 },

    #[error("cannot embed F_{{{p}^{from}}} into F_{{{q}^{to}}}")]
    BadEmbedding { p: u64, from: u32, q: u64, to: u32 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("enumeration cap exceeded: {what} has predicted size {predicted} > cap {cap}")]
    CapExceeded { what: String, predicted: u128, cap: u128 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("morphism `{rule}` is invalid: {reason}")]
    BadMorphism { rule: String, reason: String },

    #[error("element not found in parent group: {0}")]
    NotInGroup(String),

    #[error("character context violation: lifted value {value} exceeds bound {bound} (ell = {ell})")]
    ContextViolation { value: u64, bound: u64, ell: u64 },

    #[error("eigenspace splitting failed to separate {0} dimensions")]
    SplittingFailed(usize),

    #[error("no admissible prime found below 2^31")]
    NoPrime,

    #[error("non-integral orbit average: {sum} is not divisible by {order}")]
    NonIntegralAverage { sum: u128, order: u128 },

    #[error("denominator vanishes at n = {0}")]
    Irregular(usize),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("witness rejected: {0}")]
    Witness(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
