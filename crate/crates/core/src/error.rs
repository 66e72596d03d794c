use thiserror::Error;

/// Errors produced by context construction and the square-root routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{value} is not a residue mod {p} (expected 0 <= value < p)")]
    OutOfRange { value: u64, p: u64 },

    #[error("{a} is not a quadratic residue mod {p}")]
    NotAResidue { a: u64, p: u64 },

    #[error("method requires 2-adicity k = {expected}, but p = {p} has k = {actual}")]
    WrongClass { expected: u32, actual: u32, p: u64 },

    #[error("method needs k = {method_k}, which conflicts with the k = {filter_k} filter")]
    ConflictingK { method_k: u32, filter_k: u32 },

    #[error("k = {0} is outside the supported range 1..=16")]
    UnsupportedK(u32),

    #[error("exponent 2^(k-1)*n overflows 64 bits for p = {0}")]
    ExponentOverflow(u64),

    #[error("p = {p} exceeds the exhaustive enumeration bound {bound}")]
    ExhaustionBound { p: u64, bound: u64 },

    #[error("no residue class matches a = {a} mod {p}; context invariants are broken")]
    NoClass { a: u64, p: u64 },

    #[error("malformed formula: {0}")]
    MalformedFormula(String),

    #[error("invalid prime range: pmin = {pmin} > pmax = {pmax}")]
    BadRange { pmin: u64, pmax: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
