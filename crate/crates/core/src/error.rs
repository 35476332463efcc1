use thiserror::Error;

/// Errors raised by the algebraic layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("strand count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("quotient mismatch: (n={0}, k={1}) vs (n={2}, k={3})")]
    QuotientMismatch(usize, u8, usize, u8),
    #[error("invalid permutation: {0}")]
    InvalidPerm(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("word is not pure (its permutation is {0})")]
    NonPureWord(String),
    #[error("odd crossing count for strands {0},{1}; crossing-number convention is broken")]
    OddCrossingCount(usize, usize),
    #[error("unsupported nilpotency class k={0}; only 2 and 3 are implemented")]
    UnsupportedClass(u8),
    #[error("group closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("basis is not stable under the group: {0}")]
    ModuleNotInvariant(String),
    #[error("no G-invariant choice of signs on the triple basis: {0}")]
    SignObstruction(String),
    #[error("the extension does not split over the given module ({0})")]
    Unsolvable(String),
    #[error("integer overflow in exact linear algebra")]
    Overflow,
    #[error("{0}")]
    Obstruction(Obstruction),
    #[error("verification failed: {0}")]
    Verification(String),
}

/// A theorem-level obstruction: the hypotheses of an embedding statement are not met.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Obstruction {
    #[error(
        "gcd(|G|, k!) = gcd({order}, {factorial}) = {gcd} != 1; a finite group embeds in \
         B_|G|/Γ_k(P_|G|) only if its order is coprime to k!"
    )]
    Gcd { order: u64, factorial: u64, gcd: u64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no element of order {m} in B_{n}/Γ_{k}(P_{n}) (exhaustive over cycle types)")]
    NoTorsion { n: usize, k: u8, m: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
