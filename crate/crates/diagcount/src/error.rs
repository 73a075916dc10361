//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by field construction, p-adic arithmetic, character sums,
/// and the verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The characteristic must be an odd prime.
    #[error("p = {0} is not an odd prime")]
    NonOddPrime(u64),

    /// Extension degree must be at least 1.
    #[error("extension degree r = {0} must be >= 1")]
    BadDegree(u64),

    /// An operation that is undefined at zero (dlog, Teichmuller lift, ...)
    /// was called with a zero argument.
    #[error("operation undefined at zero: {0}")]
    ZeroArgument(&'static str),

    /// Inversion of a residue divisible by p.
    #[error("not a unit mod p^M (residue divisible by p)")]
    NotAUnit,

    /// A rational with denominator divisible by p has no image in Z_p.
    #[error("rational {0} is not a p-adic integer for p = {1}")]
    NotPAdicInteger(String, u64),

    /// Character index or lemma argument outside its stated range.
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// A stated hypothesis of a theorem or lemma fails; the string names
    /// the violated condition.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// An exponent list does not describe a valid monomial deformation.
    #[error("bad partition: {0}")]
    BadPartition(String),

    /// (N - 1) not divisible by q - 1 in the affine-to-projective relation.
    #[error("divisibility fault: affine count {n} is not 1 mod q-1 = {qm1}")]
    DivisibilityFault { n: String, qm1: u64 },

    /// A symmetrically lifted value changed when the working precision was
    /// raised, or a value expected to land in `Z_p` did not; the result
    /// cannot be trusted at the requested precision.
    #[error("precision fault: {0}")]
    PrecisionFault(String),

    /// A complex sum that must round to an integer missed it by more than
    /// the stated tolerance.
    #[error("tolerance fault: {0} is not within {1} of an integer")]
    ToleranceFault(String, f64),

    /// Malformed CLI or job-file input.
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
