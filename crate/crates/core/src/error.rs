use thiserror::Error;

use crate::system::ParamViolation;

/// Failures while constructing or using a field tower.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("base field order {0} is not a prime")]
    NonPrimeModulus(u32),
    #[error("field too large for the packed representation: {0}")]
    DegreeOverflow(String),
    #[error("modulus polynomial is not irreducible")]
    ReducibleModulus,
    #[error("elements do not form a basis (singular trace Gram matrix)")]
    NotABasis,
    #[error("invalid element encoding: {0}")]
    InvalidElement(String),
}

/// Requested rank cannot be realized with the given shape.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rank {rank} infeasible for shape {rows}x{cols}")]
pub struct InfeasibleRank {
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("evaluation points are not linearly independent over the base field (rank {rank}, length {len})")]
    DependentPoints { rank: usize, len: usize },
    #[error("dimension k = {k} outside 1..={n}")]
    InvalidDimension { k: usize, n: usize },
    #[error("expected length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// No codeword lies within the decoding radius of the received word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("decoding failure")]
pub struct DecodingFailure;

/// The interleaved decoder found no consistent error of rank up to its
/// radius. A legitimate outcome, not a malfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("interleaved decoding failure detected")]
pub struct FailureDetected;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlError {
    #[error("parameter violations: {}", display_violations(.0))]
    ParameterViolation(Vec<ParamViolation>),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Rank(#[from] InfeasibleRank),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("plaintext must have {expected} free positions followed by zeros")]
    InvalidPlaintext { expected: usize },
    #[error("key material does not match the system parameters: {0}")]
    KeyMismatch(String),
    #[error("decryption failed: ciphertext is not within the decoding radius")]
    DecryptionFailure,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackError {
    #[error("attack precondition violated: {0}")]
    Precondition(String),
    #[error("trial budget of {trials} exhausted")]
    TrialBudgetExhausted { trials: u64 },
}

fn display_violations(v: &[ParamViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
