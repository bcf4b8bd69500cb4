//! Error types, one enum per subsystem.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("register size {n} exceeds the {max}-qubit limit")]
    TooManyQubits { n: usize, max: usize },
    #[error("register must have at least one qubit")]
    EmptyRegister,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("operation on a dead register")]
    DeadRegister,
    #[error("measurement operators sum to identity only within {deviation:.3e} (tolerance {tolerance:.0e})")]
    IncompleteMeasurement { deviation: f64, tolerance: f64 },
    #[error("measurement operator `{label}` is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NegativeOperator { label: String, eigenvalue: f64 },
    #[error("measurement operator `{label}` is not Hermitian")]
    NonHermitianOperator { label: String },
    #[error("measurement must have at least one outcome")]
    NoOutcomes,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HashError {
    #[error("output length must be between 1 and {max} bits, got {actual}")]
    BadOutputLength { max: usize, actual: usize },
    #[error("maximum input length must be at least 1")]
    ZeroInputLength,
    #[error("input of {actual} bits exceeds the declared maximum of {max}")]
    InputTooLong { max: usize, actual: usize },
    #[error("seed must be {expected} bits, got {actual}")]
    BadSeedLength { expected: usize, actual: usize },
    #[error("family has 2^{seed_bits} members, enumeration is capped at 2^{cap}")]
    FamilyTooLarge { seed_bits: usize, cap: usize },
    #[error("malformed hash description: {0}")]
    MalformedDescription(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("security parameter {lambda} outside the supported range 1..={max}")]
    LambdaOutOfRange { lambda: usize, max: usize },
    #[error("malformed wire data: {0}")]
    MalformedWire(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Hash(#[from] HashError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InfoError {
    #[error("probability table has {actual} entries, axes require {expected}")]
    TableShapeMismatch { expected: usize, actual: usize },
    #[error("probabilities must be nonnegative (entry {index} is {value})")]
    NegativeProbability { index: usize, value: f64 },
    #[error("total mass {total} is not 1 within {tolerance:.0e}")]
    NotNormalized { total: f64, tolerance: f64 },
    #[error("unknown axis `{0}`")]
    UnknownAxis(String),
    #[error("target and conditioning axes must be disjoint and the target nonempty")]
    BadAxisSelection,
    #[error("smoothing parameter must satisfy 0 <= delta < 1, got {0}")]
    BadDelta(f64),
    #[error("expected {expected} axes, got {actual}")]
    BadArity { expected: usize, actual: usize },
    #[error("distribution shapes differ")]
    ShapeMismatch,
    #[error("instance too large: {what} is {actual}, cap is {cap}")]
    TooLarge {
        what: &'static str,
        actual: usize,
        cap: usize,
    },
    #[error("axis label `{0}` is not a bit string")]
    BadLabel(String),
    #[error("parameters must be at least 1")]
    BadParameter,
    #[error(transparent)]
    Hash(#[from] HashError),
    #[error("linear program did not converge")]
    LpFailure,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AttackError {
    #[error("lambda {lambda} too large for exact evaluation (cap {max})")]
    LambdaTooLarge { lambda: usize, max: usize },
    #[error("strategy guesser is not a deterministic string guesser")]
    NonDeterministicGuesser,
    #[error("grid step must be positive")]
    BadGridStep,
    #[error("substring guess has {actual} bits, branch expects {expected}")]
    GuessLengthMismatch { expected: usize, actual: usize },
    #[error("unknown attack `{0}`")]
    UnknownAttack(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Hash(#[from] HashError),
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}
