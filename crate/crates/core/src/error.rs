use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("cannot parse cycle notation {input:?}: {reason}")]
    CycleSyntax { input: String, reason: String },

    #[error("group has more than {limit} elements")]
    GroupTooLarge { limit: usize },

    #[error("{what} = {value} outside the supported range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("dimension {dim} exceeds the limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("element is zero")]
    ZeroElement,

    #[error("element is not essentially idempotent (Q^2 is not a multiple of Q)")]
    NotEssentiallyIdempotent,

    #[error("projector is not a Hermitian idempotent (deviation {deviation:e})")]
    NotHermitianIdempotent { deviation: f64 },

    #[error("group {0} is not abelian")]
    NonAbelian(String),

    #[error("no symmetrizer construction for group {0}")]
    UnsupportedGroup(String),

    #[error("found {found} characters for a group of order {order}")]
    CharacterCount { found: usize, order: usize },

    #[error("operator {label} does not commute with the symmetry (deviation {deviation:e})")]
    SymmetryViolation { label: String, deviation: f64 },

    #[error("GYS family failed verification: {0}")]
    VerificationFailed(String),

    #[error("transported basis for class {class} is rank deficient (singular value ratio {ratio:e})")]
    RankDeficientTransport { class: String, ratio: f64 },

    #[error("no linking element between copies {from} and {to} of class {class}")]
    MissingLink { class: String, from: usize, to: usize },

    #[error("change of basis is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("operator {label} leaks outside the block structure (max entry {leakage:e})")]
    BlockLeakage { label: String, leakage: f64 },

    #[error("operator {label} has unequal copies in class {class} (deviation {deviation:e})")]
    CopyMismatch {
        label: String,
        class: String,
        deviation: f64,
    },

    #[error("Lie closure did not stabilize within {rounds} rounds")]
    IterationCap { rounds: usize },
}

impl Error {
    /// True for errors raised by size guards rather than by bad input or failed checks.
    pub fn is_resource_guard(&self) -> bool {
        matches!(
            self,
            Error::GroupTooLarge { .. } | Error::OutOfRange { .. } | Error::DimensionTooLarge { .. }
        )
    }
}
