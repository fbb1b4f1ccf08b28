use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed group spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("modulus {0:?} is reducible")]
    ReducibleModulus(Vec<u32>),

    #[error("invalid field: {0}")]
    InvalidModulus(String),

    #[error("{what} of size {size} exceeds the configured cap {cap}")]
    CapExceeded { what: &'static str, size: u64, cap: u64 },

    #[error("element {0} is not an involution")]
    NotInvolution(u32),

    #[error("the pair ({x}, {y}) does not generate the group")]
    NotGenerating { x: u32, y: u32 },

    #[error("hole index {j} is not coprime to the valency {q}")]
    HoleNotCoprime { j: i64, q: u32 },

    #[error("malformed word `{word}`: {reason}")]
    Word { word: String, reason: String },

    #[error("unknown operation `{0}` (expected D or H<j>)")]
    Operation(String),

    #[error("operation requires a matrix group")]
    NotMatrixGroup,

    #[error("expected a map of type {{3,7}}, got {{{p},{q}}}")]
    WrongType { p: u32, q: u32 },

    #[error("unknown conjugacy class `{0}`")]
    UnknownClass(String),

    #[error("phi = {phi} is not divisible by |Aut G| = {aut}")]
    Divisibility { phi: u64, aut: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
