use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameters out of range: need K >= 3 and 1 <= D <= K-2, got K={messages}, D={after}")]
    ParameterOutOfRange { messages: usize, after: usize },

    #[error("{what} index {index} out of range (must be < {bound})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("stacked identity needs n | m, got m={m}, n={n}")]
    NotDivisible { m: usize, n: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("{0} is not a prime modulus")]
    NotPrime(u32),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("receiver {receiver} is missing side-information x_{index}")]
    MissingSideInformation { receiver: usize, index: usize },

    #[error("receiver {receiver}: no decoding combination over GF({modulus})")]
    NoSolution { receiver: usize, modulus: u32 },

    #[error("receiver {receiver}: {source}")]
    Receiver {
        receiver: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
