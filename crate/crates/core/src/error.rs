use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid size {0}: need at least 2")]
    InvalidSize(usize),

    #[error("resolution {q} is not a power of {p}")]
    InvalidResolution { p: u32, q: u64 },

    #[error("matrix is not unitriangular: {0}")]
    NotUnitriangular(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unbound coefficient `{0}`")]
    UnboundName(String),

    #[error("not regular: exponent 0")]
    NotRegular,

    #[error("substitution exponent must be nonzero")]
    ZeroSubstitution,

    #[error("unsupported: u(1) satisfies none of the three solvability conditions")]
    Unsupported,

    #[error("correction stuck at level {level}, position ({alpha}, {beta}): path weight is zero")]
    CorrectionStuck {
        level: usize,
        alpha: usize,
        beta: usize,
    },

    #[error("no correction path for position ({alpha}, {beta})")]
    NoCorrectionPath { alpha: usize, beta: usize },

    #[error("solver invariant violated: {0}")]
    InvariantViolated(String),

    #[error("solution failed verification by substitution")]
    VerifyFailed,

    #[error("search space p^{exponent} exceeds cap {cap}")]
    CapExceeded { exponent: usize, cap: u64 },

    #[error("no solution found by search")]
    NoSolutionFound,
}
