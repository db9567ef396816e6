use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("duplicate entry for power {0}")]
    DuplicatePower(u32),

    #[error("PT violation at power {power}: coefficient {re} + {im}i")]
    PtViolation { power: u32, re: f64, im: f64 },

    #[error("power {0} exceeds the supported maximum degree {max}", max = crate::potential::MAX_DEGREE)]
    DegreeTooLarge(u32),

    #[error("potential must contain a term of degree >= 1")]
    DegreeTooSmall,

    #[error("basis size {0} is invalid: need at least 2")]
    BasisTooSmall(usize),

    #[error("matrix dimension {0} exceeds the hard cap {max}", max = crate::oscillator::MAX_DIMENSION)]
    SizeOverflow(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("antiunitary does not square to identity (max deviation {0:e})")]
    NotInvolution(f64),

    #[error("incomplete basis: rank {rank} of {n}, {dropped} columns dropped")]
    IncompleteBasis { rank: usize, n: usize, dropped: usize },

    #[error("recipe {recipe} requires the harmonic-oscillator PT antiunitary")]
    RecipeNeedsPtHo { recipe: &'static str },

    #[error("reality violation: imaginary residual {residual:e} exceeds tolerance {tol:e}")]
    RealityViolation { residual: f64, tol: f64 },

    #[error("characteristic polynomial limited to n <= {max}, got {n}", max = crate::realify::CHAR_POLY_MAX_N)]
    CharPolyTooLarge { n: usize },

    #[error("eigensolver did not converge after {iterations} iterations (stalled block ending at index {block})")]
    NoConvergence { iterations: usize, block: usize },

    #[error("conjugation-closure violation: eigenvalue {re} + {im}i has no conjugate partner")]
    ClosureViolation { re: f64, im: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
