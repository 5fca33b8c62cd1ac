use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid tolerance {0}: must satisfy 0 < eps < 1e-3")]
    Tolerance(f64),

    #[error("invalid representation {rep} for {algebra}")]
    InvalidRep { algebra: String, rep: String },

    #[error("invalid theory: {0}")]
    InvalidTheory(String),

    #[error("rank {0} too large for the Weyl-group sum (maximum 8)")]
    RankTooLarge(u32),

    #[error("{relation} violated: residual {residual:.3e} exceeds {eps:.1e}")]
    Invariant {
        relation: String,
        residual: f64,
        eps: f64,
    },

    #[error("orbifold constraint solver: {0}")]
    Solver(String),

    #[error("dictionary row {row} fails the weight congruence (residue {residue})")]
    Dictionary { row: String, residue: String },

    #[error("Verlinde rounding residual {residual:.3e} exceeds {eps:.1e}")]
    FusionRounding { residual: f64, eps: f64 },

    #[error("Verlinde coefficient N[{a}][{b}][{c}] rounds to negative value {value}")]
    NegativeFusion {
        a: usize,
        b: usize,
        c: usize,
        value: i64,
    },

    #[error("primary {0} is not a simple current")]
    NotSimpleCurrent(usize),

    #[error("simple current {current} fails the existence condition: {reason}")]
    CurrentObstructed { current: usize, reason: String },

    #[error("invalid builder parameters: {0}")]
    BadParameters(String),

    #[error("search size {size} exceeds cap {cap}")]
    SearchTooLarge { size: usize, cap: usize },

    #[error("invariant is of automorphism type, no extension")]
    AutomorphismType,

    #[error("fixed point resolution required: block {block} has multiplicity {multiplicity}")]
    FixedPointResolution { block: usize, multiplicity: u32 },

    #[error("block {block} mixes conformal weights {first} and {second} mod 1")]
    InconsistentBlockWeight {
        block: usize,
        first: String,
        second: String,
    },

    #[error("characters are only available for the c=1 families, not {0}")]
    NoCharacters(String),

    #[error("gcd({p}, {q}) != 1")]
    NotCoprime { p: i64, q: i64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
