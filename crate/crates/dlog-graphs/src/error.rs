use std::path::PathBuf;

/// Errors shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is too small (need p >= 2)")]
    ModulusTooSmall(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} exceeds the supported bound 2^31 - 1")]
    PrimeTooLarge(u64),

    #[error("residue {g} is outside the canonical range 1..={max}")]
    ResidueOutOfRange { g: u64, max: u64 },

    #[error("{m} does not divide {n}")]
    NotADivisor { m: u64, n: u64 },

    #[error("transition table entry f({x}) = {value} is outside 1..={n}")]
    BadTableEntry { x: usize, value: u64, n: usize },

    #[error("table of size {0} is too large for the quadratic reference analyzer")]
    TableTooLarge(usize),

    #[error("no binary functional graph exists on an odd node count ({0})")]
    OddSize(u64),

    #[error("size must be at least {min} (got {n})")]
    SizeTooSmall { n: u64, min: u64 },

    #[error("requested tolerance {0:e} is below the supported minimum 1e-10")]
    ToleranceTooTight(f64),

    #[error("quadrature failed to converge to tolerance {tol:e}")]
    NoConvergence { tol: f64 },

    #[error("exhaustive enumeration of n = {n} nodes is beyond the supported bound {max}")]
    EnumerationTooLarge { n: u64, max: u64 },

    #[error("g range {start}..={end} is not a subrange of 1..={max}")]
    BadGRange { start: u64, end: u64, max: u64 },

    #[error("failed to build the worker pool: {0}")]
    Pool(String),

    #[error("checkpoint {} is corrupt: {reason}", path.display())]
    CheckpointCorrupt { path: PathBuf, reason: String },

    #[error("checkpoint {} belongs to a different sweep: {reason}", path.display())]
    CheckpointMismatch { path: PathBuf, reason: String },

    #[error("i/o failure on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
