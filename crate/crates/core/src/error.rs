use thiserror::Error;

/// Errors produced by validation, parsing and the reduction pipeline.
///
/// Indices in messages are 1-based to match the on-disk formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the 2^61 machine-word bound for GF(p)")]
    PrimeTooLarge(u64),
    #[error("denominator of {0} is divisible by the localization prime {1}")]
    DenominatorDivisible(String, u64),
    #[error("cannot interpret a complex over {from} as one over {to}")]
    RingCast { from: String, to: String },

    #[error("entry at ({row}, {col}) outside {nrows}x{ncols} matrix")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("matrix dimensions {0}x{1} and {2}x{3} do not compose")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("density undefined for an empty 0-row or 0-column shape")]
    EmptyShape,

    #[error("boundary {k} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        k: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("boundary composition at degree {k} is nonzero at ({row}, {col})")]
    NonzeroComposite { k: usize, row: usize, col: usize },

    #[error("matching touches basis element {index} of degree {degree} twice")]
    SharedVertex { degree: usize, index: usize },
    #[error("matched weight at degree {k}, entry ({row}, {col}) is not a unit")]
    NonUnitWeight { k: usize, row: usize, col: usize },
    #[error("matched weight at degree {k}, entry ({row}, {col}) differs from the matrix entry")]
    WeightMismatch { k: usize, row: usize, col: usize },
    #[error("matched pair at degree {k} references entry ({row}, {col}) outside the boundary")]
    PairOutOfRange { k: usize, row: usize, col: usize },
    #[error("matching induces a directed cycle at degree {k} through columns {witness:?}")]
    Cycle { k: usize, witness: Vec<usize> },

    #[error("residual matrix at degree {k} is {rows}x{cols}, above the {cap}x{cap} dense cap")]
    ResidualTooLarge {
        k: usize,
        rows: usize,
        cols: usize,
        cap: usize,
    },
    #[error("total rank {total} exceeds the dense oracle cap {cap}")]
    TooLarge { total: usize, cap: usize },
    #[error("bracket table violates the Jacobi identity on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
