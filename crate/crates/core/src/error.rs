use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("declared dimension {declared} but generator has rank {computed}")]
    RankMismatch { declared: usize, computed: usize },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("classical code is not self-orthogonal (rows {0} and {1})")]
    NotSelfOrthogonal(usize, usize),

    #[error("CSS construction needs odd length, got n = {0}")]
    EvenLength(usize),

    #[error("stabilizer rows are linearly dependent")]
    DependentRows,

    #[error("stabilizer rows {0} and {1} do not commute")]
    NonCommutingRows(usize, usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("degenerate shortening: {rows} surviving generators, expected {expected}")]
    DegenerateShortening { rows: usize, expected: usize },

    #[error("MacWilliams transform left a non-integer coefficient at degree {0}")]
    InexactDivision(usize),

    #[error("inconsistent enumerator pair: {0}")]
    InconsistentPair(String),

    #[error("logical operator is not in the dual of the stabilizer")]
    LogicalNotInDual,

    #[error("z(eps) has a pole at eps = 3/4")]
    Pole,

    #[error("noise parameter out of range: {0}")]
    OutOfRange(String),

    #[error("not distillable: success probability vanishes at eps = 0")]
    NotDistillable,

    #[error("inconsistent enumerator: {0}")]
    InconsistentEnumerator(String),

    #[error("success probability is zero")]
    ZeroSuccessProbability,

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Error {
        Error::Parse { line, msg: msg.into() }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Error {
        Error::Io { path: path.as_ref().display().to_string(), source }
    }

    /// Process exit status used by the CLI: 3 for resource limits, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::ResourceLimit(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
