use thiserror::Error;

/// Which half of a labeled pair a corpus problem was found in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Seq,
    Str,
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Field::Seq => "seq",
            Field::Str => "str",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // corpus parsing
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("pair {id}: {field}{{{id}}} has no partner entry")]
    MissingPartner { id: u32, field: Field },
    #[error("pair {id}: {field}{{{id}}} defined more than once")]
    DuplicateEntry { id: u32, field: Field },
    #[error("pair {id}: sequence length {seq_len} != structure length {str_len}")]
    LengthMismatch { id: u32, seq_len: usize, str_len: usize },
    #[error("pair {id}: illegal symbol {ch:?} at {field} position {position}")]
    IllegalSymbol {
        id: u32,
        field: Field,
        ch: char,
        position: usize,
    },
    #[error("pair {id} is empty")]
    EmptyPair { id: u32 },
    #[error("corpus contains no pairs")]
    EmptyCorpus,
    #[error("unknown pair id {0}")]
    UnknownId(u32),

    // alphabets and folds
    #[error("symbol {ch:?} at position {position} is not in the {alphabet} alphabet")]
    SymbolNotInAlphabet {
        ch: char,
        position: usize,
        alphabet: &'static str,
    },
    #[error("code width {width} is too small for the {alphabet} alphabet (needs {needed})")]
    EncodingWidth {
        width: usize,
        needed: usize,
        alphabet: &'static str,
    },
    #[error("bit pattern does not decode to a {alphabet} symbol")]
    InvalidCode { alphabet: &'static str },
    #[error("cannot make {n_folds} folds over {corpus_size} pairs")]
    InvalidFoldCount { corpus_size: usize, n_folds: usize },

    // models
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("observation {symbol} at t={t} is out of range for {n_symbols} symbols")]
    ObservationOutOfRange {
        t: usize,
        symbol: usize,
        n_symbols: usize,
    },
    #[error("empty observation sequence")]
    EmptySequence,
    #[error("observation at t={t} has zero probability under the model")]
    ZeroProbabilityObservation { t: usize },
    #[error("every hidden path has zero probability")]
    AllPathsZero,
    #[error("brute-force enumeration of {paths} paths exceeds the guard of {limit}")]
    InstanceTooLarge { paths: f64, limit: f64 },
    #[error("sequence {index} has zero probability under the model")]
    ZeroSequenceProbability { index: usize },
    #[error("no training data")]
    EmptyTrainingSet,
    #[error("{0}")]
    InvalidArgument(String),

    // networks
    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
