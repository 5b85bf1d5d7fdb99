use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("start symbol `{0}` is not declared by any rule")]
    UndeclaredStart(String),

    #[error("unknown bracket index {0}")]
    UnknownBracket(u32),

    #[error("foreign symbol `{0}`")]
    ForeignSymbol(String),

    #[error("position out of range: ({i}, {j}) in a word of length {len}")]
    OutOfRange { i: usize, j: usize, len: usize },

    #[error("invalid derivation: {0}")]
    InvalidDerivation(String),

    #[error("grammar is not in {form}: {reason}")]
    NotNormalForm { form: &'static str, reason: String },

    #[error("fresh nonterminal cap of {0} exceeded during conversion")]
    FreshCap(usize),

    #[error("`{0}` is not a valid dependency graph root")]
    InvalidRoot(String),

    #[error("no regular expression set for root ]{0}")]
    MissingRegexSet(u32),

    #[error("refinement iteration cap {cap} exceeded; chain: {chain}")]
    IterationCap { cap: usize, chain: String },

    #[error("{what} exceeds the limit of {limit}")]
    Budget { what: String, limit: usize },

    #[error("refined graph is incomplete: {0}")]
    Incomplete(String),
}

pub type Result<T> = std::result::Result<T, Error>;
