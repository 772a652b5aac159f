use thiserror::Error;

use crate::arknit::IndecIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime characteristic")]
    InvalidField(u32),

    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("relation term `{0}` is a path of length < 2")]
    ShortRelationPath(String),

    #[error("relation mixes paths with different endpoints: {0}")]
    NonParallelRelation(String),

    #[error("path `{0}` is not composable")]
    NotComposable(String),

    #[error("ideal is not admissible: path lengths did not terminate below {bound}")]
    NotAdmissible { bound: usize },

    #[error("objects live over different algebras")]
    AlgebraMismatch,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("knitting limit exceeded ({reason}); {} modules found", partial.modules.len())]
    LimitExceeded {
        reason: String,
        partial: Box<IndecIndex>,
    },

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("host index is incomplete")]
    IncompleteHost,

    #[error("resolution failed: {0}")]
    FailedResolution(String),

    #[error("not a 2-exact sequence: {0}")]
    NotTwoExact(String),

    #[error("too large: {n} objects exceeds subset budget {budget}")]
    TooLarge { n: usize, budget: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("json: {0}")]
    Json(String),
}
