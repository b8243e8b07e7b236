use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element `{label}` belongs to model `{found}`, not `{expected}`")]
    ElementForeignToModel {
        label: String,
        found: String,
        expected: String,
    },
    #[error("atomicity of `{0}` is not decidable from its value; use the bounded oracle")]
    UndecidableWithoutBound(String),
    #[error("window bounds exclude every element")]
    EmptyWindow,
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("model `{0}` is not value-based")]
    NotValueBased(String),
    #[error("operation requires a `{expected}` model, got `{found}`")]
    ModelMismatch { expected: String, found: String },
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("line {line}, field `{field}`: {reason}")]
    Config {
        line: usize,
        field: String,
        reason: String,
    },
    #[error("unknown model kind `{0}`")]
    UnknownModelKind(String),
    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("two points share the minimal open set of `{0}`")]
    NotT0(String),
    #[error("minimal open sets are not a coherent basis at `{0}`")]
    IncoherentBasis(String),
    #[error("element `{0}` is not a vertex of the graph")]
    NotAVertex(String),
    #[error("window has {size} vertices; exhaustive checks are limited to {limit}")]
    WindowTooLarge { size: usize, limit: usize },
    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(input: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.into(),
            reason: reason.into(),
        }
    }
}
