use thiserror::Error;

/// Failures raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("derived name `{0}` collides with an existing arrow")]
    NameCollision(String),
    #[error("arrows {0:?} do not compose into a path")]
    NotComposable(Vec<String>),
    #[error("term `{0}` is not a cycle")]
    NonCycleTerm(String),
    #[error("polynomial is not homogeneous: found degrees {0} and {1}")]
    MixedDegree(i64, i64),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },
    #[error("differential of `{arrow}` is malformed: {reason}")]
    BadDifferential { arrow: String, reason: String },
    #[error("d^2 != 0 on generator `{generator}`: residual {residual}")]
    D2Failure { generator: String, residual: String },
    #[error("bad relation `{name}`: {reason}")]
    BadRelation { name: String, reason: String },
    #[error("vertex `{0}` carries a loop")]
    LoopAtVertex(String),
    #[error("potential contains a linear term `{0}`")]
    LinearTermPresent(String),
    #[error("unsupported argument: {0}")]
    UnsupportedArgument(String),
    #[error("objects live over different quivers")]
    QuiverMismatch,
    #[error("{0}")]
    NotApplicable(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::UnknownArrow(_) => "UnknownArrow",
            Error::DuplicateVertex(_) => "DuplicateVertex",
            Error::DuplicateArrow(_) => "DuplicateArrow",
            Error::NameCollision(_) => "NameCollision",
            Error::NotComposable(_) => "NotComposable",
            Error::NonCycleTerm(_) => "NonCycleTerm",
            Error::MixedDegree(..) => "MixedDegree",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::BadDifferential { .. } => "BadDifferential",
            Error::D2Failure { .. } => "D2Failure",
            Error::BadRelation { .. } => "BadRelation",
            Error::LoopAtVertex(_) => "LoopAtVertex",
            Error::LinearTermPresent(_) => "LinearTermPresent",
            Error::UnsupportedArgument(_) => "UnsupportedArgument",
            Error::QuiverMismatch => "QuiverMismatch",
            Error::NotApplicable(_) => "NotApplicable",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
