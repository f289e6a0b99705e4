use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed partition `{0}`")]
    BadPartition(String),
    #[error("border strip length must be positive")]
    ZeroStrip,
    #[error("partition {partition} has more than {max} parts")]
    TooManyParts { partition: String, max: usize },
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i32>),
    #[error("weight entries {0:?} mix integers and half-integers")]
    MixedParity(Vec<i32>),
    #[error("character did not decompose: {0}")]
    Decompose(String),
    #[error("inexact alternant division")]
    InexactDivision,
    #[error("malformed diagram: {0}")]
    BadDiagram(String),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("flavor mismatch")]
    FlavorMismatch,
    #[error("invalid rank or truncation: {0}")]
    BadRank(String),
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
