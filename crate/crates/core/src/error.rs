use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid exponent `{0}`")]
    InvalidExponent(String),

    #[error("inadmissible exponents ({0}): need 1/p1 + 1/p2 >= 1")]
    Inadmissible(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("invalid model parameters: {0}")]
    InvalidModel(String),

    #[error("functions are defined on different group models")]
    ModelMismatch,

    #[error("function is identically zero")]
    ZeroFunction,

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("`{0}` is not in class A (finite center of the semisimple part, connected)")]
    NotClassA(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownGroup(String),

    #[error("non-finite intermediate value in {0}")]
    NonFinite(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
