use thiserror::Error;

use crate::algebra::Field;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group order exceeds the configured bound of {bound}")]
    SizeBound { bound: usize },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("invalid character table: {0}")]
    InvalidTable(String),
    #[error("not a virtual character: multiplicity {value} of {name} is not integral")]
    NotVirtualCharacter { name: String, value: String },
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("morphisms are not composable: {0}")]
    NotComposable(String),
    #[error("subgroup is not in the Bouc poset: {0}")]
    NotInBoucPoset(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),
    #[error("operation requires characteristic zero, got {0}")]
    UnsupportedField(Field),
    #[error("transporter category is disconnected ({0} orbits of components)")]
    Disconnected(usize),
    #[error("coefficients are not constant: {0}")]
    NotConstant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
