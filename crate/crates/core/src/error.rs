use thiserror::Error;

use crate::model::Diagnostics;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: duplicate identifier `{ident}`")]
    DuplicateIdentifier { line: usize, ident: String },

    #[error("line {line}: branch count for `{component}` must be positive")]
    NonPositiveCount { line: usize, component: String },

    #[error("line {line}: point `{point}` lists component `{component}` twice")]
    DuplicateBranch {
        line: usize,
        point: String,
        component: String,
    },

    #[error("line {line}: undeclared component `{component}`")]
    UndeclaredComponent { line: usize, component: String },

    #[error("unknown component `{0}`")]
    UnknownComponent(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("blow-up of `{point}` not supported: {branches} incident branches")]
    UnsupportedSingularity { point: String, branches: u32 },

    #[error("point `{0}` is not an ordinary double point")]
    NotNodal(String),

    #[error("invalid model: {0}")]
    InvalidModel(Diagnostics),

    #[error("graph is not connected")]
    Disconnected,

    #[error("malformed group spec `{spec}`: {message}")]
    GroupSpec { spec: String, message: String },

    #[error("table is not a group: {0}")]
    NotAGroup(String),

    #[error("group order exceeds cap {cap}")]
    GroupOrderCap { cap: usize },

    #[error("element {element} out of range for group of order {order}")]
    InvalidElement { element: usize, order: usize },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("enumeration exceeds state cap {cap}")]
    StateCapExceeded { cap: u64 },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("covers live on different graphs or gauges")]
    GraphMismatch,

    #[error("cover is not connected")]
    NotConnected,
}

impl Error {
    /// Stable kebab-case code used in diagnostics and CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax-error",
            Error::DuplicateIdentifier { .. } => "duplicate-identifier",
            Error::NonPositiveCount { .. } => "nonpositive-branch-count",
            Error::DuplicateBranch { .. } => "duplicate-branch",
            Error::UndeclaredComponent { .. } => "undeclared-component",
            Error::UnknownComponent(_) => "unknown-component",
            Error::UnknownPoint(_) => "unknown-point",
            Error::UnsupportedSingularity { .. } => "unsupported-singularity",
            Error::NotNodal(_) => "not-nodal",
            Error::InvalidModel(_) => "invalid-model",
            Error::Disconnected => "disconnected-graph",
            Error::GroupSpec { .. } => "malformed-group-spec",
            Error::NotAGroup(_) => "not-a-group",
            Error::GroupOrderCap { .. } => "group-order-cap",
            Error::InvalidElement { .. } => "invalid-element",
            Error::NotNormal => "not-normal",
            Error::StateCapExceeded { .. } => "state-cap-exceeded",
            Error::DegreeMismatch { .. } => "degree-mismatch",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::GraphMismatch => "graph-mismatch",
            Error::NotConnected => "not-connected",
        }
    }
}
