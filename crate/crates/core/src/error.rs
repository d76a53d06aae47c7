use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed system: {0}")]
    MalformedSystem(String),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("invalid point set: {0}")]
    InvalidPointSet(String),
    #[error("glue width {k} exceeds operand dimension {dim}")]
    GlueWidthMismatch { k: usize, dim: usize },
    #[error("glue condition violated: vertex {vertex:?} has {nonzeros} nonzero glue coordinates")]
    GlueConditionViolated { vertex: Vec<u8>, nonzeros: usize },
    #[error("enumeration length {n} exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("machine moved off its {space}-cell worktape")]
    SpaceExceeded { space: usize },
    #[error("graph has no arcs")]
    EmptyGraph,
    #[error("formula has no clauses")]
    EmptyFormula,
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("no extended formulation for this language: {0}")]
    NotCompilable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
