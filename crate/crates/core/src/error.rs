use thiserror::Error;

use crate::arith::Var;

/// Errors raised by the arithmetic kernel and the algebra modules built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("function has no expansion in the requested direction: {0}")]
    NotExpandable(String),
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("no value assigned to variable {0}")]
    MissingAssignment(Var),
    #[error("invalid specialization: {0}")]
    InvalidSpecialization(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: i64, max: i64 },
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("canonical rho required: {0}")]
    NonCanonicalRho(String),
    #[error("node {0} is neither addable nor removable for the given shape")]
    NodeNotIncident(String),
    #[error("shape is not in level {level}: {shape}")]
    ShapeNotInLevel { level: usize, shape: String },
    #[error("tableaux of length {n} and shape {shape} received different weights")]
    ShapeInconsistency { n: usize, shape: String },
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("too many variables: at most {max} u-parameters are supported symbolically")]
    VariableLimit { max: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
