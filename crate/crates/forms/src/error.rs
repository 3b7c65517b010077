use crate::valued::ValueKind;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("dimension {0} is not supported (expected 2 or 3)")]
    Dimension(usize),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("cannot wedge {left:?} with {right:?}")]
    KindMismatch { left: ValueKind, right: ValueKind },
    #[error("rotation generator needs two distinct axes, got ({0},{0})")]
    DegenerateGenerator(usize),
    #[error("empty component list")]
    Empty,
}
