use thiserror::Error;

/// Failures of the exact exterior-algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
    #[error("degree {degree} exceeds the number of variables {nvars}")]
    DegreeOverflow { degree: usize, nvars: usize },
    #[error("cannot contract a 0-form")]
    DegreeUnderflow,
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("pole: variable {var} vanishes at the evaluation point")]
    Pole { var: usize },
    #[error("multi-index {0:?} is not strictly increasing or out of range")]
    BadMultiIndex(alloc::vec::Vec<usize>),
    #[error("point has {got} coordinates, expected {expected}")]
    PointDimension { expected: usize, got: usize },
}
