use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomalgError {
    #[error("block out of degree {degree} has shape {found:?}, expected {expected:?}")]
    Shape { degree: i64, expected: (usize, usize), found: (usize, usize) },
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("Q∘Q is nonzero out of degree {0}")]
    NotDifferential(i64),
    #[error("map is not a cochain map (defect out of degree {0})")]
    NotCochainMap(i64),
    #[error("expected a map of degree {expected}, found {found}")]
    Degree { expected: i64, found: i64 },
}
