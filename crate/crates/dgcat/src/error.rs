use ghc_homalg::HomalgError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgError {
    #[error("relation {0} <= {1} contradicts antisymmetry")]
    NotAntisymmetric(usize, usize),
    #[error("object {0} is out of range")]
    Object(usize),
    #[error("expected {expected} values, found {found}")]
    ValueCount { expected: usize, found: usize },
    #[error("no arrow {0} -> {1} can be assembled from the given ones")]
    MissingArrow(usize, usize),
    #[error("arrow {0} -> {1} is not between the given values")]
    ArrowShape(usize, usize),
    #[error("arrow {0} -> {1} is not a cochain map")]
    NotCochainMap(usize, usize),
    #[error("arrows {0} -> {1} -> {2} do not compose to {0} -> {2}")]
    NotFunctorial(usize, usize, usize),
    #[error("component on chain {chain:?} has degree {found}, expected {expected}")]
    ComponentDegree { chain: Vec<usize>, expected: i64, found: i64 },
    #[error("diagrams do not match: {0}")]
    DiagramMismatch(String),
    #[error("the poset has no top element")]
    NoTop,
    #[error(transparent)]
    Homalg(#[from] HomalgError),
}
