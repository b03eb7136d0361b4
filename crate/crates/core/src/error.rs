use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch")]
    FieldMismatch,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not associative: (e{0} e{1}) e{2} != e{0} (e{1} e{2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit is not a two-sided identity on basis element e{0}")]
    BadUnit(usize),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("quiver has a directed cycle")]
    CyclicQuiver,
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("not an algebra homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("matrix does not intertwine the actions: {0}")]
    NotIntertwiner(String),
    #[error("not right dualizable (not f.g. projective as right module): {0}")]
    NotDualizable(String),
    #[error("group elements {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("out of scope: {0}")]
    Refused(String),
    #[error("chain space of dimension {dim} exceeds the cap {cap}")]
    ResourceCap { dim: usize, cap: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
