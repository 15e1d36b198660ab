use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("element does not belong to the expected group")]
    GroupMismatch,
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("fiber is unbounded; supply a cap")]
    UnboundedFiber,
    #[error("grading is not pointed (nonzero kernel vector {0:?})")]
    NotPointed(Vec<i64>),
    #[error("{what} exceeded the bound {bound}")]
    BoundExceeded { what: String, bound: u64 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("exponent vector is not in the monoid")]
    NotInMonoid,
    #[error("field tower: {0}")]
    Field(String),
    #[error("scalars from different field towers")]
    TowerMismatch,
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("cocycle condition violated: {0}")]
    Cocycle(String),
    #[error("zero input")]
    ZeroInput,
    #[error("{0}")]
    Unsupported(String),
}
