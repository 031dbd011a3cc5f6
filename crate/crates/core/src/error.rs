use thiserror::Error;

use crate::monomials::OrderError;
use crate::poly::PolyError;
use crate::standard_set::StandardSetError;
use crate::ufamily::UFamilyError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    StandardSet(#[from] StandardSetError),
    #[error(transparent)]
    UFamily(#[from] UFamilyError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("configuration: {0}")]
    Config(String),
    #[error("substitution did not terminate after {0} passes")]
    SubstitutionNonterminating(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Order(_) | Error::Poly(_) | Error::Config(_) => 2,
            Error::StandardSet(_) => 3,
            Error::UFamily(UFamilyError::ModeViolation(_))
            | Error::UFamily(UFamilyError::NotInDelta(_))
            | Error::UFamily(UFamilyError::DegreeBoundTooSmall { .. })
            | Error::UFamily(UFamilyError::TruncationTooSmall { .. }) => 4,
            Error::UFamily(UFamilyError::Internal(_)) | Error::SubstitutionNonterminating(_) | Error::Internal(_) => 10,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
