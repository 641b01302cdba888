use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("sieve covers 1..={limit} but {needed} is required")]
    SieveTooSmall { needed: u64, limit: u64 },
    #[error("{a} has no inverse modulo {m}")]
    NotInvertible { a: u64, m: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("subset enumeration for n = {n} exceeds the limit {limit}")]
    EnumerationLimit { n: u64, limit: u64 },
    /// An internal consistency check failed; always a bug.
    #[error("internal defect: {0}")]
    Defect(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &str, value: u64) -> Result<()> {
    if value == 0 {
        return Err(Error::InvalidArgument(format!("{name} must be at least 1")));
    }
    Ok(())
}
