use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("channel of {taps} taps exceeds cyclic prefix of {cp_len} samples (needs taps <= cp_len + 1)")]
    InterSymbolInterference { taps: usize, cp_len: usize },

    #[error("infeasible allocation: {users} users cannot share {subcarriers} subcarriers")]
    InfeasibleAllocation { users: usize, subcarriers: usize },

    #[error("sample pool is empty")]
    EmptySamples,
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
