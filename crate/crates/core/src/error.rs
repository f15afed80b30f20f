use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: moduli must be positive")]
    InvalidModulus(i64),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("group order {order} exceeds the configured cap {cap}")]
    CapExceeded { order: u64, cap: u64 },

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("outside the adapter scope: {0}")]
    ScopeOverflow(String),

    #[error("atom id {0} is not an atom of this monoid")]
    NotAnAtom(usize),

    #[error("invalid monoid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("unknown length-system descriptor `{0}`")]
    UnknownDescriptor(String),

    #[error("cap {cap} too small, need at least {min}")]
    CapTooSmall { cap: u64, min: u64 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}
