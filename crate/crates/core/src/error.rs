use alloc::string::String;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidParams(String),
    #[error("operands carry different field parameters")]
    ParamMismatch,
    #[error("division by zero")]
    ZeroDivision,
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("lower-left block is not invertible")]
    NotInU0,
    #[error("not a Lagrangian pair: {0}")]
    NotAPair(String),
    #[error("entry does not lie in the base field")]
    NotOverBase,
    #[error("pole outside the base field")]
    IrreduciblePole,
    #[error("ramification index {e} is not divisible by {needed}")]
    RamificationInsufficient { needed: u64, e: u32 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
