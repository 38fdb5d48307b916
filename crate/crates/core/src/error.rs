use thiserror::Error;

/// Errors raised by the cube, additive, quartic and sphere layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {n} exceeds the dense cap of {cap}")]
    DenseCap { n: u32, cap: u32 },
    #[error("{what} exceeds the configured limit ({size} > {limit})")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("dimension {0} is out of range (1..=63 for point sets)")]
    Dimension(u32),
    #[error("expected {expected} values for dimension {n}, got {got}")]
    Length { n: u32, expected: usize, got: usize },
    #[error("mask {mask:#b} has bits above dimension {n}")]
    MaskOutOfRange { mask: u64, n: u32 },
    #[error("duplicate element {0:#b}")]
    Duplicate(u64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("support set is empty")]
    EmptySet,
    #[error("norm ratio is undefined for the zero function")]
    ZeroFunction,
    #[error("coordinate vector does not match its support")]
    SupportMismatch,
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

impl Error {
    /// True for errors caused by a resource cap rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::DenseCap { .. } | Error::SizeLimit { .. })
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
