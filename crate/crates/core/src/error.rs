use alloc::string::String;

/// Errors raised by the core crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("precision {0} outside supported range 1..=16")]
    Precision(u32),
    #[error("value {value} outside [0, {max}]")]
    ValueOutOfRange { value: u64, max: u64 },
    #[error("bitstream length {actual} does not match expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("LFSR seed must be nonzero")]
    ZeroSeed,
    #[error("invalid LFSR configuration: {0}")]
    Lfsr(String),
    #[error("malformed netlist: {0}")]
    Structure(String),
    #[error("expected {expected} input bits, got {actual}")]
    InputCount { expected: usize, actual: usize },
    #[error("{0}")]
    Domain(String),
    #[error("training failed: {0}")]
    Training(String),
}

pub type Result<T> = core::result::Result<T, Error>;
