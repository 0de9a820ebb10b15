use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Requested dimension exceeds the configured memory cap.
    Capacity { n: u32, max_n: u32 },
    /// Dimension outside the supported range regardless of configuration.
    InvalidDimension(u32),
    /// Vector length is not `2^n`.
    LengthMismatch { expected: usize, actual: usize },
    /// Two operands live on cubes of different dimension.
    DimensionMismatch { left: u32, right: u32 },
    NonFinite { index: usize },
    NonBoolean { index: usize, value: f64 },
    /// Argument outside its admissible range.
    OutOfRange { what: &'static str, value: u64, limit: u64 },
    InvalidSpec(String),
    /// `E[f] = 0`, the theorem ratio is undefined.
    Degenerate,
    /// A cap above the default was requested without acknowledgment.
    Unacknowledged { max_n: u32 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Capacity { n, max_n } => {
                write!(f, "dimension n={n} exceeds memory cap (max n={max_n})")
            }
            Error::InvalidDimension(n) => write!(f, "unsupported cube dimension n={n}"),
            Error::LengthMismatch { expected, actual } => {
                write!(f, "expected {expected} values, got {actual}")
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::NonFinite { index } => write!(f, "non-finite value at index {index}"),
            Error::NonBoolean { index, value } => {
                write!(f, "value {value} at index {index} is not 0 or 1")
            }
            Error::OutOfRange { what, value, limit } => {
                write!(f, "{what}={value} out of range (limit {limit})")
            }
            Error::InvalidSpec(s) => write!(f, "invalid function spec: {s}"),
            Error::Degenerate => f.write_str("E[f] = 0: theorem ratio undefined"),
            Error::Unacknowledged { max_n } => write!(
                f,
                "raising the memory cap to n={max_n} requires explicit acknowledgment"
            ),
        }
    }
}

impl core::error::Error for Error {}
