use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("transform length {0} is not a power of two")]
    NonPowerOfTwoLength(usize),

    #[error("unsupported modulation order {0} (expected 4, 8 or 16)")]
    UnsupportedOrder(u32),

    #[error("bit block of length {len} is not a multiple of {bits_per_symbol} bits per symbol")]
    LengthNotDivisible { len: usize, bits_per_symbol: usize },

    #[error("bit value {value} at position {position} is not 0 or 1")]
    InvalidBit { position: usize, value: u8 },

    #[error("pilot count {pilot_count} must be smaller than the {n_subchannels} subchannels")]
    PilotCountExceedsN {
        pilot_count: usize,
        n_subchannels: usize,
    },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("channel gain on subcarrier {index} is too small to invert ({magnitude:e})")]
    SingularChannelGain { index: usize, magnitude: f64 },

    #[error("signal power of an empty vector is undefined")]
    EmptyInput,

    #[error("reference power must be positive, got {0}")]
    NonPositiveRefPower(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("channel profile line {line}: {message}")]
    ChannelProfile { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
