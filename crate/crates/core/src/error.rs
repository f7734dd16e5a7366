use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported constellation: {0}")]
    UnsupportedConstellation(String),
    #[error("symbol index {index} out of range for constellation of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("codewords drawn from different constellations")]
    MixedConstellations,
    #[error("power imbalance factor {0} outside [0.5, 1)")]
    InvalidAlpha(f64),
    #[error("noise variance must be positive and finite, got {0}")]
    InvalidNoise(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),
    #[error("insufficient curve range: target BER {target:e} not bracketed")]
    InsufficientRange { target: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
