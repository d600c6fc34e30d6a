use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported transform length {0}")]
    UnsupportedLength(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown {kind} `{name}`; valid options: {}", options.join(", "))]
    UnknownName { kind: &'static str, name: String, options: Vec<String> },
    #[error("sample rate mismatch: waveform at {waveform} Hz, channel realized at {realization} Hz")]
    SampleRateMismatch { waveform: f64, realization: f64 },
    #[error("curves are not comparable: {0}")]
    NotComparable(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
