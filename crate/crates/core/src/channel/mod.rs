//! Channel data model: per-PAC relative power scans over time, loaded from
//! CSV or generated from a synthetic blockage scenario.

mod detect;
mod matrix;
mod synthetic;
mod trace;

pub use detect::{detect_blockage_events, detect_drops, percentile_nearest_rank, DetectedBlockage};
pub use matrix::{PowerMatrix, CODEBOOK_SIZE, PAC_COUNT};
pub use synthetic::{
    generate_synthetic, generate_synthetic_with, BlockageEventSpec, BlockageScenario, PathSpec,
    SyntheticOptions,
};
pub use trace::ChannelTrace;

use thiserror::Error;

use crate::engine::SimTime;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("cannot open trace {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("trace CSV error at line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("trace line {line}: expected 144 power values, found {found}")]
    FieldCount { line: u64, found: usize },
    #[error("trace line {line}, column {column}: not a finite number: {value:?}")]
    NonNumeric {
        line: u64,
        column: usize,
        value: String,
    },
    #[error("trace contains no data rows")]
    EmptyTrace,
    #[error("sample interval must be positive")]
    ZeroInterval,
    #[error("time {t} is outside the trace (duration {duration})")]
    OutOfRange { t: SimTime, duration: SimTime },
    #[error("invalid blockage scenario: {0}")]
    InvalidScenario(String),
    #[error("detection threshold must be > 0 dB, got {0}")]
    InvalidThreshold(f64),
}
