use std::io;

use thiserror::Error;

/// Error taxonomy shared by the whole crate.
///
/// Variant names are stable: the CLI prints them verbatim on stderr and
/// scripts are expected to match on them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("MalformedFile: {0}")]
    MalformedFile(String),

    #[error("IoFailure: {0}")]
    IoFailure(#[from] io::Error),

    #[error("DimensionMismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("OddLength: sequence length {0} is not even")]
    OddLength(usize),

    #[error("LengthMismatch: approx {0} vs detail {1}")]
    LengthMismatch(usize, usize),

    #[error("OddDimensions: {0}x{1}")]
    OddDimensions(usize, usize),

    #[error("ThresholdOutOfRange: S = {0}, must be in [1, 63]")]
    ThresholdOutOfRange(i32),

    #[error("AmbiguousShiftDirection: recorded pixel ({row}, {col}) has value {value}")]
    AmbiguousShiftDirection { row: usize, col: usize, value: u8 },

    #[error("EmptyLogo")]
    EmptyLogo,

    #[error("GridMismatch: expected {0}x{1}, got {2}x{3}")]
    GridMismatch(usize, usize, usize, usize),

    #[error("CentreUnderflow: block ({0}, {1}) centre is 0 with location-map bit set")]
    CentreUnderflow(usize, usize),

    #[error("CoordinateOverflow: ({0}, {1}) does not fit 16 bits")]
    CoordinateOverflow(usize, usize),

    #[error("MalformedOverhead: {0}")]
    MalformedOverhead(String),

    #[error("InsufficientCapacity: capacity {capacity} bits, payload needs {required}")]
    InsufficientCapacity { capacity: usize, required: usize },

    #[error("OverflowUnrecoverable: shifting threshold exceeded {0}")]
    OverflowUnrecoverable(i32),

    #[error("ImageTooSmall: {0}x{1}, need at least {2}x{2}")]
    ImageTooSmall(usize, usize, usize),

    #[error("NotAuthentic: image failed verification, refusing recovery")]
    NotAuthentic,
}

pub type Result<T> = std::result::Result<T, Error>;
