//! Error type shared by all pipeline stages.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by raster operations, the pipeline, and the batch front-end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter was outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A signal was too short for the requested transform.
    #[error("signal too short: length {len}, need at least {min}")]
    TooShort { len: usize, min: usize },

    /// An image was too narrow for a horizontal operation.
    #[error("image too narrow: width {width}, need at least {min}")]
    TooNarrow { width: usize, min: usize },

    /// Mismatched raster or subband dimensions.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Requested more decomposition levels than the image size allows.
    #[error("cannot decompose a {width}x{height} image over {levels} levels")]
    LevelOverflow {
        levels: usize,
        width: usize,
        height: usize,
    },

    /// A pipeline stage failed; wraps the underlying error with the stage name.
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    /// A batch input directory contained no processable images.
    #[error("no input images found in {0}")]
    EmptyInput(PathBuf),

    /// Filesystem failure.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Image decode or encode failure.
    #[error("image error on {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    /// Malformed configuration, ground-truth, or box-list file.
    #[error("parse error on {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    /// Wrap an error with the name of the pipeline stage that produced it.
    pub fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Process exit code for the CLI: 2 for i/o trouble, 3 for processing
    /// failures. Usage errors (code 1) are handled before execution starts.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Image { .. } | Error::EmptyInput(_) | Error::Parse { .. } => {
                2
            }
            Error::Stage { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}
