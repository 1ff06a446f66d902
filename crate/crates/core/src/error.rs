use std::path::PathBuf;

use thiserror::Error;

use crate::io::FormatError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Format(#[from] FormatError),

    #[error("{}", path.display())]
    FileFormat {
        path: PathBuf,
        #[source]
        source: FormatError,
    },

    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("missing sequence file for {0:?}")]
    MissingSequence(String),

    #[error("duplicate sequence {0:?}")]
    DuplicateSequence(String),

    #[error("sequence {0:?} has no active ground-truth boxes")]
    EmptyGroundTruth(String),

    #[error("invalid sequence map: {0}")]
    SeqMap(String),

    #[error("invalid metadata: {0}")]
    Metadata(String),

    #[error("invalid homography: {0}")]
    Homography(String),

    #[error("point maps to infinity under the homography")]
    PointAtInfinity,

    #[error("3D matching needs world coordinates, missing for {role} entry frame {frame}, id {id}")]
    MissingWorldPoint {
        role: &'static str,
        frame: u32,
        id: i64,
    },

    #[error("duplicate {role} entry for frame {frame}, id {id}")]
    DuplicateEntry {
        role: &'static str,
        frame: u32,
        id: i64,
    },

    #[error("metric {0} is undefined for this input")]
    UndefinedMetric(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("tracker {tracker:?} has no value for metric {metric}")]
    MissingMetric { tracker: String, metric: String },

    #[error("ranking needs at least two reports, got {0}")]
    TooFewReports(usize),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
