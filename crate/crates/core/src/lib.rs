//! Multi-object tracking evaluation toolkit.
//!
//! The crate covers the whole evaluation loop for MOT-style benchmarks:
//!
//! * [`io`]: the 10-field CSV format, sequence maps, metadata sidecars and
//!   result bundles;
//! * [`geometry`]: box overlap, foot points and ground-plane homographies;
//! * [`matching`]: frame-by-frame tracker-to-target correspondence with
//!   temporal carryover, producing an [`EventLog`];
//! * [`metrics`] and [`report`]: CLEAR and track-quality measures plus
//!   emitters;
//! * [`ranking`]: average-rank leaderboards;
//! * [`tracker`] and [`tuner`]: a reference min-cost-flow tracker and the
//!   randomized parameter search used to fit it;
//! * [`audit`]: pedestrian speed statistics for checking 3D calibration;
//! * [`synth`]: synthetic sequences for demos and end-to-end tests.

pub mod assignment;
pub mod audit;
mod error;
pub mod geometry;
pub mod io;
pub mod matching;
pub mod metrics;
pub mod ranking;
pub mod report;
pub mod synth;
pub mod tracker;
pub mod tuner;

pub use error::{Error, Result};
pub use geometry::{iou, BBox, Homography, ImagePoint, WorldPoint};
pub use io::{
    EntryRole, FormatError, FormatErrorKind, MotEntry, ResultBundle, SeqMap, SequenceMeta,
    Trajectory,
};
pub use matching::{match_sequence, DistanceMode, EventLog, FrameEvents};
pub use metrics::{evaluate_benchmark, GroundTruthSequence, GroundTruthSet, MetricsReport};
pub use ranking::{average_rank, Metric, RankTable};
pub use tracker::{track, TrackerParams};
pub use tuner::{tune, SearchConfig};
