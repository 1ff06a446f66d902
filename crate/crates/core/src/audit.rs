//! Pedestrian speed statistics for checking ground-plane calibration and
//! annotations.
//!
//! Speeds are measured between consecutive annotated frames of a
//! trajectory on the ground plane. World points come from the entry's own
//! world columns when set and otherwise from projecting the box foot point
//! through a homography, if one is supplied. Implausible speeds usually
//! point at far-away, briefly visible targets where small image jitter
//! becomes large ground-plane motion.

use std::fmt::Write as _;

use serde::Serialize;

use crate::geometry::{Homography, ImagePoint, WorldPoint};
use crate::io::{MotEntry, Trajectory};
use crate::{Error, Result};

/// Upper end of realistic walking speeds, m/s.
pub const DEFAULT_OUTLIER_SPEED: f64 = 3.0;
pub const DEFAULT_BIN_WIDTH: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedSample {
    pub track_id: i64,
    /// Later frame of the measured pair.
    pub frame: u32,
    /// m/s
    pub speed: f64,
    /// Foot point of the box at `frame`.
    pub image: ImagePoint,
}

/// A consecutive pair that could not be measured for lack of a world point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SkippedPair {
    pub track_id: i64,
    pub from_frame: u32,
    pub to_frame: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackSpeeds {
    pub track_id: i64,
    pub samples: Vec<SpeedSample>,
    pub skipped: Vec<SkippedPair>,
}

impl TrackSpeeds {
    pub fn mean(&self) -> Option<f64> {
        let n = self.samples.len();
        (n > 0).then(|| self.samples.iter().map(|s| s.speed).sum::<f64>() / n as f64)
    }
}

fn world_point(e: &MotEntry, h: Option<&Homography>) -> Result<Option<WorldPoint>> {
    if let Some(p) = e.world() {
        return Ok(Some(p));
    }
    match h {
        Some(h) => match h.project_ground(e.bbox().foot_point()) {
            Ok(p) => Ok(Some(p)),
            Err(Error::PointAtInfinity) => Ok(None),
            Err(other) => Err(other),
        },
        None => Ok(None),
    }
}

fn check_fps(fps: f64) -> Result<()> {
    if fps > 0.0 && fps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("fps must be positive, got {fps}")))
    }
}

/// Speed between each pair of consecutive annotated frames, attributed to
/// the later frame: `distance * fps / frame_gap`.
pub fn speeds(traj: &Trajectory, fps: f64, h: Option<&Homography>) -> Result<TrackSpeeds> {
    check_fps(fps)?;
    let mut out = TrackSpeeds {
        track_id: traj.id(),
        samples: Vec::new(),
        skipped: Vec::new(),
    };
    let points = traj
        .entries()
        .iter()
        .map(|e| world_point(e, h))
        .collect::<Result<Vec<_>>>()?;
    for (k, w) in traj.entries().windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        match (points[k], points[k + 1]) {
            (Some(p), Some(q)) => out.samples.push(SpeedSample {
                track_id: traj.id(),
                frame: b.frame,
                speed: p.distance(&q) * fps / f64::from(b.frame - a.frame),
                image: b.bbox().foot_point(),
            }),
            _ => out.skipped.push(SkippedPair {
                track_id: traj.id(),
                from_frame: a.frame,
                to_frame: b.frame,
            }),
        }
    }
    Ok(out)
}

/// Fixed-width histogram starting at 0; bin `k` holds `[k*w, (k+1)*w)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(bin_width: f64) -> Result<Self> {
        if !(bin_width > 0.0 && bin_width.is_finite()) {
            return Err(Error::InvalidParameter(format!("bin width must be positive, got {bin_width}")));
        }
        Ok(Histogram {
            bin_width,
            counts: Vec::new(),
        })
    }

    pub fn add(&mut self, value: f64) {
        let bin = (value.max(0.0) / self.bin_width).floor() as usize;
        if bin >= self.counts.len() {
            self.counts.resize(bin + 1, 0);
        }
        self.counts[bin] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedProfile {
    pub fps: f64,
    pub tracks: Vec<TrackSpeeds>,
    pub histogram: Histogram,
}

impl SpeedProfile {
    pub fn samples(&self) -> impl Iterator<Item = &SpeedSample> {
        self.tracks.iter().flat_map(|t| t.samples.iter())
    }

    pub fn skipped(&self) -> impl Iterator<Item = &SkippedPair> {
        self.tracks.iter().flat_map(|t| t.skipped.iter())
    }
}

/// Speeds of every trajectory plus their pooled histogram.
pub fn profile(
    trajectories: &[Trajectory],
    fps: f64,
    h: Option<&Homography>,
    bin_width: f64,
) -> Result<SpeedProfile> {
    let mut histogram = Histogram::new(bin_width)?;
    let tracks = trajectories
        .iter()
        .map(|t| speeds(t, fps, h))
        .collect::<Result<Vec<_>>>()?;
    for s in tracks.iter().flat_map(|t| &t.samples) {
        histogram.add(s.speed);
    }
    Ok(SpeedProfile { fps, tracks, histogram })
}

/// Samples faster than `threshold` m/s, in trajectory and frame order.
pub fn flag_outliers(profile: &SpeedProfile, threshold: f64) -> Vec<SpeedSample> {
    profile.samples().filter(|s| s.speed > threshold).copied().collect()
}

/// `sequence,bin_low,bin_high,count`
pub fn histogram_csv<'a>(profiles: impl IntoIterator<Item = (&'a str, &'a SpeedProfile)>) -> String {
    let mut s = String::from("sequence,bin_low,bin_high,count\n");
    for (name, p) in profiles {
        let w = p.histogram.bin_width;
        for (k, c) in p.histogram.counts.iter().enumerate() {
            let _ = writeln!(s, "{name},{},{},{c}", k as f64 * w, (k + 1) as f64 * w);
        }
    }
    s
}

/// `sequence,id,samples,mean_speed`; tracks without samples show `n/a`.
pub fn mean_speed_csv<'a>(profiles: impl IntoIterator<Item = (&'a str, &'a SpeedProfile)>) -> String {
    let mut s = String::from("sequence,id,samples,mean_speed\n");
    for (name, p) in profiles {
        for t in &p.tracks {
            let mean = t.mean().map_or_else(|| "n/a".to_string(), |m| m.to_string());
            let _ = writeln!(s, "{name},{},{},{mean}", t.track_id, t.samples.len());
        }
    }
    s
}

/// `sequence,id,frame,speed,image_x,image_y`
pub fn samples_csv<'a>(rows: impl IntoIterator<Item = (&'a str, &'a SpeedSample)>) -> String {
    let mut s = String::from("sequence,id,frame,speed,image_x,image_y\n");
    for (name, o) in rows {
        let _ = writeln!(s, "{name},{},{},{},{},{}", o.track_id, o.frame, o.speed, o.image.x, o.image.y);
    }
    s
}
