//! Reference tracking-by-detection.
//!
//! Detections become nodes of a flow graph: confident detections have
//! negative node cost, transitions between overlapping detections up to
//! `max_gap` frames apart cost `-ln(affinity)`, and starting or ending a
//! trajectory costs `entry_exit_cost`. Trajectories are the minimum-cost
//! set of node-disjoint paths, see [`flow`].

pub mod flow;
mod nms;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use nms::nms;

use crate::geometry::{iou, Homography};
use crate::io::{MotEntry, Trajectory};
use crate::{Error, Result};
use flow::PathProblem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackerParams {
    /// Paid once when a trajectory starts and once when it ends.
    pub entry_exit_cost: f64,
    /// Longest frame gap a transition may bridge.
    pub max_gap: u32,
    /// Minimum overlap for two detections to be linked.
    pub gate_iou: f64,
    /// Detections scoring at or below this are dropped; above it a detection
    /// has cost `ln(confidence_floor / score)`.
    pub confidence_floor: f64,
    /// Per-frame suppression threshold.
    pub nms_overlap: f64,
}

impl Default for TrackerParams {
    fn default() -> Self {
        TrackerParams {
            entry_exit_cost: 1.0,
            max_gap: 3,
            gate_iou: 0.3,
            confidence_floor: 0.3,
            nms_overlap: 0.5,
        }
    }
}

fn fraction(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {v}")))
    }
}

impl TrackerParams {
    pub const KEYS: [&'static str; 5] = ["entry_exit_cost", "max_gap", "gate_iou", "confidence_floor", "nms_overlap"];

    pub fn validate(&self) -> Result<()> {
        if !(self.entry_exit_cost > 0.0 && self.entry_exit_cost.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "entry_exit_cost must be positive, got {}",
                self.entry_exit_cost
            )));
        }
        if self.max_gap == 0 {
            return Err(Error::InvalidParameter("max_gap must be at least 1".into()));
        }
        if !(self.confidence_floor > 0.0 && self.confidence_floor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "confidence_floor must be positive, got {}",
                self.confidence_floor
            )));
        }
        fraction("gate_iou", self.gate_iou)?;
        fraction("nms_overlap", self.nms_overlap)
    }

    /// Reads `key = value` lines; `#` starts a comment. Keys not given keep
    /// their default.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = TrackerParams::default();
        let mut seen = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::InvalidParameter(format!("line {}: {msg}", n + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.insert(key.to_string(), ()).is_some() {
                return Err(bad(format!("{key} given twice")));
            }
            let real = || -> Result<f64> {
                value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad(format!("{key}: not a number: {value:?}")))
            };
            match key {
                "entry_exit_cost" => p.entry_exit_cost = real()?,
                "max_gap" => {
                    p.max_gap = value
                        .parse()
                        .map_err(|_| bad(format!("max_gap: not a frame count: {value:?}")))?
                }
                "gate_iou" => p.gate_iou = real()?,
                "confidence_floor" => p.confidence_floor = real()?,
                "nms_overlap" => p.nms_overlap = real()?,
                other => return Err(bad(format!("unknown parameter {other:?}"))),
            }
        }
        p.validate()?;
        Ok(p)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "entry_exit_cost = {}", self.entry_exit_cost);
        let _ = writeln!(s, "max_gap = {}", self.max_gap);
        let _ = writeln!(s, "gate_iou = {}", self.gate_iou);
        let _ = writeln!(s, "confidence_floor = {}", self.confidence_floor);
        let _ = writeln!(s, "nms_overlap = {}", self.nms_overlap);
        s
    }

    /// Affinity of linking `a` to `b` that lies `gap` frames later, `None`
    /// when the pair fails the gate.
    pub fn affinity(&self, a: &MotEntry, b: &MotEntry, gap: u32) -> Option<f64> {
        let o = iou(&a.bbox(), &b.bbox());
        (gap >= 1 && gap <= self.max_gap && o >= self.gate_iou).then(|| o * 0.5f64.powi(gap as i32 - 1))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrackOutput {
    /// Ids are `1..`, assigned in order of first frame.
    pub trajectories: Vec<Trajectory>,
    /// Cost of each trajectory, aligned with `trajectories`.
    pub path_costs: Vec<f64>,
    pub total_cost: f64,
    /// Costs of the accepted augmenting paths, non-decreasing.
    pub augment_costs: Vec<f64>,
}

impl TrackOutput {
    /// All entries in `(frame, id)` order, ready to write as a result file.
    pub fn entries(&self) -> Vec<MotEntry> {
        crate::io::flatten(&self.trajectories)
    }

    /// Fills the world columns of every entry with the ground projection of
    /// its foot point.
    pub fn project(&mut self, h: &Homography) -> Result<()> {
        let mut projected = Vec::with_capacity(self.trajectories.len());
        for t in &self.trajectories {
            let entries = t
                .entries()
                .iter()
                .map(|e| Ok(e.with_world(h.project_ground(e.bbox().foot_point())?)))
                .collect::<Result<Vec<_>>>()?;
            projected.push(Trajectory::new(t.id(), entries)?);
        }
        self.trajectories = projected;
        Ok(())
    }
}

/// Detections that survive the confidence gate and per-frame suppression,
/// ordered by frame and then by input position.
pub fn candidates(detections: &[MotEntry], params: &TrackerParams) -> Vec<MotEntry> {
    let mut by_frame: BTreeMap<u32, Vec<(usize, MotEntry)>> = BTreeMap::new();
    for (i, d) in detections.iter().enumerate() {
        if d.conf > params.confidence_floor {
            by_frame.entry(d.frame).or_default().push((i, *d));
        }
    }
    let mut out = Vec::new();
    for dets in by_frame.values() {
        let boxes: Vec<MotEntry> = dets.iter().map(|d| d.1).collect();
        let mut kept = nms(&boxes, params.nms_overlap);
        kept.sort_unstable();
        out.extend(kept.into_iter().map(|k| boxes[k]));
    }
    out
}

/// Builds the paths problem over already filtered candidates.
pub fn build_problem(nodes: &[MotEntry], params: &TrackerParams) -> PathProblem {
    let node_cost = nodes.iter().map(|d| (params.confidence_floor / d.conf).ln()).collect();
    let mut edges = Vec::new();
    // first node of each frame, for scanning the next max_gap frames
    let mut starts: Vec<(u32, usize)> = Vec::new();
    for (i, d) in nodes.iter().enumerate() {
        if starts.last().is_none_or(|&(f, _)| f != d.frame) {
            starts.push((d.frame, i));
        }
    }
    for (k, &(frame, begin)) in starts.iter().enumerate() {
        let end = starts.get(k + 1).map_or(nodes.len(), |s| s.1);
        let later = &starts[k + 1..];
        for u in begin..end {
            for (j, &(f2, b2)) in later.iter().enumerate() {
                let gap = f2 - frame;
                if gap > params.max_gap {
                    break;
                }
                let e2 = later.get(j + 1).map_or(nodes.len(), |s| s.1);
                for v in b2..e2 {
                    if let Some(a) = params.affinity(&nodes[u], &nodes[v], gap) {
                        edges.push((u, v, -a.ln()));
                    }
                }
            }
        }
    }
    PathProblem {
        node_cost,
        entry_cost: params.entry_exit_cost,
        exit_cost: params.entry_exit_cost,
        edges,
    }
}

/// Tracks one sequence of detections. An empty or fully gated input yields
/// an empty output.
pub fn track(detections: &[MotEntry], params: &TrackerParams) -> Result<TrackOutput> {
    params.validate()?;
    let nodes = candidates(detections, params);
    let problem = build_problem(&nodes, params);
    let solution = flow::solve(&problem);

    let mut trajectories = Vec::with_capacity(solution.paths.len());
    let mut path_costs = Vec::with_capacity(solution.paths.len());
    // paths are ordered by first node, i.e. by first frame
    for (k, path) in solution.paths.iter().enumerate() {
        let id = k as i64 + 1;
        let entries = path
            .iter()
            .map(|&n| MotEntry::new(nodes[n].frame, id, nodes[n].bbox()))
            .collect();
        trajectories.push(Trajectory::new(id, entries)?);
        path_costs.push(problem.path_cost(path).expect("solver paths follow edges"));
    }
    Ok(TrackOutput {
        trajectories,
        path_costs,
        total_cost: solution.total_cost,
        augment_costs: solution.augment_costs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BBox;

    fn det(frame: u32, left: f64, conf: f64) -> MotEntry {
        MotEntry::new(frame, -1, BBox::new(left, 100.0, 40.0, 80.0)).with_conf(conf)
    }

    #[test]
    fn params_text_round_trip() {
        let p = TrackerParams {
            entry_exit_cost: 2.5,
            max_gap: 5,
            gate_iou: 0.25,
            confidence_floor: 0.1,
            nms_overlap: 0.4,
        };
        assert_eq!(TrackerParams::parse(&p.to_text()).unwrap(), p);
        assert_eq!(TrackerParams::parse("# nothing\n").unwrap(), TrackerParams::default());
    }

    #[test]
    fn params_rejected() {
        for text in ["gate_iou = 1.0", "max_gap = 0", "speed = 3", "gate_iou 0.3", "nms_overlap = x", "max_gap = 1\nmax_gap = 2"] {
            assert!(TrackerParams::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn two_separated_targets() {
        let mut dets = Vec::new();
        for f in 1..=20 {
            dets.push(det(f, 100.0, 0.9));
            dets.push(det(f, 400.0, 0.8));
        }
        let out = track(&dets, &TrackerParams::default()).unwrap();
        assert_eq!(out.trajectories.len(), 2);
        assert!(out.trajectories.iter().all(|t| t.len() == 20));
        assert!((out.path_costs.iter().sum::<f64>() - out.total_cost).abs() < 1e-9);
    }

    #[test]
    fn gap_is_bridged() {
        let dets: Vec<MotEntry> = [1, 2, 3, 5, 6, 7].iter().map(|&f| det(f, 100.0, 0.9)).collect();
        let out = track(&dets, &TrackerParams::default()).unwrap();
        assert_eq!(out.trajectories.len(), 1);
        assert_eq!(out.trajectories[0].frames().collect::<Vec<_>>(), vec![1, 2, 3, 5, 6, 7]);
    }

    #[test]
    fn low_confidence_and_empty_inputs() {
        assert!(track(&[], &TrackerParams::default()).unwrap().trajectories.is_empty());
        let dets: Vec<MotEntry> = (1..=10).map(|f| det(f, 100.0, 0.3)).collect();
        assert!(track(&dets, &TrackerParams::default()).unwrap().trajectories.is_empty());
    }

    #[test]
    fn output_ids_and_conf() {
        let dets: Vec<MotEntry> = (1..=5).map(|f| det(f, 100.0, 0.95)).collect();
        let out = track(&dets, &TrackerParams::default()).unwrap();
        for e in out.entries() {
            assert_eq!((e.id, e.conf), (1, 1.0));
            assert!(e.world().is_none());
        }
    }

    #[test]
    fn deterministic() {
        let mut dets = Vec::new();
        for f in 1..=15 {
            dets.push(det(f, 100.0 + 3.0 * f as f64, 0.7));
            dets.push(det(f, 130.0, 0.6));
        }
        let a = track(&dets, &TrackerParams::default()).unwrap();
        let b = track(&dets, &TrackerParams::default()).unwrap();
        assert_eq!(a, b);
    }
}
