//! Frame-by-frame tracker-to-target correspondence.
//!
//! For every frame `t`:
//!
//! 1. a ground-truth target matched to hypothesis `j` in frame `t - 1` keeps
//!    `j` if both are present at `t` and the pair still passes the gate, even
//!    when a closer hypothesis exists;
//! 2. remaining targets and hypotheses are paired by an optimal assignment
//!    (most pairs, then least total dissimilarity) over gated pairs only;
//! 3. unpaired targets are false negatives, unpaired hypotheses false
//!    positives;
//! 4. a target newly paired with `j` whose last known partner, at any earlier
//!    frame, was some `k != j` counts an identity switch.
//!
//! Coverage timelines recorded along the way give fragmentations and the
//! mostly-tracked/lost classification.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::assignment;
use crate::io::{FormatError, FormatErrorKind, MotEntry, Trajectory};
use crate::{Error, Result};

/// How targets and hypotheses are compared, with the gating threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceMode {
    /// Box overlap; a pair passes when `iou >= threshold`.
    Iou2D { threshold: f64 },
    /// Euclidean distance of world points in meters; a pair passes when
    /// `distance <= threshold`.
    Euclid3D { threshold: f64 },
}

impl Default for DistanceMode {
    fn default() -> Self {
        Self::iou_2d()
    }
}

impl DistanceMode {
    pub const DEFAULT_IOU: f64 = 0.5;
    pub const DEFAULT_DISTANCE: f64 = 1.0;

    pub fn iou_2d() -> Self {
        DistanceMode::Iou2D {
            threshold: Self::DEFAULT_IOU,
        }
    }

    pub fn euclid_3d() -> Self {
        DistanceMode::Euclid3D {
            threshold: Self::DEFAULT_DISTANCE,
        }
    }

    pub fn with_threshold(self, threshold: f64) -> Result<Self> {
        let mode = match self {
            DistanceMode::Iou2D { .. } => DistanceMode::Iou2D { threshold },
            DistanceMode::Euclid3D { .. } => DistanceMode::Euclid3D { threshold },
        };
        mode.validate()?;
        Ok(mode)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DistanceMode::Iou2D { threshold } if !(threshold > 0.0 && threshold <= 1.0) => Err(
                Error::InvalidParameter(format!("overlap threshold must be in (0, 1], got {threshold}")),
            ),
            DistanceMode::Euclid3D { threshold } if !(threshold > 0.0 && threshold.is_finite()) => Err(
                Error::InvalidParameter(format!("distance threshold must be positive, got {threshold}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn threshold(&self) -> f64 {
        match *self {
            DistanceMode::Iou2D { threshold } | DistanceMode::Euclid3D { threshold } => threshold,
        }
    }

    pub fn is_3d(&self) -> bool {
        matches!(self, DistanceMode::Euclid3D { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            DistanceMode::Iou2D { .. } => "2d",
            DistanceMode::Euclid3D { .. } => "3d",
        }
    }

    /// Overlap (2D) or distance (3D) between two entries. In 3D mode both
    /// entries must carry world points.
    pub fn measure(&self, gt: &MotEntry, hyp: &MotEntry) -> f64 {
        match self {
            DistanceMode::Iou2D { .. } => gt.bbox().iou(&hyp.bbox()),
            DistanceMode::Euclid3D { .. } => {
                let (a, b) = (gt.world().expect("gt world point"), hyp.world().expect("hyp world point"));
                a.distance(&b)
            }
        }
    }

    /// Gate test on a value returned by [`measure`](Self::measure). The
    /// boundary value passes.
    pub fn passes(&self, value: f64) -> bool {
        match *self {
            DistanceMode::Iou2D { threshold } => value >= threshold,
            DistanceMode::Euclid3D { threshold } => value <= threshold,
        }
    }

    /// Assignment cost of a measured value: `1 - iou` or the distance.
    pub fn dissimilarity(&self, value: f64) -> f64 {
        match self {
            DistanceMode::Iou2D { .. } => 1.0 - value,
            DistanceMode::Euclid3D { .. } => value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Match {
    pub gt_id: i64,
    pub hyp_id: i64,
    /// Overlap (2D) or distance (3D).
    pub value: f64,
    /// Kept from the previous frame rather than found by the assignment.
    pub carried: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdSwitch {
    pub gt_id: i64,
    pub from_hyp: i64,
    pub to_hyp: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrameEvents {
    pub frame: u32,
    /// Sorted by ground-truth id.
    pub matches: Vec<Match>,
    pub fp_ids: Vec<i64>,
    pub fn_ids: Vec<i64>,
    pub id_switches: Vec<IdSwitch>,
}

impl FrameEvents {
    pub fn idsw_ids(&self) -> impl Iterator<Item = i64> + '_ {
        self.id_switches.iter().map(|s| s.gt_id)
    }

    pub fn gt_count(&self) -> usize {
        self.matches.len() + self.fn_ids.len()
    }

    pub fn hyp_count(&self) -> usize {
        self.matches.len() + self.fp_ids.len()
    }
}

/// A tracked-untracked-tracked transition of one target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragmentation {
    pub gt_id: i64,
    /// First frame without a match.
    pub interrupted_at: u32,
    /// Frame where tracking resumes.
    pub resumed_at: u32,
}

/// Per-target coverage summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageRecord {
    pub gt_id: i64,
    /// Frames in which the target is annotated.
    pub life_span: u32,
    pub tracked_frames: u32,
    pub fragment_count: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EventTotals {
    pub matches: u64,
    pub fp: u64,
    pub fn_: u64,
    pub idsw: u64,
    pub fm: u64,
    pub gt_boxes: u64,
    pub hyp_boxes: u64,
    /// Sum of overlap (2D) or distance (3D) over matches.
    pub match_value_sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventLog {
    pub mode: DistanceMode,
    /// One record per frame, consecutive from the first to the last frame
    /// holding any entry.
    pub frames: Vec<FrameEvents>,
    /// For each target, `(frame, tracked)` over the frames it is annotated.
    pub timelines: BTreeMap<i64, Vec<(u32, bool)>>,
    /// For each target, `(frame, hyp_id)` for every frame it is matched.
    pub assignments: BTreeMap<i64, Vec<(u32, i64)>>,
    pub fragmentations: Vec<Fragmentation>,
}

impl EventLog {
    pub fn frame(&self, frame: u32) -> Option<&FrameEvents> {
        let first = self.frames.first()?.frame;
        frame
            .checked_sub(first)
            .and_then(|i| self.frames.get(i as usize))
    }

    pub fn totals(&self) -> EventTotals {
        let mut t = EventTotals::default();
        for f in &self.frames {
            t.matches += f.matches.len() as u64;
            t.fp += f.fp_ids.len() as u64;
            t.fn_ += f.fn_ids.len() as u64;
            t.idsw += f.id_switches.len() as u64;
            t.gt_boxes += f.gt_count() as u64;
            t.hyp_boxes += f.hyp_count() as u64;
            t.match_value_sum += f.matches.iter().map(|m| m.value).sum::<f64>();
        }
        t.fm = self.fragmentations.len() as u64;
        t
    }

    /// Fragmentations with the frame where tracking was interrupted.
    pub fn fragmentations_at(&self, frame: u32) -> impl Iterator<Item = &Fragmentation> {
        self.fragmentations.iter().filter(move |f| f.interrupted_at == frame)
    }

    /// Debug dump, one row per event:
    /// `frame,kind,gt_id,hyp_id,value`.
    ///
    /// `value` is the overlap or distance for `MATCH`, the previous
    /// hypothesis for `IDSW` and the resume frame for `FM` (whose `frame` is
    /// the first untracked one). Absent ids are left empty.
    pub fn to_csv(&self) -> String {
        let mut rows: Vec<(u32, String)> = Vec::new();
        for f in &self.frames {
            for m in &f.matches {
                rows.push((f.frame, format!("{},MATCH,{},{},{}", f.frame, m.gt_id, m.hyp_id, m.value)));
            }
            for s in &f.id_switches {
                rows.push((f.frame, format!("{},IDSW,{},{},{}", f.frame, s.gt_id, s.to_hyp, s.from_hyp)));
            }
            for id in &f.fp_ids {
                rows.push((f.frame, format!("{},FP,,{id},", f.frame)));
            }
            for id in &f.fn_ids {
                rows.push((f.frame, format!("{},FN,{id},,", f.frame)));
            }
        }
        for fm in &self.fragmentations {
            rows.push((
                fm.interrupted_at,
                format!("{},FM,{},,{}", fm.interrupted_at, fm.gt_id, fm.resumed_at),
            ));
        }
        rows.sort_by_key(|(frame, _)| *frame);
        let mut out = String::from("frame,kind,gt_id,hyp_id,value\n");
        for (_, row) in rows {
            let _ = writeln!(out, "{row}");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    Match,
    Fp,
    Fn,
    Idsw,
    Fm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventRow {
    pub frame: u32,
    pub kind: EventKind,
    pub gt_id: Option<i64>,
    pub hyp_id: Option<i64>,
    pub value: Option<f64>,
}

/// Reads back the dump written by [`EventLog::to_csv`].
pub fn parse_events_csv(text: &str) -> Result<Vec<EventRow>, FormatError> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim();
        if raw.is_empty() || (line == 1 && raw.starts_with("frame")) {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(FormatError {
                line,
                kind: FormatErrorKind::FieldCount { found: fields.len() },
            });
        }
        let nan = |column: usize| FormatError {
            line,
            kind: FormatErrorKind::NotANumber {
                column,
                text: fields[column - 1].to_string(),
            },
        };
        let opt_int = |column: usize| -> Result<Option<i64>, FormatError> {
            let f = fields[column - 1];
            if f.is_empty() {
                Ok(None)
            } else {
                f.parse().map(Some).map_err(|_| nan(column))
            }
        };
        let kind = match fields[1] {
            "MATCH" => EventKind::Match,
            "FP" => EventKind::Fp,
            "FN" => EventKind::Fn,
            "IDSW" => EventKind::Idsw,
            "FM" => EventKind::Fm,
            other => {
                return Err(FormatError {
                    line,
                    kind: FormatErrorKind::Invalid(format!("unknown event kind {other:?}")),
                })
            }
        };
        let value = if fields[4].is_empty() {
            None
        } else {
            Some(fields[4].parse::<f64>().map_err(|_| nan(5))?)
        };
        rows.push(EventRow {
            frame: fields[0].parse().map_err(|_| nan(1))?,
            kind,
            gt_id: opt_int(3)?,
            hyp_id: opt_int(4)?,
            value,
        });
    }
    Ok(rows)
}

type FrameIndex<'a> = BTreeMap<u32, Vec<(i64, &'a MotEntry)>>;

fn index_by_frame<'a>(
    trajectories: &'a [Trajectory],
    role: &'static str,
    need_world: bool,
) -> Result<FrameIndex<'a>> {
    let mut index: FrameIndex<'a> = BTreeMap::new();
    for t in trajectories {
        for e in t.entries() {
            if need_world && e.world().is_none() {
                return Err(Error::MissingWorldPoint {
                    role,
                    frame: e.frame,
                    id: t.id(),
                });
            }
            index.entry(e.frame).or_default().push((t.id(), e));
        }
    }
    for (frame, list) in index.iter_mut() {
        list.sort_by_key(|(id, _)| *id);
        if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateEntry {
                role,
                frame: *frame,
                id: w[0].0,
            });
        }
    }
    Ok(index)
}

/// Matches hypotheses to ground truth over a whole sequence.
///
/// `gt` must already exclude entries flagged inactive (see
/// [`Trajectory::ground_truth`]).
pub fn match_sequence(gt: &[Trajectory], hyp: &[Trajectory], mode: DistanceMode) -> Result<EventLog> {
    mode.validate()?;
    let gt_index = index_by_frame(gt, "ground truth", mode.is_3d())?;
    let hyp_index = index_by_frame(hyp, "hypothesis", mode.is_3d())?;

    let mut log = EventLog {
        mode,
        frames: Vec::new(),
        timelines: BTreeMap::new(),
        assignments: BTreeMap::new(),
        fragmentations: Vec::new(),
    };
    let first = gt_index.keys().chain(hyp_index.keys()).min().copied();
    let last = gt_index.keys().chain(hyp_index.keys()).max().copied();
    let (Some(first), Some(last)) = (first, last) else {
        return Ok(log);
    };

    let empty = Vec::new();
    // gt -> hyp pairs of the previous frame
    let mut previous: HashMap<i64, i64> = HashMap::new();
    let mut last_known: HashMap<i64, i64> = HashMap::new();

    for frame in first..=last {
        let gts = gt_index.get(&frame).unwrap_or(&empty);
        let hyps = hyp_index.get(&frame).unwrap_or(&empty);
        let hyp_pos: HashMap<i64, usize> = hyps.iter().enumerate().map(|(i, (id, _))| (*id, i)).collect();

        let mut gt_taken = vec![false; gts.len()];
        let mut hyp_taken = vec![false; hyps.len()];
        let mut events = FrameEvents {
            frame,
            ..FrameEvents::default()
        };

        // step 1: carry over previous pairs that still pass the gate
        for (gi, (gid, gentry)) in gts.iter().enumerate() {
            let Some(prev_hyp) = previous.get(gid) else {
                continue;
            };
            let Some(&hi) = hyp_pos.get(prev_hyp) else {
                continue;
            };
            let value = mode.measure(gentry, hyps[hi].1);
            if mode.passes(value) {
                gt_taken[gi] = true;
                hyp_taken[hi] = true;
                events.matches.push(Match {
                    gt_id: *gid,
                    hyp_id: *prev_hyp,
                    value,
                    carried: true,
                });
            }
        }

        // step 2: optimal assignment among the rest
        let free_gt: Vec<usize> = (0..gts.len()).filter(|&i| !gt_taken[i]).collect();
        let free_hyp: Vec<usize> = (0..hyps.len()).filter(|&j| !hyp_taken[j]).collect();
        let mut values = vec![vec![0.0; free_hyp.len()]; free_gt.len()];
        let costs: Vec<Vec<Option<f64>>> = free_gt
            .iter()
            .enumerate()
            .map(|(r, &gi)| {
                free_hyp
                    .iter()
                    .enumerate()
                    .map(|(c, &hj)| {
                        let value = mode.measure(gts[gi].1, hyps[hj].1);
                        values[r][c] = value;
                        mode.passes(value).then(|| mode.dissimilarity(value))
                    })
                    .collect()
            })
            .collect();
        for (r, c) in assignment::solve(&costs) {
            let (gi, hj) = (free_gt[r], free_hyp[c]);
            gt_taken[gi] = true;
            hyp_taken[hj] = true;
            let (gid, hid) = (gts[gi].0, hyps[hj].0);
            if let Some(&k) = last_known.get(&gid) {
                if k != hid {
                    events.id_switches.push(IdSwitch {
                        gt_id: gid,
                        from_hyp: k,
                        to_hyp: hid,
                    });
                }
            }
            events.matches.push(Match {
                gt_id: gid,
                hyp_id: hid,
                value: values[r][c],
                carried: false,
            });
        }
        events.matches.sort_by_key(|m| m.gt_id);
        events.id_switches.sort_by_key(|s| s.gt_id);

        // step 3: leftovers
        events.fn_ids = (0..gts.len()).filter(|&i| !gt_taken[i]).map(|i| gts[i].0).collect();
        events.fp_ids = (0..hyps.len()).filter(|&j| !hyp_taken[j]).map(|j| hyps[j].0).collect();

        previous.clear();
        for m in &events.matches {
            previous.insert(m.gt_id, m.hyp_id);
            last_known.insert(m.gt_id, m.hyp_id);
            log.assignments.entry(m.gt_id).or_default().push((frame, m.hyp_id));
        }
        for (gi, (gid, _)) in gts.iter().enumerate() {
            log.timelines.entry(*gid).or_default().push((frame, gt_taken[gi]));
        }
        log.frames.push(events);
    }

    for (&gid, timeline) in &log.timelines {
        let tracked: Vec<u32> = timeline.iter().filter(|(_, t)| *t).map(|(f, _)| *f).collect();
        for w in tracked.windows(2) {
            if w[1] > w[0] + 1 {
                log.fragmentations.push(Fragmentation {
                    gt_id: gid,
                    interrupted_at: w[0] + 1,
                    resumed_at: w[1],
                });
            }
        }
    }
    log.fragmentations.sort_by_key(|f| (f.interrupted_at, f.gt_id));
    Ok(log)
}

/// Coverage record for every ground-truth trajectory, in the order given.
///
/// A target counts one fragmentation each time tracking stops and later
/// resumes within its lifetime, regardless of which hypothesis resumes it.
/// Frames where the target is not annotated count as untracked.
pub fn coverage(log: &EventLog, gt: &[Trajectory]) -> Vec<CoverageRecord> {
    let mut fragments: HashMap<i64, u32> = HashMap::new();
    for f in &log.fragmentations {
        *fragments.entry(f.gt_id).or_default() += 1;
    }
    gt.iter()
        .map(|t| {
            let tracked = log
                .timelines
                .get(&t.id())
                .map_or(0, |tl| tl.iter().filter(|(_, tracked)| *tracked).count() as u32);
            CoverageRecord {
                gt_id: t.id(),
                life_span: t.len() as u32,
                tracked_frames: tracked,
                fragment_count: fragments.get(&t.id()).copied().unwrap_or(0),
            }
        })
        .collect()
}
