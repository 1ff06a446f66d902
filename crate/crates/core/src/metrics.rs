//! CLEAR and track-quality measures.
//!
//! Counts are accumulated per sequence, summed over the benchmark, and the
//! scalar measures are computed once from the sums. Percentages are kept at
//! full precision; rounding happens in [`crate::report`].

use std::collections::BTreeMap;
use std::ops::AddAssign;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::io::{MotEntry, ResultBundle, SequenceMeta, Trajectory};
use crate::matching::{coverage, match_sequence, CoverageRecord, DistanceMode, EventLog};
use crate::{Error, Result};

/// Share of its annotated frames a target must be tracked to count as
/// mostly tracked.
pub const MOSTLY_TRACKED: f64 = 0.8;
/// A target tracked for less than this share is mostly lost.
pub const MOSTLY_LOST: f64 = 0.2;

/// MOTA in percent: `100 * (1 - (fn + fp + idsw) / gt_boxes)`. Unbounded
/// below.
pub fn mota(fn_: u64, fp: u64, idsw: u64, gt_boxes: u64) -> Result<f64> {
    if gt_boxes == 0 {
        return Err(Error::UndefinedMetric("MOTA"));
    }
    Ok(100.0 * (1.0 - (fn_ + fp + idsw) as f64 / gt_boxes as f64))
}

/// MOTP in percent from the summed match values. 2D: mean overlap. 3D:
/// `1 - mean distance / threshold`. `None` without matches.
pub fn motp_from_sum(value_sum: f64, matches: u64, mode: DistanceMode) -> Option<f64> {
    if matches == 0 {
        return None;
    }
    let mean = value_sum / matches as f64;
    Some(match mode {
        DistanceMode::Iou2D { .. } => 100.0 * mean,
        DistanceMode::Euclid3D { threshold } => 100.0 * (1.0 - mean / threshold),
    })
}

pub fn motp(log: &EventLog) -> Option<f64> {
    let t = log.totals();
    motp_from_sum(t.match_value_sum, t.matches, log.mode)
}

/// False alarms per frame.
pub fn far(fp: u64, frames: u64) -> Result<f64> {
    if frames == 0 {
        return Err(Error::UndefinedMetric("FAR"));
    }
    Ok(fp as f64 / frames as f64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TrackQuality {
    pub mt: u64,
    pub pt: u64,
    pub ml: u64,
    pub mt_pct: f64,
    pub pt_pct: f64,
    pub ml_pct: f64,
    pub fm: u64,
}

fn classify(r: &CoverageRecord) -> (u64, u64, u64) {
    // integer form of tracked / life >= 0.8 and < 0.2
    let (tracked, life) = (r.tracked_frames as u64, r.life_span as u64);
    if 5 * tracked >= 4 * life {
        (1, 0, 0)
    } else if 5 * tracked < life {
        (0, 0, 1)
    } else {
        (0, 1, 0)
    }
}

/// Mostly tracked / partially tracked / mostly lost split and total
/// fragmentations. Percentages are 0 when there are no records.
pub fn track_quality(records: &[CoverageRecord]) -> TrackQuality {
    let mut q = TrackQuality::default();
    for r in records {
        let (mt, pt, ml) = classify(r);
        q.mt += mt;
        q.pt += pt;
        q.ml += ml;
        q.fm += r.fragment_count as u64;
    }
    q.fill_percentages();
    q
}

impl TrackQuality {
    fn fill_percentages(&mut self) {
        let n = self.mt + self.pt + self.ml;
        if n > 0 {
            let n = n as f64;
            self.mt_pct = 100.0 * self.mt as f64 / n;
            self.pt_pct = 100.0 * self.pt as f64 / n;
            self.ml_pct = 100.0 * self.ml as f64 / n;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeRatios {
    pub rel_id: f64,
    pub rel_fm: f64,
}

/// Identity switches and fragmentations per percent of recall.
pub fn relative_ratios(idsw: u64, fm: u64, recall_pct: f64) -> Result<RelativeRatios> {
    if recall_pct.is_nan() || recall_pct <= 0.0 {
        return Err(Error::UndefinedMetric("relative ratios (zero recall)"));
    }
    Ok(RelativeRatios {
        rel_id: idsw as f64 / recall_pct,
        rel_fm: fm as f64 / recall_pct,
    })
}

/// `100 * tp / gt_boxes`.
pub fn recall(tp: u64, gt_boxes: u64) -> Result<f64> {
    if gt_boxes == 0 {
        return Err(Error::UndefinedMetric("recall"));
    }
    Ok(100.0 * tp as f64 / gt_boxes as f64)
}

/// `100 * tp / (tp + fp)`, `None` without any hypothesis.
pub fn precision(tp: u64, fp: u64) -> Option<f64> {
    (tp + fp > 0).then(|| 100.0 * tp as f64 / (tp + fp) as f64)
}

/// Additive tallies of one or more sequences.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SequenceCounts {
    pub frames: u64,
    pub gt_boxes: u64,
    pub gt_tracks: u64,
    pub matches: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub idsw: u64,
    pub fm: u64,
    pub mt: u64,
    pub pt: u64,
    pub ml: u64,
    pub match_value_sum: f64,
}

impl AddAssign for SequenceCounts {
    fn add_assign(&mut self, o: Self) {
        self.frames += o.frames;
        self.gt_boxes += o.gt_boxes;
        self.gt_tracks += o.gt_tracks;
        self.matches += o.matches;
        self.fp += o.fp;
        self.fn_ += o.fn_;
        self.idsw += o.idsw;
        self.fm += o.fm;
        self.mt += o.mt;
        self.pt += o.pt;
        self.ml += o.ml;
        self.match_value_sum += o.match_value_sum;
    }
}

impl SequenceCounts {
    pub fn from_log(log: &EventLog, gt: &[Trajectory], frames: u64) -> Self {
        let t = log.totals();
        let q = track_quality(&coverage(log, gt));
        SequenceCounts {
            frames,
            gt_boxes: t.gt_boxes,
            gt_tracks: gt.len() as u64,
            matches: t.matches,
            fp: t.fp,
            fn_: t.fn_,
            idsw: t.idsw,
            fm: q.fm,
            mt: q.mt,
            pt: q.pt,
            ml: q.ml,
            match_value_sum: t.match_value_sum,
        }
    }
}

/// Every reported column for one tracker, over one sequence or a whole
/// benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mode: DistanceMode,
    pub mota: f64,
    /// Spread of per-sequence MOTA; 0 for a single sequence.
    pub mota_stddev: f64,
    pub motp: Option<f64>,
    pub far: f64,
    pub mt_pct: f64,
    pub pt_pct: f64,
    pub ml_pct: f64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub idsw: u64,
    pub fm: u64,
    pub rel_id: Option<f64>,
    pub rel_fm: Option<f64>,
    pub recall: f64,
    pub precision: Option<f64>,
    pub counts: SequenceCounts,
    /// Declared by the submitter, never measured here.
    pub runtime_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sequences: Vec<SequenceReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub name: String,
    pub report: MetricsReport,
}

impl MetricsReport {
    pub fn from_counts(counts: SequenceCounts, mode: DistanceMode) -> Result<Self> {
        let c = counts;
        let recall = recall(c.matches, c.gt_boxes)?;
        let ratios = relative_ratios(c.idsw, c.fm, recall).ok();
        let mut quality = TrackQuality {
            mt: c.mt,
            pt: c.pt,
            ml: c.ml,
            fm: c.fm,
            ..TrackQuality::default()
        };
        quality.fill_percentages();
        Ok(MetricsReport {
            mode,
            mota: mota(c.fn_, c.fp, c.idsw, c.gt_boxes)?,
            mota_stddev: 0.0,
            motp: motp_from_sum(c.match_value_sum, c.matches, mode),
            far: far(c.fp, c.frames)?,
            mt_pct: quality.mt_pct,
            pt_pct: quality.pt_pct,
            ml_pct: quality.ml_pct,
            fp: c.fp,
            fn_: c.fn_,
            idsw: c.idsw,
            fm: c.fm,
            rel_id: ratios.map(|r| r.rel_id),
            rel_fm: ratios.map(|r| r.rel_fm),
            recall,
            precision: precision(c.matches, c.fp),
            counts: c,
            runtime_hz: None,
            sequences: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum StdDevKind {
    /// Divide by `n`.
    #[default]
    Population,
    /// Divide by `n - 1`.
    Sample,
}

pub fn std_dev(values: &[f64], kind: StdDevKind) -> f64 {
    let n = values.len();
    let denom = match kind {
        StdDevKind::Population => n,
        StdDevKind::Sample => n.saturating_sub(1),
    };
    if n < 2 || denom == 0 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (ss / denom as f64).sqrt()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroundTruthSequence {
    pub entries: Vec<MotEntry>,
    pub meta: Option<SequenceMeta>,
}

pub type GroundTruthSet = BTreeMap<String, GroundTruthSequence>;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvalOptions {
    pub stddev: StdDevKind,
    pub runtime_hz: Option<f64>,
}

/// Result of evaluating a single sequence.
#[derive(Debug, Clone)]
pub struct SequenceEvaluation {
    pub log: EventLog,
    pub counts: SequenceCounts,
}

/// Matches one sequence and tallies it. `frames` overrides the frame count
/// used for FAR; by default it is the last frame holding any entry.
pub fn evaluate_sequence(
    gt: &[MotEntry],
    hyp: &[MotEntry],
    mode: DistanceMode,
    frames: Option<u32>,
) -> Result<SequenceEvaluation> {
    let gt_tracks = Trajectory::ground_truth(gt)?;
    let hyp_tracks = Trajectory::group(hyp, crate::io::EntryRole::Result)?;
    let log = match_sequence(&gt_tracks, &hyp_tracks, mode)?;
    let frames = frames.map(u64::from).unwrap_or_else(|| {
        gt.iter().chain(hyp).map(|e| e.frame as u64).max().unwrap_or(0)
    });
    let counts = SequenceCounts::from_log(&log, &gt_tracks, frames);
    Ok(SequenceEvaluation { log, counts })
}

/// Evaluates every sequence of `gt` against `results` and aggregates by
/// summing counts, so sequences weigh by their number of boxes.
pub fn evaluate_benchmark(
    results: &ResultBundle,
    gt: &GroundTruthSet,
    mode: DistanceMode,
    opts: &EvalOptions,
) -> Result<MetricsReport> {
    Ok(evaluate_benchmark_with_logs(results, gt, mode, opts)?.0)
}

/// As [`evaluate_benchmark`], also returning each sequence's event log.
pub fn evaluate_benchmark_with_logs(
    results: &ResultBundle,
    gt: &GroundTruthSet,
    mode: DistanceMode,
    opts: &EvalOptions,
) -> Result<(MetricsReport, Vec<(String, EventLog)>)> {
    mode.validate()?;
    if gt.is_empty() {
        return Err(Error::UndefinedMetric("MOTA (empty benchmark)"));
    }
    for name in gt.keys() {
        if results.get(name).is_none() {
            return Err(Error::MissingSequence(name.clone()));
        }
    }

    // BTreeMap iteration is sorted by name, which fixes the fold order
    let jobs: Vec<(&String, &GroundTruthSequence)> = gt.iter().collect();
    let evaluated: Vec<(String, SequenceEvaluation)> = jobs
        .par_iter()
        .map(|(name, seq)| {
            if !seq.entries.iter().any(MotEntry::is_active) {
                return Err(Error::EmptyGroundTruth((*name).clone()));
            }
            let hyp = results.get(name).unwrap_or_default();
            let frames = seq.meta.as_ref().map(|m| m.length);
            evaluate_sequence(&seq.entries, hyp, mode, frames).map(|ev| ((*name).clone(), ev))
        })
        .collect::<Result<_>>()?;

    let mut total = SequenceCounts::default();
    let mut sequences = Vec::with_capacity(evaluated.len());
    let mut logs = Vec::with_capacity(evaluated.len());
    for (name, ev) in evaluated {
        total += ev.counts;
        sequences.push(SequenceReport {
            name: name.clone(),
            report: MetricsReport::from_counts(ev.counts, mode)?,
        });
        logs.push((name, ev.log));
    }

    let motas: Vec<f64> = sequences.iter().map(|s| s.report.mota).collect();
    let mut report = MetricsReport::from_counts(total, mode)?;
    report.mota_stddev = std_dev(&motas, opts.stddev);
    report.runtime_hz = opts.runtime_hz;
    report.sequences = sequences;
    Ok((report, logs))
}
