//! Randomized parameter search for the reference tracker.
//!
//! Every run draws each parameter independently and uniformly from
//! `[θ/2, 2θ]` around its default `θ`, tracks the whole training set and
//! scores it by MOTA. Run 1 always uses the defaults unchanged. The
//! parameters of all runs are drawn up front from one seeded generator, so
//! the search is reproducible however runs are scheduled.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::Homography;
use crate::io::ResultBundle;
use crate::matching::DistanceMode;
use crate::metrics::{evaluate_benchmark, EvalOptions, GroundTruthSet};
use crate::tracker::{track, TrackerParams};
use crate::{Error, Result};

pub const DEFAULT_RUNS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub defaults: TrackerParams,
    pub runs: usize,
    pub seed: u64,
    pub mode: DistanceMode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            defaults: TrackerParams::default(),
            runs: DEFAULT_RUNS,
            seed: 0,
            mode: DistanceMode::iou_2d(),
        }
    }
}

/// Uniform draw from `[θ/2, 2θ)`, additionally kept below `upper` when
/// given.
pub fn sample_around<R: Rng + ?Sized>(theta: f64, upper: Option<f64>, rng: &mut R) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidParameter(format!("default value must be positive, got {theta}")));
    }
    let lo = theta / 2.0;
    let hi = upper.map_or(2.0 * theta, |u| u.min(2.0 * theta));
    if hi.is_nan() || hi <= lo {
        return Err(Error::InvalidParameter(format!("empty sampling range around {theta}")));
    }
    Ok(rng.gen_range(lo..hi))
}

/// One perturbed parameter vector. Overlap ratios stay below 1 and the
/// frame gap is rounded to the nearest integer, at least 1.
pub fn sample_params<R: Rng + ?Sized>(defaults: &TrackerParams, rng: &mut R) -> Result<TrackerParams> {
    let gap = sample_around(defaults.max_gap as f64, None, rng)?;
    Ok(TrackerParams {
        entry_exit_cost: sample_around(defaults.entry_exit_cost, None, rng)?,
        max_gap: (gap.round() as u32).max(1),
        gate_iou: sample_around(defaults.gate_iou, Some(1.0), rng)?,
        confidence_floor: sample_around(defaults.confidence_floor, None, rng)?,
        nms_overlap: sample_around(defaults.nms_overlap, Some(1.0), rng)?,
    })
}

/// Detections and ground truth of the same sequences. Scoring in 3D needs
/// a ground homography per sequence to place the tracker output.
#[derive(Debug, Clone, Default)]
pub struct TrainingSet {
    pub detections: ResultBundle,
    pub ground_truth: GroundTruthSet,
    pub homographies: BTreeMap<String, Homography>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// 1-based; run 1 holds the defaults.
    pub run: usize,
    pub params: TrackerParams,
    /// Training MOTA, negative infinity for failed runs.
    pub mota: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneOutcome {
    pub best_params: TrackerParams,
    pub best_mota: f64,
    pub best_run: usize,
    pub runs: Vec<RunRecord>,
}

/// Tracks every training sequence with `params` and returns the
/// benchmark MOTA.
pub fn score(train: &TrainingSet, params: &TrackerParams, mode: DistanceMode) -> Result<f64> {
    let mut results = ResultBundle::new();
    for name in train.ground_truth.keys() {
        let dets = train.detections.get(name).ok_or_else(|| Error::MissingSequence(name.clone()))?;
        let mut out = track(dets, params)?;
        if mode.is_3d() {
            let h = train.homographies.get(name).ok_or_else(|| {
                Error::Homography(format!("3D scoring of {name:?} needs a ground homography"))
            })?;
            out.project(h)?;
        }
        results.insert(name.clone(), out.entries())?;
    }
    Ok(evaluate_benchmark(&results, &train.ground_truth, mode, &EvalOptions::default())?.mota)
}

/// The parameter vectors of all runs, in run order.
pub fn plan(config: &SearchConfig) -> Result<Vec<TrackerParams>> {
    if config.runs == 0 {
        return Err(Error::InvalidParameter("runs must be at least 1".into()));
    }
    config.defaults.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut all = vec![config.defaults];
    for _ in 1..config.runs {
        all.push(sample_params(&config.defaults, &mut rng)?);
    }
    Ok(all)
}

pub fn tune(train: &TrainingSet, config: &SearchConfig) -> Result<TuneOutcome> {
    if train.ground_truth.is_empty() {
        return Err(Error::InvalidParameter("training set has no ground truth".into()));
    }
    let params = plan(config)?;
    let runs: Vec<RunRecord> = params
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let (mota, error) = match p.validate().and_then(|_| score(train, p, config.mode)) {
                Ok(m) => (m, None),
                Err(e) => (f64::NEG_INFINITY, Some(e.to_string())),
            };
            RunRecord {
                run: i + 1,
                params: *p,
                mota,
                error,
            }
        })
        .collect();

    // strict comparison keeps the earliest run on ties
    let mut best = &runs[0];
    for r in &runs[1..] {
        if r.mota > best.mota {
            best = r;
        }
    }
    Ok(TuneOutcome {
        best_params: best.params,
        best_mota: best.mota,
        best_run: best.run,
        runs,
    })
}

impl TuneOutcome {
    /// One CSV row per run.
    pub fn search_log_csv(&self) -> String {
        let mut s = String::from("run,entry_exit_cost,max_gap,gate_iou,confidence_floor,nms_overlap,mota,error\n");
        for r in &self.runs {
            let p = &r.params;
            let err = r.error.as_deref().unwrap_or("").replace([',', '\n'], " ");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                r.run, p.entry_exit_cost, p.max_gap, p.gate_iou, p.confidence_floor, p.nms_overlap, r.mota, err
            );
        }
        s
    }
}
