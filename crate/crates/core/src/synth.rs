//! Synthetic sequences: pedestrians walking in separate horizontal lanes,
//! with optionally noisy, incomplete detections and clutter.
//!
//! Ground truth carries world coordinates obtained by projecting each foot
//! point through the sequence homography (1 pixel = 1 cm on the ground), so
//! the same data serves 2D and 3D evaluation.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{BBox, Homography};
use crate::io::{
    homography_path, meta_path, sequence_path, write_atomic, write_mot_file, MotEntry, SeqMap,
    SequenceMeta,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub name: String,
    pub frames: u32,
    pub targets: usize,
    pub width: u32,
    pub height: u32,
    pub fps: f64,
    pub box_width: f64,
    pub box_height: f64,
    /// Largest horizontal speed, pixels per frame.
    pub max_speed: f64,
    /// Targets enter and leave at random frames instead of spanning the
    /// whole sequence.
    pub varying_lifespans: bool,
    /// Detection boxes are shifted by up to this many pixels per axis.
    pub jitter: f64,
    /// Chance that a target is not detected in a frame.
    pub miss_rate: f64,
    /// Expected number of clutter detections per frame.
    pub false_positives: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            name: "Synth-01".into(),
            frames: 100,
            targets: 5,
            width: 960,
            height: 540,
            fps: 25.0,
            box_width: 40.0,
            box_height: 80.0,
            max_speed: 4.0,
            varying_lifespans: false,
            jitter: 0.0,
            miss_rate: 0.0,
            false_positives: 0.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSequence {
    pub meta: SequenceMeta,
    pub homography: Homography,
    pub ground_truth: Vec<MotEntry>,
    pub detections: Vec<MotEntry>,
}

/// Ground homography of every synthetic sequence: pixels to meters.
pub fn ground_homography() -> Homography {
    Homography::from_row_slice(&[0.01, 0.0, 0.0, 0.0, 0.01, 0.0, 0.0, 0.0, 1.0]).expect("scaling is invertible")
}

fn check(cfg: &SynthConfig) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidParameter(format!("synthetic sequence: {m}")));
    if cfg.frames == 0 {
        return bad("frames must be positive");
    }
    if !(cfg.box_width > 0.0 && cfg.box_height > 0.0) {
        return bad("box size must be positive");
    }
    if f64::from(cfg.width) <= cfg.box_width + 2.0 {
        return bad("image narrower than a box");
    }
    if !(0.0..=1.0).contains(&cfg.miss_rate) {
        return bad("miss rate must lie in [0, 1]");
    }
    if !(cfg.jitter >= 0.0 && cfg.false_positives >= 0.0 && cfg.max_speed >= 0.0) {
        return bad("jitter, clutter and speed must be non-negative");
    }
    Ok(())
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthSequence> {
    check(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let h = ground_homography();
    let w = f64::from(cfg.width);
    let lane_height = cfg.box_height * 1.25;
    let max_left = w - cfg.box_width - 1.0;

    let mut gt = Vec::new();
    for k in 0..cfg.targets {
        let id = k as i64 + 1;
        let top = 1.0 + lane_height * k as f64;
        let mut left = rng.gen_range(1.0..max_left);
        let mut v = if cfg.max_speed > 0.0 {
            rng.gen_range(-cfg.max_speed..=cfg.max_speed)
        } else {
            0.0
        };
        let (start, end) = if cfg.varying_lifespans && cfg.frames >= 3 {
            let third = (cfg.frames / 3).max(1);
            (rng.gen_range(1..=third), rng.gen_range(cfg.frames - third + 1..=cfg.frames))
        } else {
            (1, cfg.frames)
        };
        for frame in start..=end {
            let b = BBox::new(left, top, cfg.box_width, cfg.box_height);
            let world = h.project_ground(b.foot_point())?;
            gt.push(MotEntry::new(frame, id, b).with_world(world));
            left += v;
            if left < 1.0 || left > max_left {
                v = -v;
                left = left.clamp(1.0, max_left);
            }
        }
    }
    crate::io::sort_entries(&mut gt);

    let mut dets = Vec::new();
    for e in &gt {
        if rng.gen_bool(cfg.miss_rate) {
            continue;
        }
        let (dx, dy) = if cfg.jitter > 0.0 {
            (rng.gen_range(-cfg.jitter..=cfg.jitter), rng.gen_range(-cfg.jitter..=cfg.jitter))
        } else {
            (0.0, 0.0)
        };
        let b = BBox::new(e.bb_left + dx, e.bb_top + dy, e.bb_width, e.bb_height);
        dets.push(MotEntry::new(e.frame, -1, b).with_conf(rng.gen_range(0.6..1.0)));
    }
    let h_img = f64::from(cfg.height);
    for frame in 1..=cfg.frames {
        let whole = cfg.false_positives.floor() as usize;
        let extra = usize::from(rng.gen_bool(cfg.false_positives.fract()));
        for _ in 0..whole + extra {
            let left = rng.gen_range(1.0..max_left);
            let top = rng.gen_range(1.0..(h_img - cfg.box_height).max(2.0));
            let b = BBox::new(left, top, cfg.box_width, cfg.box_height);
            dets.push(MotEntry::new(frame, -1, b).with_conf(rng.gen_range(0.3..0.7)));
        }
    }
    crate::io::sort_entries(&mut dets);

    let mut meta = SequenceMeta::new(cfg.name.clone(), cfg.fps, cfg.width, cfg.height, cfg.frames)?;
    meta.has3d = true;
    Ok(SynthSequence {
        meta,
        homography: h,
        ground_truth: gt,
        detections: dets,
    })
}

/// Writes a benchmark directory:
///
/// ```text
/// <root>/seqmap.txt
/// <root>/gt/<name>.txt, <name>.meta, <name>.homography
/// <root>/det/<name>.txt
/// ```
pub fn write_dataset(root: &Path, sequences: &[SynthSequence]) -> Result<SeqMap> {
    let map = SeqMap::new(sequences.iter().map(|s| s.meta.name.clone()))?;
    let gt_dir = root.join("gt");
    let det_dir = root.join("det");
    for s in sequences {
        let name = &s.meta.name;
        write_atomic(&sequence_path(&gt_dir, name), &write_mot_file(&s.ground_truth))?;
        write_atomic(&meta_path(&gt_dir, name), &s.meta.to_text())?;
        write_atomic(&homography_path(&gt_dir, name), &s.homography.to_text())?;
        write_atomic(&sequence_path(&det_dir, name), &write_mot_file(&s.detections))?;
    }
    write_atomic(&root.join("seqmap.txt"), &map.to_text())?;
    Ok(map)
}
