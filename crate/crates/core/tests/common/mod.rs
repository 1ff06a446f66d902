//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use motkit::matching::DistanceMode;
use motkit::metrics::{MetricsReport, SequenceCounts};
use motkit::report::NamedReport;
use motkit::tracker::flow::PathProblem;
use motkit::tuner::TrainingSet;
use motkit::{
    BBox, EventLog, GroundTruthSequence, GroundTruthSet, Homography, MotEntry, ResultBundle, TrackerParams, Trajectory,
    WorldPoint,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Places a target at position `x` (meters) on a line. Boxes are 30 px wide
/// and move 10 px per meter, so an overlap of 0.5 is reached exactly at a
/// distance of 1 m and both matching modes gate identically.
pub fn entry(frame: u32, id: i64, x: f64) -> MotEntry {
    MotEntry::new(frame, id, BBox::new(100.0 + 10.0 * x, 50.0, 30.0, 60.0)).with_world(WorldPoint::new(x, 0.0, 0.0))
}

pub fn traj(id: i64, points: &[(u32, f64)]) -> Trajectory {
    Trajectory::new(id, points.iter().map(|&(f, x)| entry(f, id, x)).collect()).unwrap()
}

pub fn series(id: i64, first: u32, xs: &[f64]) -> Trajectory {
    let pts: Vec<(u32, f64)> = xs.iter().enumerate().map(|(k, &x)| (first + k as u32, x)).collect();
    traj(id, &pts)
}

pub struct Scene {
    pub gt: Vec<Trajectory>,
    pub hyp: Vec<Trajectory>,
}

pub const RED: i64 = 1;
pub const BLUE: i64 = 2;

/// One target; red follows it and drifts away, blue arrives and takes over
/// in frame 4.
pub fn fig4_a() -> Scene {
    Scene {
        gt: vec![series(1, 1, &[0.0; 6])],
        hyp: vec![
            series(RED, 1, &[0.1, 0.3, 0.6, 1.5, 2.5, 3.5]),
            series(BLUE, 1, &[3.0, 2.0, 1.2, 0.2, 0.1, 0.1]),
        ],
    }
}

/// Red covers frames 1-2, nothing covers frame 3, blue covers 4-6.
pub fn fig4_b() -> Scene {
    Scene {
        gt: vec![series(1, 1, &[0.0; 6])],
        hyp: vec![series(RED, 1, &[0.1, 0.1]), series(BLUE, 4, &[0.1, 0.1, 0.1])],
    }
}

/// Two targets; the frame-1 assignment is propagated while red drifts
/// towards the second target, giving 5 misses and 4 false positives.
pub fn fig4_c() -> Scene {
    Scene {
        gt: vec![series(1, 1, &[0.0; 6]), series(2, 1, &[1.5; 6])],
        hyp: vec![
            series(RED, 1, &[0.6, 0.9, 1.3, 1.3, 1.3, 2.6]),
            series(BLUE, 1, &[1.9, 1.6, 1.5, 1.5, 1.5]),
        ],
    }
}

/// Target 1 is occluded in frames 3-4 while red moves on to target 2; on
/// reappearance target 1 is matched to blue.
pub fn fig4_d() -> Scene {
    Scene {
        gt: vec![traj(1, &[(1, 0.0), (2, 0.0), (5, 0.0), (6, 0.0)]), series(2, 3, &[0.5; 4])],
        hyp: vec![series(RED, 1, &[0.1, 0.1, 0.3, 0.3, 0.3, 0.3]), series(BLUE, 5, &[0.6, 0.6])],
    }
}

/// Random scene: up to `max_gt` targets and `max_hyp` hypotheses over
/// `frames` frames, each present in a random subset of frames at random
/// positions, so many pairs straddle the gate.
pub fn random_scene<R: Rng>(rng: &mut R, max_gt: usize, max_hyp: usize, frames: u32) -> Scene {
    let make = |id: i64, rng: &mut R| -> Option<Trajectory> {
        let base = rng.gen_range(0.0..4.0);
        let mut pts = Vec::new();
        for f in 1..=frames {
            if rng.gen_bool(0.75) {
                pts.push((f, base + rng.gen_range(-0.8..0.8)));
            }
        }
        (!pts.is_empty()).then(|| traj(id, &pts))
    };
    let n_gt = rng.gen_range(1..=max_gt);
    let n_hyp = rng.gen_range(0..=max_hyp);
    let gt = (0..n_gt).filter_map(|i| make(i as i64 + 1, rng)).collect();
    let hyp = (0..n_hyp).filter_map(|i| make(100 + i as i64, rng)).collect();
    Scene { gt, hyp }
}

/// Gives the trajectories fresh ids in a shuffled order.
pub fn relabel<R: Rng>(tracks: &[Trajectory], rng: &mut R) -> Vec<Trajectory> {
    let mut ids: Vec<i64> = (500..500 + tracks.len() as i64).collect();
    ids.shuffle(rng);
    tracks
        .iter()
        .zip(ids)
        .map(|(t, id)| Trajectory::new(id, t.entries().iter().map(|e| MotEntry { id, ..*e }).collect()).unwrap())
        .collect()
}

/// Exhaustive search over all partial matchings: largest matching first,
/// then smallest total cost.
pub fn brute_force_assignment(costs: &[Vec<Option<f64>>]) -> (usize, f64) {
    fn rec(costs: &[Vec<Option<f64>>], row: usize, used: &mut [bool], k: usize, c: f64, best: &mut (usize, f64)) {
        if row == costs.len() {
            if k > best.0 || (k == best.0 && c < best.1) {
                *best = (k, c);
            }
            return;
        }
        rec(costs, row + 1, used, k, c, best);
        for col in 0..used.len() {
            if let (false, Some(x)) = (used[col], costs[row][col]) {
                used[col] = true;
                rec(costs, row + 1, used, k + 1, c + x, best);
                used[col] = false;
            }
        }
    }
    let cols = costs.first().map_or(0, Vec::len);
    let mut best = (0, 0.0);
    rec(costs, 0, &mut vec![false; cols], 0, 0.0, &mut best);
    best
}

/// Replays every frame of `log` against the scene: carried matches must be
/// exactly the previous frame's pairs that still pass the gate, and the
/// new matches must form an optimal assignment over what is left.
/// Returns the number of frames whose new-match step was checked.
pub fn check_against_oracle(scene: &Scene, mode: DistanceMode, log: &EventLog) -> Result<usize, String> {
    let mut prev: BTreeMap<i64, i64> = BTreeMap::new();
    let mut checked = 0;
    for fe in &log.frames {
        let t = fe.frame;
        let gts: Vec<&MotEntry> = scene.gt.iter().filter_map(|g| g.at(t)).collect();
        let hyps: Vec<&MotEntry> = scene.hyp.iter().filter_map(|h| h.at(t)).collect();
        let find_h = |id: i64| hyps.iter().find(|h| h.id == id).copied();

        let mut expected_carried = BTreeSet::new();
        for g in &gts {
            if let Some(&hid) = prev.get(&g.id) {
                if let Some(h) = find_h(hid) {
                    if mode.passes(mode.measure(g, h)) {
                        expected_carried.insert((g.id, hid));
                    }
                }
            }
        }
        let carried: BTreeSet<(i64, i64)> =
            fe.matches.iter().filter(|m| m.carried).map(|m| (m.gt_id, m.hyp_id)).collect();
        if carried != expected_carried {
            return Err(format!("frame {t}: carried {carried:?}, expected {expected_carried:?}"));
        }

        let free_g: Vec<&&MotEntry> = gts.iter().filter(|g| !carried.iter().any(|c| c.0 == g.id)).collect();
        let free_h: Vec<&&MotEntry> = hyps.iter().filter(|h| !carried.iter().any(|c| c.1 == h.id)).collect();
        let costs: Vec<Vec<Option<f64>>> = free_g
            .iter()
            .map(|g| {
                free_h
                    .iter()
                    .map(|h| {
                        let v = mode.measure(g, h);
                        mode.passes(v).then(|| mode.dissimilarity(v))
                    })
                    .collect()
            })
            .collect();
        let (k, cost) = brute_force_assignment(&costs);
        let new: Vec<_> = fe.matches.iter().filter(|m| !m.carried).collect();
        let new_cost: f64 = new.iter().map(|m| mode.dissimilarity(m.value)).sum();
        if new.len() != k || (new_cost - cost).abs() > 1e-9 {
            return Err(format!("frame {t}: {} new matches costing {new_cost}, oracle {k} costing {cost}", new.len()));
        }
        checked += 1;

        // conservation within the frame
        if fe.matches.len() + fe.fn_ids.len() != gts.len() || fe.matches.len() + fe.fp_ids.len() != hyps.len() {
            return Err(format!("frame {t}: counts do not add up"));
        }
        if fe.idsw_ids().any(|g| !fe.matches.iter().any(|m| m.gt_id == g)) {
            return Err(format!("frame {t}: identity switch on an unmatched target"));
        }
        prev = fe.matches.iter().map(|m| (m.gt_id, m.hyp_id)).collect();
    }
    Ok(checked)
}

/// Minimum total cost over every set of node-disjoint paths, by trying
/// each way of giving nodes a predecessor (or none) or leaving them out.
pub fn brute_force_paths(p: &PathProblem) -> f64 {
    let n = p.node_cost.len();
    let preds: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|v| p.edges.iter().filter(|e| e.1 == v).map(|e| (e.0, e.2)).collect())
        .collect();

    // state per node: None = unused, Some(None) = starts a path,
    // Some(Some(u)) = continues from u
    fn rec(p: &PathProblem, preds: &[Vec<(usize, f64)>], v: usize, used: &mut Vec<bool>, has_succ: &mut Vec<bool>, cost: f64, best: &mut f64) {
        let n = p.node_cost.len();
        if v == n {
            let exits = (0..n).filter(|&i| used[i] && !has_succ[i]).count() as f64;
            *best = best.min(cost + exits * p.exit_cost);
            return;
        }
        rec(p, preds, v + 1, used, has_succ, cost, best);
        used[v] = true;
        rec(p, preds, v + 1, used, has_succ, cost + p.entry_cost + p.node_cost[v], best);
        for &(u, c) in &preds[v] {
            if used[u] && !has_succ[u] {
                has_succ[u] = true;
                rec(p, preds, v + 1, used, has_succ, cost + c + p.node_cost[v], best);
                has_succ[u] = false;
            }
        }
        used[v] = false;
    }
    let mut best = 0.0;
    rec(p, &preds, 0, &mut vec![false; n], &mut vec![false; n], 0.0, &mut best);
    best
}

/// Defaults for the planted search: the gate of 0.3 is just above the
/// 0.28 overlap between consecutive boxes, so only runs that draw a lower
/// gate can link anything.
pub fn planted_defaults() -> TrackerParams {
    TrackerParams {
        entry_exit_cost: 2.0,
        max_gap: 1,
        gate_iou: 0.3,
        confidence_floor: 0.1,
        nms_overlap: 0.5,
    }
}

/// Three lanes of boxes 40 px wide moving 22.5 px per frame, which makes
/// consecutive boxes overlap by exactly 17.5 / 62.5 = 0.28.
pub fn planted_training_set(frames: u32) -> TrainingSet {
    let mut gt = Vec::new();
    let mut det = Vec::new();
    for lane in 0..3i64 {
        for f in 1..=frames {
            let b = BBox::new(10.0 + 22.5 * f64::from(f - 1), 20.0 + 150.0 * lane as f64, 40.0, 100.0);
            gt.push(MotEntry::new(f, lane + 1, b));
            det.push(MotEntry::new(f, -1, b).with_conf(0.95));
        }
    }
    let mut detections = ResultBundle::new();
    detections.insert("Planted", det).unwrap();
    let mut ground_truth = GroundTruthSet::new();
    ground_truth.insert("Planted".into(), GroundTruthSequence { entries: gt, meta: None });
    TrainingSet { detections, ground_truth, homographies: BTreeMap::new() }
}

/// Straight walk along x at `speed` m/s with world coordinates filled in.
pub fn walker(speed: f64, fps: f64, frames: u32) -> Trajectory {
    let entries = (1..=frames)
        .map(|f| {
            let x = speed * f64::from(f - 1) / fps;
            MotEntry::new(f, 1, BBox::new(100.0 + 50.0 * x, 200.0, 30.0, 80.0)).with_world(WorldPoint::new(x, 2.0, 0.0))
        })
        .collect();
    Trajectory::new(1, entries).unwrap()
}

/// Pinhole camera `height` meters above a flat ground with focal length
/// `f` px, principal column `cx` and horizon row `v0`. A foot point at row
/// `v` maps to depth `f * height / (v - v0)`.
pub fn ground_plane_camera(f: f64, cx: f64, v0: f64, height: f64) -> Homography {
    Homography::from_row_slice(&[height, 0.0, -cx * height, 0.0, 0.0, f * height, 0.0, 1.0, -v0]).unwrap()
}

/// Person standing around `camera_row` with vertical foot jitter.
pub fn far_field_walker(camera_row: f64, jitter: f64, rng: &mut ChaCha8Rng) -> Trajectory {
    let entries = (1..=50)
        .map(|f| {
            let foot = camera_row + rng.gen_range(-jitter..jitter);
            MotEntry::new(f, 7, BBox::new(400.0 + 0.2 * f64::from(f), foot - 12.0, 5.0, 12.0))
        })
        .collect();
    Trajectory::new(7, entries).unwrap()
}

fn base_report() -> MetricsReport {
    let counts = SequenceCounts { frames: 10, gt_boxes: 100, gt_tracks: 4, matches: 80, ..Default::default() };
    MetricsReport::from_counts(counts, DistanceMode::iou_2d()).unwrap()
}

/// Report with the default ranking set filled from `v`, in set order.
pub fn ranked_report(tracker: &str, v: [f64; 10]) -> NamedReport {
    let mut r = base_report();
    r.mota = v[0];
    r.motp = Some(v[1]);
    r.far = v[2];
    r.mt_pct = v[3];
    r.ml_pct = v[4];
    r.fp = v[5] as u64;
    r.fn_ = v[6] as u64;
    r.idsw = v[7] as u64;
    r.rel_id = Some(v[8]);
    r.fm = v[9] as u64;
    NamedReport::new(tracker, r)
}

/// Hand-ranked on the default set: A and B average 1.9, C 2.2.
pub fn ranking_trio() -> Vec<NamedReport> {
    vec![
        ranked_report("A", [30.0, 70.0, 1.0, 10.0, 40.0, 100.0, 1000.0, 50.0, 5.0, 60.0]),
        ranked_report("B", [20.0, 75.0, 2.0, 10.0, 30.0, 200.0, 1100.0, 40.0, 3.0, 70.0]),
        ranked_report("C", [20.0, 60.0, 0.5, 10.0, 50.0, 50.0, 1200.0, 40.0, 4.0, 80.0]),
    ]
}
