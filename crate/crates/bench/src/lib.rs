//! Workloads shared by the benchmarks, built from the synthetic generator
//! so runs are reproducible.

use motkit::io::{MotEntry, Trajectory};
use motkit::synth::{generate, SynthConfig, SynthSequence};

pub fn scene(frames: u32, targets: usize, seed: u64) -> SynthSequence {
    generate(&SynthConfig {
        frames,
        targets,
        jitter: 2.0,
        miss_rate: 0.1,
        false_positives: 1.0,
        seed,
        ..SynthConfig::default()
    })
    .expect("benchmark configs are valid")
}

/// Ground truth and a noisy hypothesis set for the same sequence. The
/// hypotheses are detections given track ids by the reference tracker.
pub fn matching_workload(frames: u32, targets: usize) -> (Vec<Trajectory>, Vec<Trajectory>) {
    let s = scene(frames, targets, 1);
    let gt = Trajectory::ground_truth(&s.ground_truth).expect("generated ground truth is valid");
    let out = motkit::track(&s.detections, &motkit::TrackerParams::default()).expect("default params are valid");
    (gt, out.trajectories)
}

pub fn detections(frames: u32, targets: usize) -> Vec<MotEntry> {
    scene(frames, targets, 2).detections
}
