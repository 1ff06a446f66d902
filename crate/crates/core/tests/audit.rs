mod common;

use common::{far_field_walker, ground_plane_camera, walker};
use motkit::audit::{flag_outliers, profile, speeds, DEFAULT_BIN_WIDTH, DEFAULT_OUTLIER_SPEED};
use motkit::{MotEntry, Trajectory};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn steady_walker() {
    let t = walker(1.4, 25.0, 200);
    let s = speeds(&t, 25.0, None).unwrap();
    assert_eq!(s.samples.len(), 199);
    assert!((s.mean().unwrap() - 1.4).abs() < 1e-6);
    let p = profile(&[t], 25.0, None, DEFAULT_BIN_WIDTH).unwrap();
    assert!(flag_outliers(&p, DEFAULT_OUTLIER_SPEED).is_empty());
    // every sample lands in [1.25, 1.5)
    assert_eq!(p.histogram.counts[5], 199);
}

#[test]
fn gaps_divide_by_the_elapsed_frames() {
    let full = walker(1.4, 25.0, 40);
    let sparse: Vec<MotEntry> = full.entries().iter().copied().filter(|e| e.frame % 3 != 0).collect();
    let s = speeds(&Trajectory::new(1, sparse).unwrap(), 25.0, None).unwrap();
    assert!(s.samples.iter().all(|x| (x.speed - 1.4).abs() < 1e-9));
}

#[test]
fn projection_jitter_far_away_is_flagged() {
    let h = ground_plane_camera(1000.0, 480.0, 200.0, 1.5);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let t = far_field_walker(215.0, 1.0, &mut rng);
    let p = profile(&[t], 25.0, Some(&h), DEFAULT_BIN_WIDTH).unwrap();
    let flagged = flag_outliers(&p, DEFAULT_OUTLIER_SPEED);
    assert!(!flagged.is_empty());
    assert!(flagged.iter().all(|s| s.speed > DEFAULT_OUTLIER_SPEED));

    // the same jitter close to the camera stays plausible
    let near = far_field_walker(900.0, 1.0, &mut rng);
    let p = profile(&[near], 25.0, Some(&h), DEFAULT_BIN_WIDTH).unwrap();
    assert!(flag_outliers(&p, DEFAULT_OUTLIER_SPEED).is_empty(), "{:?}", p.samples().map(|s| s.speed).fold(0.0, f64::max));
}
