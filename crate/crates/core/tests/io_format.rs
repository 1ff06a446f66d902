use std::fs;

use motkit::io::{
    load_result_bundle, parse_mot_file, write_mot_file, EntryRole, FormatErrorKind, MotEntry, SeqMap,
};
use motkit::{BBox, Error, Trajectory, WorldPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ANNOTATIONS: &str = "1, 1, 794.2, 47.5, 71.2, 174.8, 1, -1, -1, -1
1, 2, 164.1, 19.6, 66.5, 163.2, 1, -1, -1, -1
1, 3, 875.4, 39.9, 25.3,  35.0, 0, -1, -1, -1
2, 1, 781.7, 25.1, 69.2, 170.2, 1, -1, -1, -1
";

#[test]
fn annotation_block_flags_the_small_pedestrian() {
    let entries = parse_mot_file(ANNOTATIONS, EntryRole::GroundTruth).unwrap();
    assert_eq!(entries.len(), 4);
    let small = entries[2];
    assert_eq!((small.frame, small.id, small.bb_height, small.conf), (1, 3, 35.0, 0.0));
    assert!(!small.is_active());
    assert_eq!(small.world(), None);

    let tracks = Trajectory::ground_truth(&entries).unwrap();
    assert_eq!(tracks.iter().map(|t| (t.id(), t.len())).collect::<Vec<_>>(), vec![(1, 2), (2, 1)]);

    let again = parse_mot_file(&write_mot_file(&entries), EntryRole::GroundTruth).unwrap();
    assert_eq!(entries, again);
}

fn random_entry(rng: &mut ChaCha8Rng) -> MotEntry {
    let bbox = BBox::new(
        rng.gen_range(-50.0..2000.0),
        rng.gen_range(-50.0..1200.0),
        rng.gen_range(0.5..400.0),
        rng.gen_range(0.5..600.0),
    );
    let e = MotEntry::new(rng.gen_range(1..100_000), rng.gen_range(0..10_000), bbox).with_conf(rng.gen());
    if rng.gen_bool(0.5) {
        e.with_world(WorldPoint::new(rng.gen_range(-1e4..1e4), rng.gen_range(-1e4..1e4), rng.gen::<f64>() * 1e-3))
    } else {
        e
    }
}

#[test]
fn random_entries_round_trip_bit_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let entries: Vec<MotEntry> = (0..10_000).map(|_| random_entry(&mut rng)).collect();
    let text = write_mot_file(&entries);
    let back = parse_mot_file(&text, EntryRole::Detection).unwrap();
    assert_eq!(back.len(), entries.len());
    for (a, b) in entries.iter().zip(&back) {
        assert_eq!(a, b);
        assert_eq!(a.bb_left.to_bits(), b.bb_left.to_bits());
        assert_eq!(a.conf.to_bits(), b.conf.to_bits());
    }
    assert_eq!(write_mot_file(&back), text);
}

#[test]
fn short_line_reports_its_number() {
    let text = "1,1,10,10,20,20,1,-1,-1,-1\n1,2,10,10,20,20,1,-1,-1\n";
    let err = parse_mot_file(text, EntryRole::Result).unwrap_err();
    assert_eq!(err.line, 2);
    assert_eq!(err.kind, FormatErrorKind::FieldCount { found: 9 });
}

#[test]
fn every_sequence_file_in_a_directory_is_loaded() {
    let dir = tempfile::tempdir().unwrap();
    let names: Vec<String> = (1..=11).map(|i| format!("Seq-{i:02}")).collect();
    for (i, n) in names.iter().enumerate() {
        let line = format!("1,{},10,10,20,20,1,-1,-1,-1\n", i + 1);
        fs::write(dir.path().join(format!("{n}.txt")), line).unwrap();
    }
    fs::write(dir.path().join("notes.md"), "not a sequence").unwrap();

    let bundle = load_result_bundle(dir.path(), None).unwrap();
    assert_eq!(bundle.names().collect::<Vec<_>>(), names.iter().map(String::as_str).collect::<Vec<_>>());

    let map = SeqMap::new(names.iter().chain(std::iter::once(&"Seq-12".to_string()))).unwrap();
    match load_result_bundle(dir.path(), Some(&map)) {
        Err(Error::MissingSequence(n)) => assert_eq!(n, "Seq-12"),
        other => panic!("expected a missing sequence, got {other:?}"),
    }
}
