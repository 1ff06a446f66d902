use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use motkit::tracker::nms;
use motkit::{track, TrackerParams};
use motkit_bench::detections;

fn tracker(c: &mut Criterion) {
    let params = TrackerParams::default();
    let mut group = c.benchmark_group("track");
    group.sample_size(20);
    for targets in [5, 20, 50] {
        let dets = detections(200, targets);
        group.bench_with_input(BenchmarkId::from_parameter(targets), &dets, |b, d| b.iter(|| track(d, &params).unwrap()));
    }
    group.finish();

    let frame: Vec<_> = detections(1, 50);
    c.bench_function("nms/50", |b| b.iter(|| nms(&frame, params.nms_overlap)));
}

criterion_group!(benches, tracker);
criterion_main!(benches);
