use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use motkit::matching::{match_sequence, DistanceMode};
use motkit_bench::matching_workload;

fn matching(c: &mut Criterion) {
    let mut group = c.benchmark_group("match_sequence");
    for targets in [5, 20, 50] {
        let (gt, hyp) = matching_workload(200, targets);
        for mode in [DistanceMode::iou_2d(), DistanceMode::euclid_3d()] {
            let id = BenchmarkId::new(mode.name(), targets);
            if mode.is_3d() {
                // hypotheses carry no world points; score ground truth against itself
                group.bench_with_input(id, &gt, |b, gt| b.iter(|| match_sequence(gt, gt, mode).unwrap()));
            } else {
                group.bench_with_input(id, &(&gt, &hyp), |b, (gt, hyp)| b.iter(|| match_sequence(gt, hyp, mode).unwrap()));
            }
        }
    }
    group.finish();
}

criterion_group!(benches, matching);
criterion_main!(benches);
