mod common;

use common::{ranked_report, ranking_trio};
use motkit::ranking::{average_rank, fractional_ranks, Direction, Metric};
use motkit::report::NamedReport;
use motkit::Error;
use proptest::prelude::*;

#[test]
fn hand_ranked_trio() {
    let table = average_rank(&ranking_trio(), &Metric::DEFAULT_SET).unwrap();
    let got: Vec<(&str, f64)> = table.rows.iter().map(|r| (r.tracker.as_str(), r.avg_rank)).collect();
    // A: 1 2 2 2 2 2 1 3 3 1, B: 2.5 1 3 2 1 3 2 1.5 1 2, C: 2.5 3 1 2 3 1 3 1.5 2 3
    assert_eq!(got.len(), 3);
    assert_eq!(got[0].0, "A");
    assert_eq!(got[1].0, "B");
    assert_eq!(got[2].0, "C");
    assert!((got[0].1 - 1.9).abs() < 1e-12 && (got[1].1 - 1.9).abs() < 1e-12 && (got[2].1 - 2.2).abs() < 1e-12);
    assert_eq!(table.rows[1].ranks, vec![2.5, 1.0, 3.0, 2.0, 1.0, 3.0, 2.0, 1.5, 1.0, 2.0]);
}

#[test]
fn rank_sums_are_triangular() {
    let table = average_rank(&ranking_trio(), &Metric::DEFAULT_SET).unwrap();
    for m in 0..table.metrics.len() {
        let sum: f64 = table.rows.iter().map(|r| r.ranks[m]).sum();
        assert_eq!(sum, 6.0);
    }
}

#[test]
fn identical_reports_tie_everywhere() {
    let v = [25.0, 70.0, 1.0, 10.0, 40.0, 100.0, 1000.0, 50.0, 5.0, 60.0];
    let reports: Vec<NamedReport> = ["x", "y", "z", "w"].iter().map(|n| ranked_report(n, v)).collect();
    let table = average_rank(&reports, &Metric::DEFAULT_SET).unwrap();
    assert!(table.rows.iter().all(|r| r.avg_rank == 2.5));
    // stable order on ties
    assert_eq!(table.rows.iter().map(|r| r.tracker.as_str()).collect::<Vec<_>>(), ["x", "y", "z", "w"]);
}

#[test]
fn undefined_metric_is_an_error() {
    let mut reports = ranking_trio();
    reports[1].report.motp = None;
    match average_rank(&reports, &Metric::DEFAULT_SET) {
        Err(Error::MissingMetric { tracker, metric }) => assert_eq!((tracker.as_str(), metric.as_str()), ("B", "motp")),
        other => panic!("{other:?}"),
    }
    assert!(matches!(average_rank(&reports[..1], &Metric::DEFAULT_SET), Err(Error::TooFewReports(1))));
}

proptest! {
    #[test]
    fn ranks_sum_to_triangular_number(values in prop::collection::vec(0u8..6, 1..12)) {
        let v: Vec<f64> = values.iter().map(|&x| f64::from(x)).collect();
        let n = v.len() as f64;
        for dir in [Direction::HigherBetter, Direction::LowerBetter] {
            let r = fractional_ranks(&v, dir);
            prop_assert_eq!(r.iter().sum::<f64>(), n * (n + 1.0) / 2.0);
        }
    }

    #[test]
    fn monotone_rescaling_keeps_ranks(values in prop::collection::vec(-50.0..50.0f64, 1..12), a in 0.1..10.0f64, b in -100.0..100.0f64) {
        let scaled: Vec<f64> = values.iter().map(|x| a * x + b).collect();
        // a positive affine map can merge nearly equal values by rounding;
        // only compare when ties are preserved
        let ties = |v: &[f64]| -> usize { v.iter().enumerate().map(|(i, x)| v[..i].iter().filter(|y| *y == x).count()).sum() };
        prop_assume!(ties(&values) == ties(&scaled));
        for dir in [Direction::HigherBetter, Direction::LowerBetter] {
            prop_assert_eq!(fractional_ranks(&values, dir), fractional_ranks(&scaled, dir));
        }
    }
}
