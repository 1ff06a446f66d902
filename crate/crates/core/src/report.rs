//! Emitters for [`MetricsReport`]: an aligned text table in the usual
//! leaderboard column order, a JSON document per tracker and a per-sequence
//! CSV breakdown.
//!
//! Values are rounded only here. Undefined measures print as `n/a`.

use serde::{Deserialize, Serialize};

use crate::metrics::MetricsReport;
use crate::{Error, Result};

/// A report together with the tracker it belongs to; the unit stored in
/// report files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedReport {
    pub tracker: String,
    #[serde(flatten)]
    pub report: MetricsReport,
}

impl NamedReport {
    pub fn new(tracker: impl Into<String>, report: MetricsReport) -> Self {
        NamedReport {
            tracker: tracker.into(),
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("report document: {e}")))
    }
}

fn one_decimal(v: f64) -> String {
    format!("{v:.1}")
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), one_decimal)
}

/// One table row; `avg_rank` is filled in by leaderboards.
#[derive(Debug, Clone, Copy)]
pub struct TableRow<'a> {
    pub tracker: &'a str,
    pub avg_rank: Option<f64>,
    pub report: &'a MetricsReport,
}

const HEADER: [&str; 14] = [
    "Method", "AvgRank", "MOTA", "MOTP", "FAR", "MT(%)", "ML(%)", "FP", "FN", "IDsw", "rel.ID", "FM",
    "rel.FM", "Hz",
];

fn cells(row: &TableRow) -> Vec<String> {
    let r = row.report;
    vec![
        row.tracker.to_string(),
        opt(row.avg_rank),
        format!("{} ±{}", one_decimal(r.mota), one_decimal(r.mota_stddev)),
        opt(r.motp),
        one_decimal(r.far),
        one_decimal(r.mt_pct),
        one_decimal(r.ml_pct),
        r.fp.to_string(),
        r.fn_.to_string(),
        r.idsw.to_string(),
        opt(r.rel_id),
        r.fm.to_string(),
        opt(r.rel_fm),
        opt(r.runtime_hz),
    ]
}

/// Renders rows as a space-aligned table: the method column left-aligned,
/// everything else right-aligned. The AvgRank column is dropped when no row
/// has a rank.
pub fn text_table(rows: &[TableRow]) -> String {
    let with_rank = rows.iter().any(|r| r.avg_rank.is_some());
    let keep = |i: usize| with_rank || i != 1;

    let mut grid: Vec<Vec<String>> = vec![HEADER.iter().map(|s| s.to_string()).collect()];
    grid.extend(rows.iter().map(cells));
    let ncol = HEADER.len();
    let widths: Vec<usize> = (0..ncol)
        .map(|c| grid.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
        .collect();

    let mut out = String::new();
    for row in &grid {
        let mut line = String::new();
        for c in (0..ncol).filter(|&c| keep(c)) {
            if !line.is_empty() {
                line.push_str("  ");
            }
            let pad = widths[c] - row[c].chars().count();
            if c == 0 {
                line.push_str(&row[c]);
                line.push_str(&" ".repeat(pad));
            } else {
                line.push_str(&" ".repeat(pad));
                line.push_str(&row[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Table of a single tracker's benchmark total.
pub fn summary_table(tracker: &str, report: &MetricsReport) -> String {
    text_table(&[TableRow {
        tracker,
        avg_rank: None,
        report,
    }])
}

fn csv_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| x.to_string())
}

/// One line per sequence plus a final `TOTAL` line, at full precision.
pub fn sequence_csv(report: &MetricsReport) -> String {
    let mut out = String::from(
        "sequence,frames,gt_boxes,gt_tracks,matches,fp,fn,idsw,fm,mt,pt,ml,mota,motp,far,mt_pct,ml_pct,rel_id,rel_fm,recall,precision\n",
    );
    let total = std::iter::once(("TOTAL", report));
    for (name, r) in report
        .sequences
        .iter()
        .map(|s| (s.name.as_str(), &s.report))
        .chain(total)
    {
        let c = &r.counts;
        let fields = [
            name.to_string(),
            c.frames.to_string(),
            c.gt_boxes.to_string(),
            c.gt_tracks.to_string(),
            c.matches.to_string(),
            c.fp.to_string(),
            c.fn_.to_string(),
            c.idsw.to_string(),
            c.fm.to_string(),
            c.mt.to_string(),
            c.pt.to_string(),
            c.ml.to_string(),
            r.mota.to_string(),
            csv_opt(r.motp),
            r.far.to_string(),
            r.mt_pct.to_string(),
            r.ml_pct.to_string(),
            csv_opt(r.rel_id),
            csv_opt(r.rel_fm),
            r.recall.to_string(),
            csv_opt(r.precision),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
