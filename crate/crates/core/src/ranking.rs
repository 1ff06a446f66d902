//! Average-rank leaderboards.
//!
//! Trackers are ranked separately on each metric, ties sharing the mean of
//! the positions they occupy, and the leaderboard is ordered by the mean of
//! those ranks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::metrics::MetricsReport;
use crate::report::{text_table, NamedReport, TableRow};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    HigherBetter,
    LowerBetter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Mota,
    Motp,
    Far,
    MtPct,
    MlPct,
    Fp,
    Fn,
    Idsw,
    RelId,
    Fm,
    RelFm,
    Recall,
    Precision,
}

impl Metric {
    pub const ALL: [Metric; 13] = [
        Metric::Mota,
        Metric::Motp,
        Metric::Far,
        Metric::MtPct,
        Metric::MlPct,
        Metric::Fp,
        Metric::Fn,
        Metric::Idsw,
        Metric::RelId,
        Metric::Fm,
        Metric::RelFm,
        Metric::Recall,
        Metric::Precision,
    ];

    /// The ten measures ranked by default.
    pub const DEFAULT_SET: [Metric; 10] = [
        Metric::Mota,
        Metric::Motp,
        Metric::Far,
        Metric::MtPct,
        Metric::MlPct,
        Metric::Fp,
        Metric::Fn,
        Metric::Idsw,
        Metric::RelId,
        Metric::Fm,
    ];

    pub fn direction(self) -> Direction {
        match self {
            Metric::Mota | Metric::Motp | Metric::MtPct | Metric::Recall | Metric::Precision => {
                Direction::HigherBetter
            }
            _ => Direction::LowerBetter,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Mota => "mota",
            Metric::Motp => "motp",
            Metric::Far => "far",
            Metric::MtPct => "mt_pct",
            Metric::MlPct => "ml_pct",
            Metric::Fp => "fp",
            Metric::Fn => "fn",
            Metric::Idsw => "idsw",
            Metric::RelId => "rel_id",
            Metric::Fm => "fm",
            Metric::RelFm => "rel_fm",
            Metric::Recall => "recall",
            Metric::Precision => "precision",
        }
    }

    /// The metric's value in `report`, `None` where it is undefined.
    pub fn value(self, r: &MetricsReport) -> Option<f64> {
        match self {
            Metric::Mota => Some(r.mota),
            Metric::Motp => r.motp,
            Metric::Far => Some(r.far),
            Metric::MtPct => Some(r.mt_pct),
            Metric::MlPct => Some(r.ml_pct),
            Metric::Fp => Some(r.fp as f64),
            Metric::Fn => Some(r.fn_ as f64),
            Metric::Idsw => Some(r.idsw as f64),
            Metric::RelId => r.rel_id,
            Metric::Fm => Some(r.fm as f64),
            Metric::RelFm => r.rel_fm,
            Metric::Recall => Some(r.recall),
            Metric::Precision => r.precision,
        }
    }

    /// Parses a comma-separated list such as `mota,motp,idsw`.
    pub fn parse_list(text: &str) -> Result<Vec<Metric>> {
        let list: Vec<Metric> = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        if list.is_empty() {
            return Err(Error::InvalidParameter("empty metric list".into()));
        }
        Ok(list)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['.', '-'], "_");
        let key = match key.as_str() {
            "mt" | "mt%" => "mt_pct",
            "ml" | "ml%" => "ml_pct",
            "faf" => "far",
            other => other,
        };
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown metric {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub tracker: String,
    pub avg_rank: f64,
    /// Rank per metric, in the order of [`RankTable::metrics`].
    pub ranks: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub metrics: Vec<Metric>,
    /// Sorted by ascending average rank; equal averages keep input order.
    pub rows: Vec<RankRow>,
}

/// Fractional ranks of `values` (1 = best); tied values share the mean of
/// their positions.
pub fn fractional_ranks(values: &[f64], direction: Direction) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    let better = |a: f64, b: f64| match direction {
        Direction::HigherBetter => b.total_cmp(&a),
        Direction::LowerBetter => a.total_cmp(&b),
    };
    order.sort_by(|&i, &j| better(values[i], values[j]));

    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let mean = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mean;
        }
        start = end;
    }
    ranks
}

/// Ranks `reports` on every metric of `metrics` and averages.
pub fn average_rank(reports: &[NamedReport], metrics: &[Metric]) -> Result<RankTable> {
    if reports.len() < 2 {
        return Err(Error::TooFewReports(reports.len()));
    }
    if metrics.is_empty() {
        return Err(Error::InvalidParameter("empty metric set".into()));
    }

    let mut per_tracker = vec![Vec::with_capacity(metrics.len()); reports.len()];
    for &m in metrics {
        let values: Vec<f64> = reports
            .iter()
            .map(|r| {
                m.value(&r.report).ok_or_else(|| Error::MissingMetric {
                    tracker: r.tracker.clone(),
                    metric: m.name().to_string(),
                })
            })
            .collect::<Result<_>>()?;
        for (i, rank) in fractional_ranks(&values, m.direction()).into_iter().enumerate() {
            per_tracker[i].push(rank);
        }
    }

    let mut rows: Vec<RankRow> = reports
        .iter()
        .zip(per_tracker)
        .map(|(r, ranks)| RankRow {
            tracker: r.tracker.clone(),
            avg_rank: ranks.iter().sum::<f64>() / ranks.len() as f64,
            ranks,
        })
        .collect();
    rows.sort_by(|a, b| a.avg_rank.total_cmp(&b.avg_rank));
    Ok(RankTable {
        metrics: metrics.to_vec(),
        rows,
    })
}

impl RankTable {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("rank tables always serialize");
        s.push('\n');
        s
    }

    /// Text leaderboard: the usual report columns with the average rank
    /// filled in, followed by the per-metric ranks.
    pub fn to_text(&self, reports: &[NamedReport]) -> String {
        let rows: Vec<TableRow> = self
            .rows
            .iter()
            .filter_map(|row| {
                reports.iter().find(|r| r.tracker == row.tracker).map(|r| TableRow {
                    tracker: &r.tracker,
                    avg_rank: Some(row.avg_rank),
                    report: &r.report,
                })
            })
            .collect();
        let mut out = text_table(&rows);

        out.push('\n');
        let name_w = self.rows.iter().map(|r| r.tracker.chars().count()).max().unwrap_or(0).max(6);
        let col_w: Vec<usize> = self.metrics.iter().map(|m| m.name().len().max(4)).collect();
        let mut header = format!("{:<name_w$}", "Method");
        for (m, w) in self.metrics.iter().zip(&col_w) {
            header.push_str(&format!("  {:>w$}", m.name()));
        }
        out.push_str(header.trim_end());
        out.push('\n');
        for row in &self.rows {
            let mut line = format!("{:<name_w$}", row.tracker);
            for (r, w) in row.ranks.iter().zip(&col_w) {
                line.push_str(&format!("  {:>w$}", format!("{r:.1}")));
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}
