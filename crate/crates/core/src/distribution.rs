//! Boxplot summaries of per-journal rate distributions.
//!
//! Quartiles interpolate linearly between closest ranks (position `p * (n - 1)` in
//! the sorted sample). Whiskers reach the most extreme observations inside the
//! Tukey fences `q1 - 1.5 iqr` and `q3 + 1.5 iqr`; everything beyond is an outlier.
//! Skewness is the moment coefficient `m3 / m2^(3/2)`, zero for constant samples.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::journal_members::{all_journal_member_rates, JournalMemberRecord};
use crate::panel::{Interval, Panel, PanelError};
use crate::rates::{symmetric_rate, RateRecord};

pub const QUARTILE_METHOD: &str = "linear interpolation between closest ranks";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistributionError {
    #[error("cannot summarize an empty sample")]
    Empty,
    #[error("sample contains a non-finite value")]
    NonFinite,
    #[error("unknown metric '{0}'")]
    UnknownMetric(String),
    #[error("a rate distribution needs at least two observation years")]
    TooFewYears,
    #[error(transparent)]
    Panel(#[from] PanelError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotSummary {
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub iqr: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    /// Values outside the fences, ascending.
    pub outliers: Vec<f64>,
    pub skewness: f64,
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub fn summarize(values: &[f64]) -> Result<BoxplotSummary, DistributionError> {
    if values.is_empty() {
        return Err(DistributionError::Empty);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(DistributionError::NonFinite);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);

    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let inside = |v: &&f64| **v >= lo_fence && **v <= hi_fence;
    // the median always lies inside the fences, so both searches succeed
    let whisker_low = *sorted.iter().find(inside).expect("median is inside the fences");
    let whisker_high = *sorted
        .iter()
        .rev()
        .find(inside)
        .expect("median is inside the fences");
    let outliers = sorted.iter().copied().filter(|v| !inside(&v)).collect();

    // sorted order makes the sums independent of input order
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    let m2 = sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m3 = sorted.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
    // a constant sample has zero variance even when the mean is inexact
    let constant = sorted[0] == sorted[sorted.len() - 1];
    let skewness = if constant || m2 <= 0.0 {
        0.0
    } else {
        m3 / m2.powf(1.5)
    };

    Ok(BoxplotSummary {
        n: sorted.len(),
        min: sorted[0],
        q1,
        median,
        q3,
        max: sorted[sorted.len() - 1],
        iqr,
        whisker_low,
        whisker_high,
        outliers,
        skewness,
    })
}

/// Per-journal rates that can be summarized across journals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    BoardGrowth,
    MemberGrowth,
    MemberTurnover,
    MemberRetention,
    MemberEntry,
    SystemEntry,
    MemberExit,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::BoardGrowth,
        Metric::MemberGrowth,
        Metric::MemberTurnover,
        Metric::MemberRetention,
        Metric::MemberEntry,
        Metric::SystemEntry,
        Metric::MemberExit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::BoardGrowth => "board_growth",
            Metric::MemberGrowth => "member_growth",
            Metric::MemberTurnover => "member_turnover",
            Metric::MemberRetention => "member_retention",
            Metric::MemberEntry => "member_entry",
            Metric::SystemEntry => "system_entry",
            Metric::MemberExit => "member_exit",
        }
    }

    /// The metric's value for one journal record.
    pub fn value(self, record: &JournalMemberRecord, scale: Scale) -> f64 {
        let rates = &record.rates;
        let rate = match self {
            Metric::BoardGrowth => {
                let raw = symmetric_rate(record.counts.prev, record.counts.cur)
                    .expect("journal is active at one endpoint");
                return scale.pick_raw(raw);
            }
            Metric::MemberGrowth => &rates.growth,
            Metric::MemberTurnover => &rates.turnover,
            Metric::MemberRetention => &rates.retention,
            Metric::MemberEntry => &rates.entry,
            Metric::SystemEntry => &rates.system_entry,
            Metric::MemberExit => &rates.exit,
        };
        scale.pick(rate)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = DistributionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| DistributionError::UnknownMetric(s.to_owned()))
    }
}

/// Which form of a rate is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Normalized,
    Raw,
}

impl Scale {
    pub fn pick(self, rate: &RateRecord) -> f64 {
        match self {
            Scale::Normalized => rate.normalized,
            Scale::Raw => rate.raw,
        }
    }

    fn pick_raw(self, raw: f64) -> f64 {
        match self {
            Scale::Normalized => raw / 2.0,
            Scale::Raw => raw,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scale::Normalized => "normalized",
            Scale::Raw => "raw",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSummary {
    pub interval: Interval,
    pub metric: Metric,
    pub summary: BoxplotSummary,
}

/// Summarizes `metric` over precomputed journal records of one interval.
pub fn summarize_records(
    records: &[JournalMemberRecord],
    metric: Metric,
    scale: Scale,
) -> Result<BoxplotSummary, DistributionError> {
    let values: Vec<f64> = records.iter().map(|r| metric.value(r, scale)).collect();
    summarize(&values)
}

/// One summary per adjacent interval of `metric` across all journals active at
/// either endpoint.
pub fn rate_distribution_series(
    panel: &Panel,
    metric: Metric,
    scale: Scale,
    exec: Execution,
) -> Result<Vec<IntervalSummary>, DistributionError> {
    if panel.years().len() < 2 {
        return Err(DistributionError::TooFewYears);
    }
    let intervals = panel.adjacent_intervals();
    exec.try_map(&intervals, |interval| {
        let records = all_journal_member_rates(panel, interval, Execution::Sequential)?;
        Ok(IntervalSummary {
            interval: *interval,
            metric,
            summary: summarize_records(&records, metric, scale)?,
        })
    })
}
