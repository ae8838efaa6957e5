//! Score bands, per-year cohort summaries and multi-year trends.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scoring::QualityScore;

/// Score band. Ordered `BelowAverage < Average < AboveAverage`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QsCategory {
    BelowAverage,
    Average,
    AboveAverage,
}

impl QsCategory {
    /// Display order: best band first.
    pub const ALL: [QsCategory; 3] = [Self::AboveAverage, Self::Average, Self::BelowAverage];

    pub fn label(self) -> &'static str {
        match self {
            Self::AboveAverage => "Above Average",
            Self::Average => "Average",
            Self::BelowAverage => "Below Average",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Self::AboveAverage => "above_average",
            Self::Average => "average",
            Self::BelowAverage => "below_average",
        }
    }

    fn index(self) -> usize {
        match self {
            Self::AboveAverage => 0,
            Self::Average => 1,
            Self::BelowAverage => 2,
        }
    }
}

impl fmt::Display for QsCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Absolute band thresholds. Both thresholds belong to the `Average` band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandConfig {
    pub lower_threshold: f64,
    pub upper_threshold: f64,
}

impl Default for BandConfig {
    fn default() -> Self {
        Self {
            lower_threshold: 4.0,
            upper_threshold: 7.0,
        }
    }
}

impl BandConfig {
    pub fn new(lower_threshold: f64, upper_threshold: f64) -> Result<Self> {
        if !(0.0 <= lower_threshold && lower_threshold < upper_threshold && upper_threshold <= 10.0) {
            return Err(Error::InvalidBands {
                lower: lower_threshold,
                upper: upper_threshold,
            });
        }
        Ok(Self {
            lower_threshold,
            upper_threshold,
        })
    }
}

pub fn qs_category(qs: f64, bands: &BandConfig) -> QsCategory {
    if qs < bands.lower_threshold {
        QsCategory::BelowAverage
    } else if qs <= bands.upper_threshold {
        QsCategory::Average
    } else {
        QsCategory::AboveAverage
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryStats {
    pub count: usize,
    pub share: f64,
    pub mean_qs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortSummary {
    pub cohort_year: i32,
    pub above_average: CategoryStats,
    pub average: CategoryStats,
    pub below_average: CategoryStats,
    pub overall_mean_qs: f64,
    pub total_students: usize,
}

impl CohortSummary {
    pub fn category(&self, cat: QsCategory) -> &CategoryStats {
        match cat {
            QsCategory::AboveAverage => &self.above_average,
            QsCategory::Average => &self.average,
            QsCategory::BelowAverage => &self.below_average,
        }
    }
}

/// Bands every score and aggregates counts, shares and means for one cohort year.
pub fn summarize_cohort(scores: &[QualityScore], bands: &BandConfig) -> Result<CohortSummary> {
    let first = scores.first().ok_or(Error::EmptyCohort)?;
    let year = first.cohort_year;
    let mut counts = [0usize; 3];
    let mut sums = [0.0f64; 3];
    for s in scores {
        if s.cohort_year != year {
            return Err(Error::MixedCohort(year, s.cohort_year));
        }
        let i = qs_category(s.qs_total, bands).index();
        counts[i] += 1;
        sums[i] += s.qs_total;
    }
    let total = scores.len();
    let stats = |cat: QsCategory| {
        let i = cat.index();
        CategoryStats {
            count: counts[i],
            share: counts[i] as f64 / total as f64,
            mean_qs: (counts[i] > 0).then(|| sums[i] / counts[i] as f64),
        }
    };
    Ok(CohortSummary {
        cohort_year: year,
        above_average: stats(QsCategory::AboveAverage),
        average: stats(QsCategory::Average),
        below_average: stats(QsCategory::BelowAverage),
        overall_mean_qs: sums.iter().sum::<f64>() / total as f64,
        total_students: total,
    })
}

/// Per-year summaries in ascending year order, with per-band mean series for charting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendSeries {
    pub summaries: Vec<CohortSummary>,
}

impl TrendSeries {
    pub fn years(&self) -> Vec<i32> {
        self.summaries.iter().map(|s| s.cohort_year).collect()
    }

    /// Mean QS of one band per year; `None` marks a year with no students in the band.
    pub fn category_means(&self, cat: QsCategory) -> Vec<Option<f64>> {
        self.summaries.iter().map(|s| s.category(cat).mean_qs).collect()
    }

    pub fn overall_means(&self) -> Vec<f64> {
        self.summaries.iter().map(|s| s.overall_mean_qs).collect()
    }

    pub fn len(&self) -> usize {
        self.summaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summaries.is_empty()
    }
}

pub fn trend(mut summaries: Vec<CohortSummary>) -> Result<TrendSeries> {
    summaries.sort_by_key(|s| s.cohort_year);
    if let Some(w) = summaries.windows(2).find(|w| w[0].cohort_year == w[1].cohort_year) {
        return Err(Error::DuplicateYear(w[0].cohort_year));
    }
    Ok(TrendSeries { summaries })
}
