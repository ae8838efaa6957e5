//! Outcome-based quality scoring for higher-education cohorts.
//!
//! Every graduating student is placed in one transition category (higher
//! education, placement, or no data) and given a quality score on `[0, 10]`
//! derived from the rank of the university or company they moved to and, for
//! placements, the package offered. Scores are then banded and aggregated into
//! per-year summaries and multi-year trends, and rendered as SVG charts.
//!
//! Module map:
//!
//! * [`scale`]: linear scaling between two closed intervals.
//! * [`scoring`]: transition categories and per-student scores.
//! * [`analytics`]: score bands, cohort summaries, trends.
//! * [`data`]: CSV ingestion, ranking contexts and the per-year score store.
//! * [`report`]: pie and line charts with JSON sidecars.
//! * [`pipeline`]: scoring a whole cohort from loaded tables.

pub mod analytics;
pub mod data;
pub mod error;
pub mod names;
pub mod pipeline;
pub mod report;
pub mod scale;
pub mod scoring;

pub use analytics::{qs_category, summarize_cohort, trend, BandConfig, CohortSummary, QsCategory, TrendSeries};
pub use error::{Error, Result};
pub use scale::{linear_scale, ScaleSpec};
pub use scoring::{
    academic_category, score_ir, score_po, score_sofj, score_sphe, score_student, AcademicCategory, QualityScore,
    RankingContext,
};
