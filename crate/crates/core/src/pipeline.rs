//! Scores whole cohorts from loaded tables.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::data::{build_context, CompanyRankEntry, ContextOptions, StudentRecord, UniversityRankEntry};
use crate::error::Result;
use crate::scoring::{score_student, AcademicCategory, QualityScore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ScoringOptions {
    /// Score only students whose `final_result` is `Pass`.
    pub pass_only: bool,
    #[serde(flatten)]
    pub context: ContextOptions,
}

/// Distinct `eyear` values, ascending.
pub fn cohort_years(students: &[StudentRecord]) -> Vec<i32> {
    students
        .iter()
        .map(|s| s.eyear)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Students of one cohort that are eligible for scoring, in input order.
pub fn eligible_students(students: &[StudentRecord], year: i32, pass_only: bool) -> Vec<StudentRecord> {
    students
        .iter()
        .filter(|s| s.eyear == year && (!pass_only || s.final_result.trim() == "Pass"))
        .cloned()
        .collect()
}

/// Builds the cohort's ranking context and scores every eligible student.
///
/// Returns an empty list when no student of that year is eligible.
pub fn score_cohort(
    students: &[StudentRecord],
    univ_ranks: &[UniversityRankEntry],
    comp_ranks: &[CompanyRankEntry],
    year: i32,
    options: &ScoringOptions,
) -> Result<Vec<QualityScore>> {
    let cohort = eligible_students(students, year, options.pass_only);
    if cohort.is_empty() {
        return Ok(Vec::new());
    }
    let ctx = build_context(&cohort, univ_ranks, comp_ranks, year, &options.context)?;
    cohort.iter().map(|s| score_student(s, &ctx)).collect()
}

/// Student count per transition category, in `SPHE, SOFJ, SWNDA` order.
pub fn category_counts(scores: &[QualityScore]) -> [(AcademicCategory, usize); 3] {
    AcademicCategory::ALL.map(|cat| (cat, scores.iter().filter(|s| s.category == cat).count()))
}

pub fn mean_qs(scores: &[QualityScore]) -> Option<f64> {
    (!scores.is_empty()).then(|| scores.iter().map(|s| s.qs_total).sum::<f64>() / scores.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(year: i32, id: i64, result: &str) -> StudentRecord {
        StudentRecord {
            eyear: year,
            id,
            final_result: result.into(),
            ..Default::default()
        }
    }

    #[test]
    fn years_and_filtering() {
        let students = vec![
            s(2014, 1, "Pass"),
            s(2013, 2, "Fail"),
            s(2013, 3, "Pass"),
            s(2013, 4, "Withdrawn"),
        ];
        assert_eq!(cohort_years(&students), vec![2013, 2014]);
        assert_eq!(eligible_students(&students, 2013, false).len(), 3);
        let passed = eligible_students(&students, 2013, true);
        assert_eq!(passed.iter().map(|s| s.id).collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn swnda_only_cohort_needs_no_tables() {
        let students = vec![s(2013, 1, "Pass"), s(2013, 2, "Pass")];
        let scores = score_cohort(&students, &[], &[], 2013, &ScoringOptions::default()).unwrap();
        assert_eq!(scores.len(), 2);
        assert!(scores.iter().all(|q| q.qs_total == 0.0));
        assert_eq!(category_counts(&scores)[2], (AcademicCategory::Swnda, 2));
        assert_eq!(mean_qs(&scores), Some(0.0));
        assert_eq!(mean_qs(&[]), None);
    }
}
