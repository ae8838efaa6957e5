use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::tables::{CompanyRankEntry, RankScope, StudentRecord, UniversityRankEntry};
use crate::error::{Error, Result};
use crate::names::normalize;
use crate::scoring::{academic_category, AcademicCategory, PackageBounds, RankingContext, UniversityScope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextOptions {
    /// Use the most recent earlier ranking year when the cohort year has no table.
    pub rank_fallback: bool,
    pub university_scope: UniversityScope,
}

impl Default for ContextOptions {
    fn default() -> Self {
        Self {
            rank_fallback: true,
            university_scope: UniversityScope::default(),
        }
    }
}

/// Picks the ranking year for a cohort: exact match, else (with fallback) the
/// latest year before it.
pub fn select_rank_year(years: impl IntoIterator<Item = i32>, cohort_year: i32, fallback: bool) -> Option<i32> {
    let mut best = None;
    for y in years {
        if y == cohort_year {
            return Some(y);
        }
        if fallback && y < cohort_year && best.is_none_or(|b| y > b) {
            best = Some(y);
        }
    }
    best
}

fn university_map(
    entries: &[UniversityRankEntry],
    scope: RankScope,
    cohort_year: i32,
    fallback: bool,
) -> BTreeMap<String, u32> {
    let scoped = entries.iter().filter(|e| e.scope == scope);
    let Some(year) = select_rank_year(scoped.clone().map(|e| e.uryear), cohort_year, fallback) else {
        return BTreeMap::new();
    };
    scoped
        .filter(|e| e.uryear == year)
        .map(|e| (normalize(&e.univ_name), e.univ_rank))
        .collect()
}

fn company_map(entries: &[CompanyRankEntry], cohort_year: i32, fallback: bool) -> BTreeMap<String, u32> {
    let Some(year) = select_rank_year(entries.iter().map(|e| e.cryear), cohort_year, fallback) else {
        return BTreeMap::new();
    };
    entries
        .iter()
        .filter(|e| e.cryear == year)
        .map(|e| (normalize(&e.comp_name), e.comp_rank))
        .collect()
}

/// Assembles the ranking context for one cohort year.
///
/// `students` may span several years; only rows with `eyear == cohort_year`
/// are considered. Package bounds come from that cohort's placed students and
/// are `None` when it has none.
pub fn build_context(
    students: &[StudentRecord],
    univ_ranks: &[UniversityRankEntry],
    comp_ranks: &[CompanyRankEntry],
    cohort_year: i32,
    options: &ContextOptions,
) -> Result<RankingContext> {
    let cohort: Vec<&StudentRecord> = students.iter().filter(|s| s.eyear == cohort_year).collect();
    if cohort.is_empty() {
        return Err(Error::NoStudentsForYear(cohort_year));
    }
    let has = |cat| cohort.iter().any(|s| academic_category(s) == cat);

    let country = university_map(univ_ranks, RankScope::Country, cohort_year, options.rank_fallback);
    let world = university_map(univ_ranks, RankScope::World, cohort_year, options.rank_fallback);
    let companies = company_map(comp_ranks, cohort_year, options.rank_fallback);

    let package = cohort
        .iter()
        .filter(|s| academic_category(s) == AcademicCategory::Sofj)
        .map(|s| s.package)
        .fold(None, |acc: Option<PackageBounds>, p| {
            Some(match acc {
                None => PackageBounds { min: p, max: p },
                Some(b) => PackageBounds {
                    min: b.min.min(p),
                    max: b.max.max(p),
                },
            })
        });

    let ctx = RankingContext::new(cohort_year, country, world, companies, package)
        .with_university_scope(options.university_scope);

    let univ_usable = match options.university_scope {
        UniversityScope::CountryThenWorld => {
            !ctx.university_ranks_country.is_empty() || !ctx.university_ranks_world.is_empty()
        }
        UniversityScope::CountryOnly => !ctx.university_ranks_country.is_empty(),
        UniversityScope::WorldOnly => !ctx.university_ranks_world.is_empty(),
    };
    if has(AcademicCategory::Sphe) && !univ_usable {
        return Err(Error::NoRankingData {
            year: cohort_year,
            table: "university",
        });
    }
    if has(AcademicCategory::Sofj) && ctx.company_ranks.is_empty() {
        return Err(Error::NoRankingData {
            year: cohort_year,
            table: "company",
        });
    }
    Ok(ctx)
}
