//! Transition categories and per-student quality scores.
//!
//! * Higher education (SPHE): university rank scaled onto `[1, 10]`.
//! * Placement (SOFJ): company rank scaled onto `[1, 5]` plus package scaled
//!   onto `[0, 5]` relative to the cohort's package range.
//! * No data (SWNDA): always 0.
//!
//! Names missing from the ranking tables score 0 for the rank component.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::data::StudentRecord;
use crate::error::{Error, Result};
use crate::names::normalize;
use crate::scale::ScaleSpec;

pub const SPHE_SCALE: (f64, f64) = (1.0, 10.0);
pub const IR_SCALE: (f64, f64) = (1.0, 5.0);
pub const PO_SCALE: (f64, f64) = (0.0, 5.0);

/// Package score when every placed student in the cohort got the same package.
pub const TIED_PACKAGE_SCORE: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AcademicCategory {
    /// Pursuing higher education.
    #[serde(rename = "SPHE")]
    Sphe,
    /// Opted for a job (campus placement).
    #[serde(rename = "SOFJ")]
    Sofj,
    /// No data available.
    #[serde(rename = "SWNDA")]
    Swnda,
}

impl AcademicCategory {
    pub const ALL: [AcademicCategory; 3] = [Self::Sphe, Self::Sofj, Self::Swnda];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Sphe => "SPHE",
            Self::Sofj => "SOFJ",
            Self::Swnda => "SWNDA",
        }
    }
}

impl fmt::Display for AcademicCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which university ranking tables an SPHE student's university is looked up in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniversityScope {
    /// Country table first, world table when the name is not ranked nationally.
    #[default]
    CountryThenWorld,
    CountryOnly,
    WorldOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackageBounds {
    pub min: f64,
    pub max: f64,
}

/// Ranking tables and package range for one cohort year. Keys are normalized names.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RankingContext {
    pub year: i32,
    pub university_ranks_country: BTreeMap<String, u32>,
    pub university_ranks_world: BTreeMap<String, u32>,
    pub company_ranks: BTreeMap<String, u32>,
    pub rank_max_univ_country: Option<u32>,
    pub rank_max_univ_world: Option<u32>,
    pub industry_rank_max: Option<u32>,
    pub package: Option<PackageBounds>,
    pub university_scope: UniversityScope,
}

impl RankingContext {
    /// Builds a context, deriving every `rank_max` from its map.
    pub fn new(
        year: i32,
        university_ranks_country: BTreeMap<String, u32>,
        university_ranks_world: BTreeMap<String, u32>,
        company_ranks: BTreeMap<String, u32>,
        package: Option<PackageBounds>,
    ) -> Self {
        let max_of = |m: &BTreeMap<String, u32>| m.values().copied().max();
        Self {
            year,
            rank_max_univ_country: max_of(&university_ranks_country),
            rank_max_univ_world: max_of(&university_ranks_world),
            industry_rank_max: max_of(&company_ranks),
            university_ranks_country,
            university_ranks_world,
            company_ranks,
            package,
            university_scope: UniversityScope::default(),
        }
    }

    pub fn with_university_scope(mut self, scope: UniversityScope) -> Self {
        self.university_scope = scope;
        self
    }

    /// Resolves a university name to `(rank, rank_max)` of the table it matched.
    pub fn university_rank(&self, name: &str) -> Option<(u32, u32)> {
        let key = normalize(name);
        let country = || {
            self.university_ranks_country
                .get(&key)
                .map(|&r| (r, self.rank_max_univ_country.unwrap_or(r)))
        };
        let world = || {
            self.university_ranks_world
                .get(&key)
                .map(|&r| (r, self.rank_max_univ_world.unwrap_or(r)))
        };
        match self.university_scope {
            UniversityScope::CountryThenWorld => country().or_else(world),
            UniversityScope::CountryOnly => country(),
            UniversityScope::WorldOnly => world(),
        }
    }

    pub fn company_rank(&self, name: &str) -> Option<(u32, u32)> {
        self.company_ranks
            .get(&normalize(name))
            .map(|&r| (r, self.industry_rank_max.unwrap_or(r)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityScore {
    pub student_id: i64,
    pub cohort_year: i32,
    pub category: AcademicCategory,
    pub qs_ir: Option<f64>,
    pub qs_po: Option<f64>,
    pub qs_total: f64,
}

pub fn academic_category(record: &StudentRecord) -> AcademicCategory {
    if record.univ_f {
        AcademicCategory::Sphe
    } else if record.comp_f {
        AcademicCategory::Sofj
    } else {
        AcademicCategory::Swnda
    }
}

fn rank_score(rank: Option<u32>, rank_max: u32, (lo, hi): (f64, f64)) -> Result<f64> {
    let Some(rank) = rank else {
        return Ok(0.0);
    };
    if rank_max <= 1 {
        return Err(Error::DegenerateRanking);
    }
    if rank == 0 || rank > rank_max {
        return Err(Error::OutOfRange {
            what: "rank",
            value: rank as f64,
            min: 1.0,
            max: rank_max as f64,
        });
    }
    let spec = ScaleSpec {
        input_min: rank_max as f64,
        input_max: 1.0,
        scaled_min: lo,
        scaled_max: hi,
    };
    Ok(spec.apply(rank as f64))
}

/// Higher-education score: rank 1 gives 10, `rank_max` gives 1, unranked gives 0.
pub fn score_sphe(university_rank: Option<u32>, rank_max: u32) -> Result<f64> {
    rank_score(university_rank, rank_max, SPHE_SCALE)
}

/// Industry-rank component of a placement score: `[1, 5]`, unranked gives 0.
pub fn score_ir(company_rank: Option<u32>, industry_rank_max: u32) -> Result<f64> {
    rank_score(company_rank, industry_rank_max, IR_SCALE)
}

/// Package component of a placement score, `[0, 5]` across the cohort's package range.
pub fn score_po(package: f64, package_min: f64, package_max: f64) -> Result<f64> {
    if !(package >= package_min && package <= package_max) {
        return Err(Error::OutOfRange {
            what: "package",
            value: package,
            min: package_min,
            max: package_max,
        });
    }
    if package_min == package_max {
        return Ok(TIED_PACKAGE_SCORE);
    }
    let spec = ScaleSpec {
        input_min: package_min,
        input_max: package_max,
        scaled_min: PO_SCALE.0,
        scaled_max: PO_SCALE.1,
    };
    Ok(spec.apply(package))
}

pub fn score_sofj(qs_ir: f64, qs_po: f64) -> f64 {
    qs_ir + qs_po
}

pub fn score_student(record: &StudentRecord, ctx: &RankingContext) -> Result<QualityScore> {
    let category = academic_category(record);
    let mut score = QualityScore {
        student_id: record.id,
        cohort_year: record.eyear,
        category,
        qs_ir: None,
        qs_po: None,
        qs_total: 0.0,
    };
    let tag = |e: Error| e.for_student(record.id);
    match category {
        AcademicCategory::Swnda => {}
        AcademicCategory::Sphe => {
            score.qs_total = match ctx.university_rank(&record.univ) {
                Some((rank, rank_max)) => score_sphe(Some(rank), rank_max).map_err(tag)?,
                None => 0.0,
            };
        }
        AcademicCategory::Sofj => {
            let ir = match ctx.company_rank(&record.comp) {
                Some((rank, rank_max)) => score_ir(Some(rank), rank_max).map_err(tag)?,
                None => 0.0,
            };
            let bounds = ctx.package.ok_or_else(|| tag(Error::MissingPackageBounds))?;
            let po = score_po(record.package, bounds.min, bounds.max).map_err(tag)?;
            score.qs_ir = Some(ir);
            score.qs_po = Some(po);
            score.qs_total = score_sofj(ir, po);
        }
    }
    Ok(score)
}
