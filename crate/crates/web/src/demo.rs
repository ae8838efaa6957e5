//! Demo logic behind the wasm exports.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use qscore_core::data::{read_company_ranks, read_students, read_university_ranks, LoadReport};
use qscore_core::pipeline::{cohort_years as years_of, score_cohort, ScoringOptions};
use qscore_core::report::{render_line, render_pie, ChartSpec, RenderedChart};
use qscore_core::scoring::{self, IR_SCALE, SPHE_SCALE};
use qscore_core::{summarize_cohort, trend, AcademicCategory, BandConfig, CohortSummary, Error};

const STUDENTS: &str = include_str!("../../core/fixtures/students.csv");
const UNIVERSITY_RANKS: &str = include_str!("../../core/fixtures/university_ranks.csv");
const COMPANY_RANKS: &str = include_str!("../../core/fixtures/company_ranks.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Category(pub AcademicCategory);

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        AcademicCategory::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .map(Category)
            .ok_or_else(|| format!("unknown category {s:?}; expected SPHE, SOFJ or SWNDA"))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StudentInput {
    pub category: Category,
    pub rank: Option<u32>,
    pub rank_max: u32,
    pub package: f64,
    pub package_min: f64,
    pub package_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Breakdown {
    pub category: AcademicCategory,
    pub qs_ir: Option<f64>,
    pub qs_po: Option<f64>,
    pub qs_total: f64,
}

pub fn score_breakdown(input: &StudentInput) -> Result<Breakdown, Error> {
    let category = input.category.0;
    Ok(match category {
        AcademicCategory::Swnda => Breakdown {
            category,
            qs_ir: None,
            qs_po: None,
            qs_total: 0.0,
        },
        AcademicCategory::Sphe => Breakdown {
            category,
            qs_ir: None,
            qs_po: None,
            qs_total: scoring::score_sphe(input.rank, input.rank_max)?,
        },
        AcademicCategory::Sofj => {
            let ir = scoring::score_ir(input.rank, input.rank_max)?;
            let po = scoring::score_po(input.package, input.package_min, input.package_max)?;
            Breakdown {
                category,
                qs_ir: Some(ir),
                qs_po: Some(po),
                qs_total: scoring::score_sofj(ir, po),
            }
        }
    })
}

type RankScorer = fn(Option<u32>, u32) -> Result<f64, Error>;

/// Score-vs-rank curve for the rank-based component of `category`.
pub fn rank_curve_svg(category: Category, rank_max: u32, highlight: u32) -> Result<String, Error> {
    let (score, (lo, hi)): (RankScorer, _) = match category.0 {
        AcademicCategory::Sofj => (scoring::score_ir, IR_SCALE),
        _ => (scoring::score_sphe, SPHE_SCALE),
    };
    let (w, h, left, right, top, bottom) = (480.0, 240.0, 44.0, 464.0, 16.0, 208.0);
    let x_at = |r: u32| left + (right - left) * (r - 1) as f64 / (rank_max - 1).max(1) as f64;
    let y_at = |v: f64| bottom - v / hi * (bottom - top);

    // at most ~200 samples, always including both ends
    let step = (rank_max / 200).max(1);
    let mut ranks: Vec<u32> = (1..=rank_max).step_by(step as usize).collect();
    if ranks.last() != Some(&rank_max) {
        ranks.push(rank_max);
    }
    let mut points = String::new();
    for &r in &ranks {
        let v = score(Some(r), rank_max)?;
        let _ = write!(points, "{:.2},{:.2} ", x_at(r), y_at(v));
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        svg,
        r##"<path d="M {left} {top} L {left} {bottom} L {right} {bottom}" fill="none" stroke="#333"/>"##
    );
    for tick in [0.0, lo, hi] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{tick}</text>"#,
            left - 6.0,
            y_at(tick) + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{left}" y="{}" text-anchor="middle">1</text>"#,
        bottom + 16.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{right}" y="{}" text-anchor="middle">{rank_max}</text>"#,
        bottom + 16.0
    );
    let _ = writeln!(
        svg,
        r##"<polyline points="{}" fill="none" stroke="#1565c0" stroke-width="2"/>"##,
        points.trim_end()
    );
    if (1..=rank_max).contains(&highlight) {
        let v = score(Some(highlight), rank_max)?;
        let _ = writeln!(
            svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="5" fill="#c62828"><title>rank {highlight}: {v:.2}</title></circle>"##,
            x_at(highlight),
            y_at(v)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn checked<T>(report: LoadReport<T>) -> Result<Vec<T>, String> {
    match report.diagnostics.first() {
        Some(d) => Err(d.to_string()),
        None => Ok(report.records),
    }
}

pub fn cohort_years() -> Vec<i32> {
    years_of(&read_students(STUDENTS.as_bytes(), "students.csv").records)
}

/// Scores every year of the bundled cohort and summarizes it under `bands`.
pub fn cohort_summaries(bands: &BandConfig) -> Result<Vec<CohortSummary>, String> {
    let students = checked(read_students(STUDENTS.as_bytes(), "students.csv"))?;
    let univ = checked(read_university_ranks(
        UNIVERSITY_RANKS.as_bytes(),
        "university_ranks.csv",
    ))?;
    let comp = checked(read_company_ranks(COMPANY_RANKS.as_bytes(), "company_ranks.csv"))?;
    years_of(&students)
        .into_iter()
        .map(|year| {
            let scores =
                score_cohort(&students, &univ, &comp, year, &ScoringOptions::default()).map_err(|e| e.to_string())?;
            summarize_cohort(&scores, bands).map_err(|e| e.to_string())
        })
        .collect()
}

pub fn cohort_pie(year: i32, bands: &BandConfig) -> Result<RenderedChart, String> {
    let summary = cohort_summaries(bands)?
        .into_iter()
        .find(|s| s.cohort_year == year)
        .ok_or_else(|| format!("no cohort {year} in the bundled data"))?;
    let spec = ChartSpec::pie(
        format!("QS Categories: Students Enrolled in {year}"),
        format!("pie_{year}"),
    );
    Ok(render_pie(&summary, &spec))
}

pub fn cohort_trend(bands: &BandConfig) -> Result<RenderedChart, String> {
    let series = trend(cohort_summaries(bands)?).map_err(|e| e.to_string())?;
    Ok(render_line(&series, &ChartSpec::line("Mean QS by Category", "trend")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(cat: &str, rank: Option<u32>) -> StudentInput {
        StudentInput {
            category: cat.parse().unwrap(),
            rank,
            rank_max: 50,
            package: 6.5,
            package_min: 3.0,
            package_max: 10.0,
        }
    }

    #[test]
    fn breakdowns() {
        let b = score_breakdown(&input("sofj", Some(25))).unwrap();
        assert_eq!(b.qs_total, b.qs_ir.unwrap() + b.qs_po.unwrap());
        assert!((b.qs_total - 5.540_816_326_5).abs() < 1e-9);
        assert_eq!(score_breakdown(&input("SPHE", Some(1))).unwrap().qs_total, 10.0);
        assert_eq!(score_breakdown(&input("SPHE", None)).unwrap().qs_total, 0.0);
        assert_eq!(score_breakdown(&input("SWNDA", Some(1))).unwrap().qs_total, 0.0);
        assert!("alumni".parse::<Category>().is_err());
    }

    #[test]
    fn curve_marks_highlight() {
        let svg = rank_curve_svg("SPHE".parse().unwrap(), 200, 100).unwrap();
        assert!(svg.contains("rank 100: 5.52"));
        assert!(rank_curve_svg("SOFJ".parse().unwrap(), 1, 1).is_err());
        let big = rank_curve_svg("SOFJ".parse().unwrap(), 5000, 0).unwrap();
        assert!(!big.contains("<circle"));
    }

    #[test]
    fn bundled_cohort() {
        assert_eq!(cohort_years(), vec![2013, 2014]);
        let summaries = cohort_summaries(&BandConfig::default()).unwrap();
        assert_eq!(summaries.iter().map(|s| s.total_students).sum::<usize>(), 62);
        let wide = cohort_summaries(&BandConfig::new(0.5, 9.5).unwrap()).unwrap();
        assert!(wide[0].average.count >= summaries[0].average.count);
        assert!(cohort_pie(2013, &BandConfig::default())
            .unwrap()
            .svg
            .starts_with("<svg"));
        assert!(cohort_pie(1999, &BandConfig::default()).is_err());
        assert!(cohort_trend(&BandConfig::default())
            .unwrap()
            .svg
            .contains("series-overall"));
    }
}
