//! WebAssembly bindings for the static demo page in `www/`.
//!
//! The exported functions return SVG or JSON strings; all logic lives in
//! [`demo`] so it can be tested natively.

pub mod demo;

use wasm_bindgen::prelude::*;

use qscore_core::BandConfig;

fn bands(lower: f64, upper: f64) -> Result<BandConfig, JsError> {
    BandConfig::new(lower, upper).map_err(|e| JsError::new(&e.to_string()))
}

/// Score breakdown for one hypothetical student, as JSON.
///
/// `category` is `SPHE`, `SOFJ` or `SWNDA`; a `rank` of 0 means unranked.
#[wasm_bindgen(js_name = scoreStudent)]
pub fn score_student(
    category: &str,
    rank: u32,
    rank_max: u32,
    package: f64,
    package_min: f64,
    package_max: f64,
) -> Result<String, JsError> {
    let input = demo::StudentInput {
        category: category.parse().map_err(|e: String| JsError::new(&e))?,
        rank: (rank > 0).then_some(rank),
        rank_max,
        package,
        package_min,
        package_max,
    };
    demo::score_breakdown(&input)
        .map(|b| serde_json::to_string(&b).expect("breakdown serializes"))
        .map_err(|e| JsError::new(&e.to_string()))
}

/// SVG plot of score against rank for `rank_max` ranks, marking `highlight`.
#[wasm_bindgen(js_name = rankCurveSvg)]
pub fn rank_curve_svg(category: &str, rank_max: u32, highlight: u32) -> Result<String, JsError> {
    let category = category.parse().map_err(|e: String| JsError::new(&e))?;
    demo::rank_curve_svg(category, rank_max, highlight).map_err(|e| JsError::new(&e.to_string()))
}

/// Pie chart SVG for one year of the bundled cohort under the given bands.
#[wasm_bindgen(js_name = cohortPieSvg)]
pub fn cohort_pie_svg(year: i32, lower: f64, upper: f64) -> Result<String, JsError> {
    demo::cohort_pie(year, &bands(lower, upper)?)
        .map(|c| c.svg)
        .map_err(|e| JsError::new(&e))
}

/// Trend line chart SVG across every year of the bundled cohort.
#[wasm_bindgen(js_name = cohortTrendSvg)]
pub fn cohort_trend_svg(lower: f64, upper: f64) -> Result<String, JsError> {
    demo::cohort_trend(&bands(lower, upper)?)
        .map(|c| c.svg)
        .map_err(|e| JsError::new(&e))
}

/// Per-year summaries of the bundled cohort as JSON.
#[wasm_bindgen(js_name = cohortSummaryJson)]
pub fn cohort_summary_json(lower: f64, upper: f64) -> Result<String, JsError> {
    demo::cohort_summaries(&bands(lower, upper)?)
        .map(|s| serde_json::to_string(&s).expect("summaries serialize"))
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = cohortYears)]
pub fn cohort_years() -> Vec<i32> {
    demo::cohort_years()
}
