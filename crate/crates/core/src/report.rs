//! Static SVG charts with JSON sidecars.
//!
//! Pie charts show one cohort's band shares; line charts show band and overall
//! mean QS across years on a fixed `[0, 10]` axis. Every number drawn in an
//! SVG (legend percentages, point labels) is also written verbatim into the
//! chart's JSON sidecar. Output is byte-for-byte deterministic.
//!
//! Band colors are fixed across all charts:
//!
//! | series        | color     |
//! |---------------|-----------|
//! | Above Average | `#2e7d32` |
//! | Average       | `#f9a825` |
//! | Below Average | `#c62828` |
//! | Overall       | `#1565c0` |

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytics::{CohortSummary, QsCategory, TrendSeries};

pub const OVERALL_COLOR: &str = "#1565c0";
pub const Y_TICKS: [f64; 6] = [0.0, 2.0, 4.0, 6.0, 8.0, 10.0];

pub fn category_color(cat: QsCategory) -> &'static str {
    match cat {
        QsCategory::AboveAverage => "#2e7d32",
        QsCategory::Average => "#f9a825",
        QsCategory::BelowAverage => "#c62828",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    Pie,
    Line,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub kind: ChartKind,
    pub title: String,
    pub width: u32,
    pub height: u32,
    /// Output files are `<basename>.svg` and `<basename>.json`.
    pub basename: String,
}

impl ChartSpec {
    pub fn pie(title: impl Into<String>, basename: impl Into<String>) -> Self {
        Self {
            kind: ChartKind::Pie,
            title: title.into(),
            width: 640,
            height: 480,
            basename: basename.into(),
        }
    }

    pub fn line(title: impl Into<String>, basename: impl Into<String>) -> Self {
        Self {
            kind: ChartKind::Line,
            ..Self::pie(title, basename)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieSlice {
    pub category: QsCategory,
    pub label: String,
    pub count: usize,
    pub share: f64,
    pub mean_qs: Option<f64>,
    pub start_deg: f64,
    pub angle_deg: f64,
    pub color: String,
    /// Legend text as drawn in the SVG.
    pub legend: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieData {
    pub kind: ChartKind,
    pub title: String,
    pub cohort_year: i32,
    pub total_students: usize,
    pub overall_mean_qs: f64,
    /// All three bands, including empty ones.
    pub slices: Vec<PieSlice>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinePoint {
    pub year: i32,
    pub value: Option<f64>,
    /// Point label as drawn in the SVG; absent for gaps.
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineSeries {
    pub key: String,
    pub label: String,
    pub color: String,
    pub points: Vec<LinePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YAxis {
    pub min: f64,
    pub max: f64,
    pub ticks: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineData {
    pub kind: ChartKind,
    pub title: String,
    pub years: Vec<i32>,
    pub y_axis: YAxis,
    pub series: Vec<LineSeries>,
}

/// SVG document and its pretty-printed JSON sidecar.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedChart {
    pub svg: String,
    pub json: String,
}

impl RenderedChart {
    /// Writes `<basename>.svg` and `<basename>.json` into `dir`.
    pub fn write(&self, dir: &Path, basename: &str) -> io::Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let svg = dir.join(format!("{basename}.svg"));
        let json = dir.join(format!("{basename}.json"));
        fs::write(&svg, &self.svg)?;
        fs::write(&json, &self.json)?;
        Ok((svg, json))
    }
}

/// Two-decimal coordinate, never printed as `-0.00`.
fn num(x: f64) -> String {
    let r = (x * 100.0).round() / 100.0;
    format!("{:.2}", if r == 0.0 { 0.0 } else { r })
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("chart data always serializes");
    s.push('\n');
    s
}

fn svg_open(out: &mut String, spec: &ChartSpec) {
    let (w, h) = (spec.width, spec.height);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="30" font-size="18" text-anchor="middle">{}</text>"#,
        num(w as f64 / 2.0),
        escape(&spec.title)
    );
}

/// Slice geometry and labels for a cohort summary, bands in display order.
pub fn pie_data(summary: &CohortSummary, spec: &ChartSpec) -> PieData {
    let mut start = 0.0;
    let slices = QsCategory::ALL
        .iter()
        .map(|&cat| {
            let stats = summary.category(cat);
            let angle = stats.share * 360.0;
            let slice = PieSlice {
                category: cat,
                label: cat.label().to_owned(),
                count: stats.count,
                share: stats.share,
                mean_qs: stats.mean_qs,
                start_deg: start,
                angle_deg: angle,
                color: category_color(cat).to_owned(),
                legend: format!("{}: {:.1}% (n={})", cat.label(), stats.share * 100.0, stats.count),
            };
            start += angle;
            slice
        })
        .collect();
    PieData {
        kind: ChartKind::Pie,
        title: spec.title.clone(),
        cohort_year: summary.cohort_year,
        total_students: summary.total_students,
        overall_mean_qs: summary.overall_mean_qs,
        slices,
    }
}

pub fn render_pie(summary: &CohortSummary, spec: &ChartSpec) -> RenderedChart {
    let data = pie_data(summary, spec);
    let (w, h) = (spec.width as f64, spec.height as f64);
    let cx = w * 0.36;
    let cy = h / 2.0 + 15.0;
    let r = (w * 0.3).min(h / 2.0 - 50.0).max(10.0);
    // 0 degrees at twelve o'clock, clockwise
    let point = |deg: f64| {
        let rad = (deg - 90.0).to_radians();
        (cx + r * rad.cos(), cy + r * rad.sin())
    };

    let mut out = String::new();
    svg_open(&mut out, spec);
    for slice in data.slices.iter().filter(|s| s.count > 0) {
        let key = slice.category.key();
        if slice.angle_deg >= 360.0 - 1e-9 {
            let _ = writeln!(
                out,
                r#"<circle class="slice-{key}" cx="{}" cy="{}" r="{}" fill="{}" stroke="white"/>"#,
                num(cx),
                num(cy),
                num(r),
                slice.color
            );
            continue;
        }
        let (x0, y0) = point(slice.start_deg);
        let (x1, y1) = point(slice.start_deg + slice.angle_deg);
        let large = u8::from(slice.angle_deg > 180.0);
        let _ = writeln!(
            out,
            r#"<path class="slice-{key}" d="M {} {} L {} {} A {} {} 0 {large} 1 {} {} Z" fill="{}" stroke="white"/>"#,
            num(cx),
            num(cy),
            num(x0),
            num(y0),
            num(r),
            num(r),
            num(x1),
            num(y1),
            slice.color
        );
    }
    let lx = w * 0.7;
    for (i, slice) in data.slices.iter().enumerate() {
        let ly = cy - 30.0 + 30.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="14" height="14" fill="{}"/>"#,
            num(lx),
            num(ly - 11.0),
            slice.color
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="13">{}</text>"#,
            num(lx + 20.0),
            num(ly),
            escape(&slice.legend)
        );
    }
    out.push_str("</svg>\n");
    RenderedChart {
        svg: out,
        json: to_json(&data),
    }
}

/// Band mean series followed by the overall mean series.
pub fn line_data(series: &TrendSeries, spec: &ChartSpec) -> LineData {
    let years = series.years();
    let make = |key: &str, label: &str, color: &str, values: Vec<Option<f64>>| LineSeries {
        key: key.to_owned(),
        label: label.to_owned(),
        color: color.to_owned(),
        points: years
            .iter()
            .zip(values)
            .map(|(&year, value)| LinePoint {
                year,
                value,
                label: value.map(|v| format!("{v:.2}")),
            })
            .collect(),
    };
    let mut lines: Vec<LineSeries> = QsCategory::ALL
        .iter()
        .map(|&cat| make(cat.key(), cat.label(), category_color(cat), series.category_means(cat)))
        .collect();
    lines.push(make(
        "overall",
        "Overall",
        OVERALL_COLOR,
        series.overall_means().into_iter().map(Some).collect(),
    ));
    LineData {
        kind: ChartKind::Line,
        title: spec.title.clone(),
        years,
        y_axis: YAxis {
            min: 0.0,
            max: 10.0,
            ticks: Y_TICKS.to_vec(),
        },
        series: lines,
    }
}

pub fn render_line(series: &TrendSeries, spec: &ChartSpec) -> RenderedChart {
    let data = line_data(series, spec);
    let (w, h) = (spec.width as f64, spec.height as f64);
    let (left, right, top, bottom) = (60.0, w - 170.0, 55.0, h - 50.0);
    let n = data.years.len();
    let x_at = |i: usize| {
        if n <= 1 {
            (left + right) / 2.0
        } else {
            left + 20.0 + (right - left - 40.0) * i as f64 / (n - 1) as f64
        }
    };
    let y_at = |v: f64| top + (10.0 - v) / 10.0 * (bottom - top);

    let mut out = String::new();
    svg_open(&mut out, spec);
    for &tick in &data.y_axis.ticks {
        let y = y_at(tick);
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#dddddd"/>"##,
            num(left),
            num(y),
            num(right),
            num(y)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{tick}</text>"#,
            num(left - 8.0),
            num(y + 4.0)
        );
    }
    let _ = writeln!(
        out,
        r##"<path d="M {l} {t} L {l} {b} L {r} {b}" fill="none" stroke="#333333"/>"##,
        l = num(left),
        t = num(top),
        b = num(bottom),
        r = num(right)
    );
    for (i, year) in data.years.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{year}</text>"#,
            num(x_at(i)),
            num(bottom + 20.0)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" font-size="12" transform="rotate(-90 16 {})" text-anchor="middle">Mean QS</text>"#,
        num((top + bottom) / 2.0),
        num((top + bottom) / 2.0)
    );

    for line in &data.series {
        // contiguous runs of present values; a missing value breaks the line
        let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for (i, p) in line.points.iter().enumerate() {
            match p.value {
                Some(v) => runs.last_mut().unwrap().push((x_at(i), y_at(v))),
                None if !runs.last().unwrap().is_empty() => runs.push(Vec::new()),
                None => {}
            }
        }
        for run in runs.iter().filter(|r| r.len() >= 2) {
            let pts: Vec<String> = run.iter().map(|&(x, y)| format!("{},{}", num(x), num(y))).collect();
            let _ = writeln!(
                out,
                r#"<polyline class="series-{}" points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
                line.key,
                pts.join(" "),
                line.color
            );
        }
        for (i, p) in line.points.iter().enumerate() {
            if let (Some(v), Some(label)) = (p.value, &p.label) {
                let _ = writeln!(
                    out,
                    r#"<circle class="point-{}" cx="{}" cy="{}" r="3.5" fill="{}"><title>{} {}: {label}</title></circle>"#,
                    line.key,
                    num(x_at(i)),
                    num(y_at(v)),
                    line.color,
                    escape(&line.label),
                    p.year
                );
            }
        }
    }
    for (i, line) in data.series.iter().enumerate() {
        let ly = top + 10.0 + 24.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="3"/>"#,
            num(right + 20.0),
            num(ly - 4.0),
            num(right + 40.0),
            num(ly - 4.0),
            line.color
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="13">{}</text>"#,
            num(right + 46.0),
            num(ly),
            escape(&line.label)
        );
    }
    out.push_str("</svg>\n");
    RenderedChart {
        svg: out,
        json: to_json(&data),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{summarize_cohort, trend, BandConfig};
    use crate::scoring::{AcademicCategory, QualityScore};

    fn summary(year: i32, values: &[f64]) -> CohortSummary {
        let scores: Vec<_> = values
            .iter()
            .enumerate()
            .map(|(i, &qs)| QualityScore {
                student_id: i as i64,
                cohort_year: year,
                category: AcademicCategory::Sphe,
                qs_ir: None,
                qs_po: None,
                qs_total: qs,
            })
            .collect();
        summarize_cohort(&scores, &BandConfig::default()).unwrap()
    }

    fn pie_json(chart: &RenderedChart) -> PieData {
        serde_json::from_str(&chart.json).unwrap()
    }

    #[test]
    fn pie_angles_follow_shares() {
        let chart = render_pie(
            &summary(2013, &[10.0, 8.0, 5.0, 2.0]),
            &ChartSpec::pie("2013", "pie_2013"),
        );
        let data = pie_json(&chart);
        let angles: Vec<f64> = data.slices.iter().map(|s| s.angle_deg).collect();
        assert_eq!(angles, vec![180.0, 90.0, 90.0]);
        assert_eq!(data.slices[1].start_deg, 180.0);
        assert_eq!(data.slices[0].legend, "Above Average: 50.0% (n=2)");
        assert_eq!(chart.svg.matches("<path class=\"slice-").count(), 3);
        for s in &data.slices {
            assert!(chart.svg.contains(&s.legend));
        }
    }

    #[test]
    fn degenerate_pie_is_one_circle() {
        let chart = render_pie(&summary(2013, &[9.0, 9.5]), &ChartSpec::pie("all above", "p"));
        let data = pie_json(&chart);
        assert_eq!(data.slices.len(), 3);
        assert_eq!(data.slices[0].angle_deg, 360.0);
        assert_eq!((data.slices[1].count, data.slices[2].count), (0, 0));
        assert!(chart.svg.contains("<circle class=\"slice-above_average\""));
        assert!(!chart.svg.contains("slice-average"));
        assert!(!chart.svg.contains("slice-below_average"));
        assert!(chart.svg.contains("Below Average: 0.0% (n=0)"));
    }

    #[test]
    fn title_is_escaped() {
        let chart = render_pie(&summary(2013, &[5.0]), &ChartSpec::pie("A & B <2013>", "p"));
        assert!(chart.svg.contains("A &amp; B &lt;2013&gt;"));
        assert_eq!(pie_json(&chart).title, "A & B <2013>");
    }

    #[test]
    fn line_with_two_years() {
        let t = trend(vec![summary(2013, &[9.0, 5.0, 1.0]), summary(2014, &[8.0, 6.0, 2.0])]).unwrap();
        let chart = render_line(&t, &ChartSpec::line("Trend", "trend"));
        let data: LineData = serde_json::from_str(&chart.json).unwrap();
        assert_eq!(data.years, vec![2013, 2014]);
        assert_eq!(data.series.len(), 4);
        assert!(data.series.iter().all(|s| s.points.len() == 2));
        assert_eq!(chart.svg.matches("<polyline").count(), 4);
        assert_eq!(data.y_axis.ticks, vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        for tick in ["0", "2", "4", "6", "8", "10"] {
            assert!(chart.svg.contains(&format!("text-anchor=\"end\">{tick}</text>")));
        }
        for s in &data.series {
            for p in &s.points {
                assert!(chart
                    .svg
                    .contains(&format!("{} {}: {}", s.label, p.year, p.label.as_ref().unwrap())));
            }
        }
    }

    #[test]
    fn absent_mean_is_a_gap() {
        let t = trend(vec![
            summary(2012, &[9.0, 1.0]),
            summary(2013, &[1.0]),
            summary(2014, &[9.5, 2.0]),
        ])
        .unwrap();
        let chart = render_line(&t, &ChartSpec::line("Trend", "trend"));
        let data: LineData = serde_json::from_str(&chart.json).unwrap();
        let above = &data.series[0];
        assert_eq!(above.points[1].value, None);
        assert_eq!(above.points[1].label, None);
        assert_eq!(chart.svg.matches("<polyline class=\"series-above_average\"").count(), 0);
        assert_eq!(chart.svg.matches("<circle class=\"point-above_average\"").count(), 2);
        assert_eq!(chart.svg.matches("<polyline class=\"series-overall\"").count(), 1);
    }

    #[test]
    fn rendering_is_deterministic() {
        let s = summary(2013, &[10.0, 8.0, 5.0, 2.0, 3.3]);
        let a = render_pie(&s, &ChartSpec::pie("x", "x"));
        let b = render_pie(&s.clone(), &ChartSpec::pie("x", "x"));
        assert_eq!(a, b);
    }

    #[test]
    fn coordinates_have_no_negative_zero() {
        assert_eq!(num(-0.0001), "0.00");
        assert_eq!(num(12.345), "12.35");
    }
}
