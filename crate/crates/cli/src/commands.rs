use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use qscore_core::data::{
    self, file_digest, read_company_ranks, read_students, read_university_ranks, save_scores, CompanyRankEntry,
    Diagnostic, InputDigest, LoadReport, Provenance, StudentRecord, UniversityRankEntry,
};
use qscore_core::pipeline::{category_counts, cohort_years, mean_qs, score_cohort};
use qscore_core::report::{render_line, render_pie, ChartSpec};
use qscore_core::{summarize_cohort, trend, BandConfig, CohortSummary, QualityScore};

use crate::config::RunConfig;
use crate::CliError;

fn io_err(e: std::io::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn read_input<T>(
    path: &Path,
    read: impl FnOnce(std::fs::File, &str) -> LoadReport<T>,
) -> Result<LoadReport<T>, CliError> {
    let file =
        std::fs::File::open(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(read(file, &path.display().to_string()))
}

struct Inputs {
    students: LoadReport<StudentRecord>,
    univ: LoadReport<UniversityRankEntry>,
    comp: LoadReport<CompanyRankEntry>,
}

impl Inputs {
    fn load(config: &RunConfig) -> Result<Self, CliError> {
        Ok(Self {
            students: read_input(config.require(&config.students, "students")?, read_students)?,
            univ: read_input(config.require(&config.univ_ranks, "univ-ranks")?, read_university_ranks)?,
            comp: read_input(config.require(&config.comp_ranks, "comp-ranks")?, read_company_ranks)?,
        })
    }

    fn diagnostics(&self) -> impl Iterator<Item = &Diagnostic> {
        self.students
            .diagnostics
            .iter()
            .chain(&self.univ.diagnostics)
            .chain(&self.comp.diagnostics)
    }

    fn error_count(&self) -> usize {
        self.diagnostics().count()
    }
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

pub fn validate(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let inputs = Inputs::load(config)?;
    for d in inputs.diagnostics() {
        writeln!(out, "{d}").map_err(io_err)?;
    }
    let n = inputs.error_count();
    writeln!(
        out,
        "{} students, {} university ranks, {} company ranks checked: {}",
        inputs.students.records.len(),
        inputs.univ.records.len(),
        inputs.comp.records.len(),
        plural(n, "error")
    )
    .map_err(io_err)?;
    if n > 0 {
        return Err(CliError::Data(format!("validation failed with {}", plural(n, "error"))));
    }
    Ok(())
}

pub fn score(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let store = config.require(&config.store, "store (or QSCORE_STORE)")?;
    let inputs = Inputs::load(config)?;
    if inputs.error_count() > 0 {
        for d in inputs.diagnostics() {
            writeln!(out, "{d}").map_err(io_err)?;
        }
        return Err(CliError::Data(format!(
            "inputs have {}; run `qscore validate`",
            plural(inputs.error_count(), "error")
        )));
    }
    let students = &inputs.students.records;
    let years = if config.years.is_empty() {
        cohort_years(students)
    } else {
        config.years.clone()
    };
    if years.is_empty() {
        return Err(CliError::Data("student table has no rows".into()));
    }

    // score every year before writing any, so a failure leaves the store untouched
    let mut scored = Vec::with_capacity(years.len());
    for &year in &years {
        if !students.iter().any(|s| s.eyear == year) {
            return Err(CliError::Data(format!(
                "no students in cohort {year}; input years: {}",
                join_years(&cohort_years(students))
            )));
        }
        let scores = score_cohort(
            students,
            &inputs.univ.records,
            &inputs.comp.records,
            year,
            &config.scoring,
        )
        .map_err(|e| CliError::Data(format!("cohort {year}: {e}")))?;
        if scores.is_empty() {
            return Err(CliError::Data(format!("cohort {year}: no eligible students")));
        }
        scored.push((year, scores));
    }

    let provenance = provenance(config)?;
    for (year, scores) in &scored {
        save_scores(store, *year, scores, &provenance)?;
        let counts = category_counts(scores)
            .iter()
            .map(|(cat, n)| format!("{cat} {n}"))
            .collect::<Vec<_>>()
            .join(", ");
        writeln!(
            out,
            "{year}: {} scored ({counts}), mean QS {:.2} -> {}",
            scores.len(),
            mean_qs(scores).unwrap_or(0.0),
            data::scores_path(store, *year).display()
        )
        .map_err(io_err)?;
    }
    Ok(())
}

fn provenance(config: &RunConfig) -> Result<Provenance, CliError> {
    let mut inputs = Vec::new();
    for path in [&config.students, &config.univ_ranks, &config.comp_ranks]
        .into_iter()
        .flatten()
    {
        let sha256 = file_digest(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256,
        });
    }
    let created_at = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    Ok(Provenance {
        inputs,
        config: serde_json::to_value(config).map_err(|e| CliError::Usage(e.to_string()))?,
        created_at,
    })
}

fn join_years(years: &[i32]) -> String {
    if years.is_empty() {
        return "none".into();
    }
    years.iter().map(i32::to_string).collect::<Vec<_>>().join(", ")
}

#[derive(Serialize)]
struct CombinedSummary<'a> {
    bands: &'a BandConfig,
    years: Vec<i32>,
    summaries: &'a [CohortSummary],
}

pub fn report(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let store = config.require(&config.store, "store (or QSCORE_STORE)")?;
    let available = data::available_years(store)?;
    let years = if config.years.is_empty() {
        available.clone()
    } else {
        config.years.clone()
    };
    let missing: Vec<i32> = years.iter().copied().filter(|y| !available.contains(y)).collect();
    if years.is_empty() || !missing.is_empty() {
        return Err(CliError::Data(format!(
            "missing cohort year(s) {} in store {}; available: {}",
            if missing.is_empty() {
                "(any)".to_string()
            } else {
                join_years(&missing)
            },
            store.display(),
            join_years(&available)
        )));
    }

    let mut summaries = Vec::with_capacity(years.len());
    for &year in &years {
        let scores: Vec<QualityScore> = data::load_scores(store, year)?;
        let summary =
            summarize_cohort(&scores, &config.bands).map_err(|e| CliError::Data(format!("cohort {year}: {e}")))?;
        summaries.push(summary);
    }
    let series = trend(summaries)?;

    let dir = &config.out;
    let mut written = Vec::new();
    for summary in &series.summaries {
        let year = summary.cohort_year;
        let spec = ChartSpec::pie(
            format!("QS Categories: Students Enrolled in {year}"),
            format!("pie_{year}"),
        );
        let (svg, json) = render_pie(summary, &spec).write(dir, &spec.basename).map_err(io_err)?;
        written.extend([svg, json]);
    }
    if series.len() >= 2 || config.force_line {
        let years = series.years();
        let title = match (years.first(), years.last()) {
            (Some(a), Some(b)) if a != b => format!("Mean QS by Category, {a}-{b}"),
            (Some(a), _) => format!("Mean QS by Category, {a}"),
            _ => unreachable!("trend has at least one year"),
        };
        let spec = ChartSpec::line(title, "trend");
        let (svg, json) = render_line(&series, &spec).write(dir, &spec.basename).map_err(io_err)?;
        written.extend([svg, json]);
    }
    let combined = CombinedSummary {
        bands: &config.bands,
        years: series.years(),
        summaries: &series.summaries,
    };
    let mut text = serde_json::to_string_pretty(&combined).map_err(|e| CliError::Usage(e.to_string()))?;
    text.push('\n');
    let summary_path = dir.join("summary.json");
    std::fs::write(&summary_path, text).map_err(io_err)?;
    written.push(summary_path);

    for s in &series.summaries {
        writeln!(
            out,
            "{}: {} students, above {:.1}% / average {:.1}% / below {:.1}%, mean QS {:.2}",
            s.cohort_year,
            s.total_students,
            s.above_average.share * 100.0,
            s.average.share * 100.0,
            s.below_average.share * 100.0,
            s.overall_mean_qs
        )
        .map_err(io_err)?;
    }
    for p in written {
        writeln!(out, "wrote {}", p.display()).map_err(io_err)?;
    }
    Ok(())
}
