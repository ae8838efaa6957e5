//! CSV loaders for the student, university-rank and company-rank tables.
//!
//! Column names are matched exactly. Extra columns are ignored. Each rejected
//! row yields exactly one diagnostic (the first problem found in it).

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use csv::StringRecord;
use serde::{Deserialize, Serialize};

use super::diagnostics::{Diagnostic, DiagnosticKind, LoadError, LoadReport};
use crate::names::normalize;

pub const STUDENT_COLUMNS: [&str; 19] = [
    "course",
    "eyear",
    "code",
    "id",
    "gender",
    "region",
    "he",
    "imd",
    "age",
    "prev_attempt",
    "credit",
    "disability",
    "final_result",
    "univ",
    "comp",
    "package",
    "univ_f",
    "comp_f",
    "q_score",
];

pub const UNIVERSITY_COLUMNS: [&str; 7] = [
    "univ_code",
    "univ_name",
    "univ_city",
    "univ_state",
    "univ_score",
    "univ_rank",
    "uryear",
];

/// Optional trailing column on the university table.
pub const UNIVERSITY_SCOPE_COLUMN: &str = "scope";

pub const COMPANY_COLUMNS: [&str; 11] = [
    "comp_name",
    "comp_sector",
    "comp_subsector",
    "comp_area",
    "comp_country",
    "comp_para1",
    "comp_para2",
    "comp_para3",
    "comp_para4",
    "comp_rank",
    "cryear",
];

/// One row of the student table. `univ_f`/`comp_f` are the `Y`/`N` flags.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StudentRecord {
    pub course: String,
    pub eyear: i32,
    pub code: String,
    pub id: i64,
    pub gender: String,
    pub region: String,
    pub he: String,
    pub imd: String,
    pub age: String,
    pub prev_attempt: String,
    pub credit: String,
    pub disability: String,
    pub final_result: String,
    pub univ: String,
    pub comp: String,
    pub package: f64,
    pub univ_f: bool,
    pub comp_f: bool,
    pub q_score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankScope {
    #[default]
    Country,
    World,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniversityRankEntry {
    pub univ_code: String,
    pub univ_name: String,
    pub univ_city: String,
    pub univ_state: String,
    pub univ_score: f64,
    pub univ_rank: u32,
    pub uryear: i32,
    pub scope: RankScope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompanyRankEntry {
    pub comp_name: String,
    pub comp_sector: String,
    pub comp_subsector: String,
    pub comp_area: String,
    pub comp_country: String,
    pub comp_para1: f64,
    pub comp_para2: f64,
    pub comp_para3: f64,
    pub comp_para4: f64,
    pub comp_rank: u32,
    pub cryear: i32,
}

type RowResult<T> = Result<T, (DiagnosticKind, String)>;

struct Row<'a> {
    record: &'a StringRecord,
    columns: &'a HashMap<String, usize>,
}

impl Row<'_> {
    fn text(&self, col: &str) -> RowResult<&str> {
        self.columns.get(col).and_then(|&i| self.record.get(i)).ok_or_else(|| {
            (
                DiagnosticKind::MalformedRow,
                format!("row has no value for column `{col}`"),
            )
        })
    }

    fn owned(&self, col: &str) -> RowResult<String> {
        self.text(col).map(str::to_owned)
    }

    fn int<T: std::str::FromStr>(&self, col: &str) -> RowResult<T> {
        let raw = self.text(col)?.trim();
        raw.parse().map_err(|_| {
            (
                DiagnosticKind::TypeMismatch,
                format!("`{col}` must be an integer, got {raw:?}"),
            )
        })
    }

    fn rank(&self, col: &str) -> RowResult<u32> {
        let raw = self.text(col)?.trim();
        match raw.parse::<u32>() {
            Ok(r) if r >= 1 => Ok(r),
            _ => Err((
                DiagnosticKind::TypeMismatch,
                format!("`{col}` must be a positive integer rank, got {raw:?}"),
            )),
        }
    }

    fn real(&self, col: &str) -> RowResult<f64> {
        let raw = self.text(col)?.trim();
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err((
                DiagnosticKind::TypeMismatch,
                format!("`{col}` must be a number, got {raw:?}"),
            )),
        }
    }

    /// Like `real`, but an empty cell reads as 0.
    fn real_or_zero(&self, col: &str) -> RowResult<f64> {
        if self.text(col)?.trim().is_empty() {
            Ok(0.0)
        } else {
            self.real(col)
        }
    }

    fn flag(&self, col: &str) -> RowResult<bool> {
        match self.text(col)?.trim() {
            "Y" => Ok(true),
            "N" => Ok(false),
            other => Err((
                DiagnosticKind::TypeMismatch,
                format!("`{col}` must be Y or N, got {other:?}"),
            )),
        }
    }
}

/// Reads a CSV stream, checks required columns, and hands each row to `parse`.
fn read_table<R: Read, T>(
    reader: R,
    file: &str,
    required: &[&str],
    mut parse: impl FnMut(&Row<'_>) -> RowResult<T>,
) -> LoadReport<T> {
    let mut report = LoadReport {
        records: Vec::new(),
        diagnostics: Vec::new(),
    };
    let diag = |line: u64, kind, message| Diagnostic {
        file: file.to_owned(),
        line,
        kind,
        message,
    };

    let mut csv = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = match csv.headers() {
        Ok(h) => h.clone(),
        Err(e) => {
            report
                .diagnostics
                .push(diag(1, DiagnosticKind::MalformedRow, e.to_string()));
            return report;
        }
    };
    let columns: HashMap<String, usize> = headers
        .iter()
        .enumerate()
        .map(|(i, name)| (name.to_owned(), i))
        .collect();
    for col in required {
        if !columns.contains_key(*col) {
            report.diagnostics.push(diag(
                1,
                DiagnosticKind::MissingColumn,
                format!("header is missing column `{col}`"),
            ));
        }
    }
    if !report.diagnostics.is_empty() {
        return report;
    }

    let mut record = StringRecord::new();
    loop {
        match csv.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(0, |p| p.line());
                if record.iter().all(|f| f.trim().is_empty()) {
                    continue;
                }
                if record.len() != headers.len() {
                    report.diagnostics.push(diag(
                        line,
                        DiagnosticKind::MalformedRow,
                        format!("expected {} fields, found {}", headers.len(), record.len()),
                    ));
                    continue;
                }
                let row = Row {
                    record: &record,
                    columns: &columns,
                };
                match parse(&row) {
                    Ok(value) => report.records.push(value),
                    Err((kind, message)) => report.diagnostics.push(diag(line, kind, message)),
                }
            }
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                report
                    .diagnostics
                    .push(diag(line, DiagnosticKind::MalformedRow, e.to_string()));
                if !matches!(
                    e.kind(),
                    csv::ErrorKind::Utf8 { .. } | csv::ErrorKind::UnequalLengths { .. }
                ) {
                    break;
                }
            }
        }
    }
    report
}

fn open(path: &Path) -> Result<File, LoadError> {
    File::open(path).map_err(|source| LoadError::Io {
        path: path.to_owned(),
        source,
    })
}

fn parse_student(row: &Row<'_>) -> RowResult<StudentRecord> {
    let rec = StudentRecord {
        course: row.owned("course")?,
        eyear: row.int("eyear")?,
        code: row.owned("code")?,
        id: row.int("id")?,
        gender: row.owned("gender")?,
        region: row.owned("region")?,
        he: row.owned("he")?,
        imd: row.owned("imd")?,
        age: row.owned("age")?,
        prev_attempt: row.owned("prev_attempt")?,
        credit: row.owned("credit")?,
        disability: row.owned("disability")?,
        final_result: row.owned("final_result")?,
        univ: row.owned("univ")?,
        comp: row.owned("comp")?,
        package: row.real_or_zero("package")?,
        univ_f: row.flag("univ_f")?,
        comp_f: row.flag("comp_f")?,
        q_score: row.real_or_zero("q_score")?,
    };
    if rec.package < 0.0 {
        return Err((
            DiagnosticKind::TypeMismatch,
            format!("`package` must be non-negative, got {}", rec.package),
        ));
    }
    if rec.univ_f && rec.comp_f {
        return Err((
            DiagnosticKind::ConflictingFlags,
            format!("student {} has both univ_f and comp_f set to Y", rec.id),
        ));
    }
    if rec.comp_f && rec.package <= 0.0 {
        return Err((
            DiagnosticKind::MissingPackage,
            format!("student {} joined a company but has no positive package", rec.id),
        ));
    }
    Ok(rec)
}

/// Parses a student table from any reader. `file` labels diagnostics.
pub fn read_students<R: Read>(reader: R, file: &str) -> LoadReport<StudentRecord> {
    let mut seen = HashSet::new();
    read_table(reader, file, &STUDENT_COLUMNS, |row| {
        let rec = parse_student(row)?;
        if !seen.insert((rec.eyear, rec.id)) {
            return Err((
                DiagnosticKind::DuplicateId,
                format!("student id {} appears twice in cohort {}", rec.id, rec.eyear),
            ));
        }
        Ok(rec)
    })
}

pub fn load_students(path: &Path) -> Result<Vec<StudentRecord>, LoadError> {
    read_students(open(path)?, &path.display().to_string()).into_result()
}

pub fn read_university_ranks<R: Read>(reader: R, file: &str) -> LoadReport<UniversityRankEntry> {
    let mut seen = HashSet::new();
    read_table(reader, file, &UNIVERSITY_COLUMNS, |row| {
        let scope = if row.columns.contains_key(UNIVERSITY_SCOPE_COLUMN) {
            match row.text(UNIVERSITY_SCOPE_COLUMN)?.trim() {
                "" | "country" => RankScope::Country,
                "world" => RankScope::World,
                other => {
                    return Err((
                        DiagnosticKind::TypeMismatch,
                        format!("`scope` must be country or world, got {other:?}"),
                    ))
                }
            }
        } else {
            RankScope::Country
        };
        let entry = UniversityRankEntry {
            univ_code: row.owned("univ_code")?,
            univ_name: row.owned("univ_name")?,
            univ_city: row.owned("univ_city")?,
            univ_state: row.owned("univ_state")?,
            univ_score: row.real("univ_score")?,
            univ_rank: row.rank("univ_rank")?,
            uryear: row.int("uryear")?,
            scope,
        };
        if !seen.insert((normalize(&entry.univ_name), entry.uryear, entry.scope)) {
            return Err((
                DiagnosticKind::DuplicateEntry,
                format!(
                    "university {:?} ranked twice for {} ({:?} scope)",
                    entry.univ_name, entry.uryear, entry.scope
                ),
            ));
        }
        Ok(entry)
    })
}

pub fn load_university_ranks(path: &Path) -> Result<Vec<UniversityRankEntry>, LoadError> {
    read_university_ranks(open(path)?, &path.display().to_string()).into_result()
}

pub fn read_company_ranks<R: Read>(reader: R, file: &str) -> LoadReport<CompanyRankEntry> {
    let mut seen = HashSet::new();
    read_table(reader, file, &COMPANY_COLUMNS, |row| {
        let entry = CompanyRankEntry {
            comp_name: row.owned("comp_name")?,
            comp_sector: row.owned("comp_sector")?,
            comp_subsector: row.owned("comp_subsector")?,
            comp_area: row.owned("comp_area")?,
            comp_country: row.owned("comp_country")?,
            comp_para1: row.real("comp_para1")?,
            comp_para2: row.real("comp_para2")?,
            comp_para3: row.real("comp_para3")?,
            comp_para4: row.real("comp_para4")?,
            comp_rank: row.rank("comp_rank")?,
            cryear: row.int("cryear")?,
        };
        if !seen.insert((normalize(&entry.comp_name), entry.cryear)) {
            return Err((
                DiagnosticKind::DuplicateEntry,
                format!("company {:?} ranked twice for {}", entry.comp_name, entry.cryear),
            ));
        }
        Ok(entry)
    })
}

pub fn load_company_ranks(path: &Path) -> Result<Vec<CompanyRankEntry>, LoadError> {
    read_company_ranks(open(path)?, &path.display().to_string()).into_result()
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "course,eyear,code,id,gender,region,he,imd,age,prev_attempt,credit,disability,final_result,univ,comp,package,univ_f,comp_f,q_score";

    fn student_row(id: u32, univ: &str, comp: &str, package: &str, uf: &str, cf: &str) -> String {
        format!(
            "B.Tech CSE,2013,CSE01,{id},F,North,A Level,20-30%,0-35,0,120,N,Pass,{univ},{comp},{package},{uf},{cf},0"
        )
    }

    fn students(rows: &[String]) -> LoadReport<StudentRecord> {
        let text = format!("{HEADER}\n{}\n", rows.join("\n"));
        read_students(text.as_bytes(), "students.csv")
    }

    #[test]
    fn three_good_rows() {
        let r = students(&[
            student_row(1, "IIT Delhi", "", "", "Y", "N"),
            student_row(2, "", "Infosys", "6.5", "N", "Y"),
            student_row(3, "", "", "0", "N", "N"),
        ]);
        assert!(r.is_clean(), "{:?}", r.diagnostics);
        assert_eq!(r.records.len(), 3);
        assert!(r.records[0].univ_f);
        assert_eq!(r.records[1].package, 6.5);
        assert_eq!(r.records[2].package, 0.0);
    }

    #[test]
    fn conflicting_flags_reported_at_line() {
        let r = students(&[
            student_row(1, "IIT Delhi", "", "", "Y", "N"),
            student_row(2, "X", "Y Corp", "5", "Y", "Y"),
        ]);
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.diagnostics.len(), 1);
        let d = &r.diagnostics[0];
        assert_eq!((d.kind, d.line), (DiagnosticKind::ConflictingFlags, 3));
        assert!(d.to_string().starts_with("students.csv:3: conflicting-flags"));
    }

    #[test]
    fn missing_column_stops_parsing() {
        let text = HEADER.replace(",package", "") + "\nB.Tech,2013,C,1,F,N,A,x,y,0,1,N,Pass,,,N,N,0\n";
        let r = read_students(text.as_bytes(), "s.csv");
        assert!(r.records.is_empty());
        assert_eq!(r.diagnostics.len(), 1);
        assert_eq!(r.diagnostics[0].kind, DiagnosticKind::MissingColumn);
        assert_eq!(r.diagnostics[0].line, 1);
        assert!(r.diagnostics[0].message.contains("package"));
    }

    #[test]
    fn row_level_errors() {
        let r = students(&[
            student_row(1, "", "Acme", "0", "N", "Y"),
            student_row(2, "", "", "", "maybe", "N"),
            student_row(3, "", "", "-1", "N", "N"),
            student_row(4, "", "", "", "N", "N"),
            student_row(4, "", "", "", "N", "N"),
            "B.Tech,20x3,C,5,F,N,A,x,y,0,1,N,Pass,,,0,N,N,0".to_string(),
            "too,few".to_string(),
        ]);
        let kinds: Vec<_> = r.diagnostics.iter().map(|d| (d.line, d.kind)).collect();
        assert_eq!(
            kinds,
            vec![
                (2, DiagnosticKind::MissingPackage),
                (3, DiagnosticKind::TypeMismatch),
                (4, DiagnosticKind::TypeMismatch),
                (6, DiagnosticKind::DuplicateId),
                (7, DiagnosticKind::TypeMismatch),
                (8, DiagnosticKind::MalformedRow),
            ]
        );
        assert_eq!(r.records.len(), 1);
    }

    #[test]
    fn quoted_fields_with_commas() {
        let r = students(&[student_row(
            1,
            "\"University of California, Berkeley\"",
            "",
            "",
            "Y",
            "N",
        )]);
        assert!(r.is_clean(), "{:?}", r.diagnostics);
        assert_eq!(r.records[0].univ, "University of California, Berkeley");
    }

    #[test]
    fn same_id_in_different_cohorts_is_fine() {
        let a = student_row(1, "", "", "", "N", "N");
        let b = a.replacen("2013", "2014", 1);
        assert!(students(&[a, b]).is_clean());
    }

    const UNIV_HEADER: &str = "univ_code,univ_name,univ_city,univ_state,univ_score,univ_rank,uryear";

    #[test]
    fn university_scope_defaults_to_country() {
        let text = format!("{UNIV_HEADER}\nU1,IISc,Bangalore,KA,82.5,1,2013\nU2,IIT Madras,Chennai,TN,80.1,2,2013\n");
        let r = read_university_ranks(text.as_bytes(), "u.csv");
        assert!(r.is_clean());
        assert!(r.records.iter().all(|e| e.scope == RankScope::Country));
    }

    #[test]
    fn university_errors() {
        let text = format!(
            "{UNIV_HEADER},scope\nU1,IISc,B,KA,82.5,1,2013,country\nU1b,  iisc ,B,KA,82.5,3,2013,country\n\
             U1c,IISc,B,KA,82.5,40,2013,world\nU2,X,C,TN,1,0,2013,\nU3,Y,C,TN,1,4,2013,galaxy\n"
        );
        let r = read_university_ranks(text.as_bytes(), "u.csv");
        let kinds: Vec<_> = r.diagnostics.iter().map(|d| (d.line, d.kind)).collect();
        assert_eq!(
            kinds,
            vec![
                (3, DiagnosticKind::DuplicateEntry),
                (5, DiagnosticKind::TypeMismatch),
                (6, DiagnosticKind::TypeMismatch),
            ]
        );
        assert_eq!(r.records.len(), 2);
        assert_eq!(r.records[1].scope, RankScope::World);
    }

    const COMP_HEADER: &str =
        "comp_name,comp_sector,comp_subsector,comp_area,comp_country,comp_para1,comp_para2,comp_para3,comp_para4,comp_rank,cryear";

    #[test]
    fn company_table() {
        let text = format!(
            "{COMP_HEADER}\nTCS,IT,Services,Asia,India,1,2,3,4,1,2013\nInfosys,IT,Services,Asia,India,1,2,3,4,2,2013\n"
        );
        let r = read_company_ranks(text.as_bytes(), "c.csv");
        assert!(r.is_clean());
        assert_eq!(r.records.len(), 2);
        assert_eq!(r.records[1].comp_rank, 2);
    }

    #[test]
    fn company_errors() {
        let text = format!(
            "{COMP_HEADER}\nTCS,IT,S,Asia,India,1,2,3,4,1,2013\ntcs,IT,S,Asia,India,1,2,3,4,5,2013\n\
             Wipro,IT,S,Asia,India,1,lots,3,4,3,2013\n"
        );
        let r = read_company_ranks(text.as_bytes(), "c.csv");
        let kinds: Vec<_> = r.diagnostics.iter().map(|d| (d.line, d.kind)).collect();
        assert_eq!(
            kinds,
            vec![(3, DiagnosticKind::DuplicateEntry), (4, DiagnosticKind::TypeMismatch)]
        );
        assert!(r.diagnostics[1].message.contains("comp_para2"));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_students(Path::new("/nonexistent/students.csv")).unwrap_err();
        assert!(matches!(err, LoadError::Io { .. }));
        assert!(err.to_string().contains("/nonexistent/students.csv"));
    }
}
