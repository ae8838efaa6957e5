#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

pub fn qscore(args: &[&str]) -> Output {
    qscore_env(args, &[])
}

pub fn qscore_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qscore"));
    cmd.args(args).env_remove("QSCORE_STORE");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("qscore binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn input_flags() -> Vec<String> {
    vec![
        "--students".into(),
        fixture("students.csv").display().to_string(),
        "--univ-ranks".into(),
        fixture("university_ranks.csv").display().to_string(),
        "--comp-ranks".into(),
        fixture("company_ranks.csv").display().to_string(),
    ]
}

/// `validate`, `score` and `report` on the bundled fixture into `root/store` and `root/report`.
pub fn full_run(root: &Path) -> Result<(), String> {
    let store = root.join("store").display().to_string();
    let out = root.join("report").display().to_string();
    let inputs = input_flags();
    let inputs: Vec<&str> = inputs.iter().map(String::as_str).collect();
    let steps: [Vec<&str>; 3] = [
        [&["validate"][..], &inputs].concat(),
        [&["score"][..], &inputs, &["--store", &store]].concat(),
        vec!["report", "--store", &store, "--out", &out],
    ];
    for args in steps {
        let o = qscore(&args);
        if !o.status.success() {
            return Err(format!("qscore {} failed: {}{}", args[0], stdout(&o), stderr(&o)));
        }
    }
    Ok(())
}

/// Files compared for determinism: score files and every report artifact.
pub fn artifacts(root: &Path) -> Vec<PathBuf> {
    let mut files = Vec::new();
    for (dir, keep) in [("store", "scores_"), ("report", "")] {
        let mut names: Vec<PathBuf> = std::fs::read_dir(root.join(dir))
            .map(|rd| rd.filter_map(|e| e.ok()).map(|e| e.path()).collect())
            .unwrap_or_default();
        names.retain(|p| p.file_name().unwrap().to_string_lossy().starts_with(keep));
        names.sort();
        files.extend(names.into_iter().map(|p| p.strip_prefix(root).unwrap().to_owned()));
    }
    files
}

pub const STUDENT_HEADER: &str = "course,eyear,code,id,gender,region,he,imd,age,prev_attempt,credit,disability,final_result,univ,comp,package,univ_f,comp_f,q_score";

pub fn student_row(year: i32, id: u32, univ: &str, comp: &str, package: &str, uf: &str, cf: &str) -> String {
    format!("BTech,{year},C1,{id},F,North,A Level,20-30%,0-35,0,120,N,Pass,{univ},{comp},{package},{uf},{cf},0")
}
