//! Per-year score store.
//!
//! Layout under the store directory:
//!
//! * `scores_<year>.jsonl`: one [`QualityScore`] JSON object per line, in input order.
//! * `meta_<year>.json`: [`Provenance`] for the run that wrote the scores.
//!
//! Both files are written to a temporary file in the same directory and
//! renamed into place, so readers never observe a partial write.

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;
use thiserror::Error;

use crate::scoring::QualityScore;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{}:{line}: corrupt store record: {message}", path.display())]
    Corrupt {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("cannot encode record: {0}")]
    Encode(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub inputs: Vec<InputDigest>,
    pub config: serde_json::Value,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
}

pub fn scores_path(store_dir: &Path, year: i32) -> PathBuf {
    store_dir.join(format!("scores_{year}.jsonl"))
}

pub fn meta_path(store_dir: &Path, year: i32) -> PathBuf {
    store_dir.join(format!("meta_{year}.json"))
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_owned(),
        source,
    }
}

fn write_atomic(dir: &Path, target: &Path, bytes: &[u8]) -> Result<(), StoreError> {
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    tmp.write_all(bytes).map_err(io_err(target))?;
    tmp.as_file().sync_all().map_err(io_err(target))?;
    tmp.persist(target).map_err(|e| StoreError::Io {
        path: target.to_owned(),
        source: e.error,
    })?;
    Ok(())
}

/// Writes (or replaces) the scores and provenance for one cohort year.
pub fn save_scores(
    store_dir: &Path,
    year: i32,
    scores: &[QualityScore],
    provenance: &Provenance,
) -> Result<(), StoreError> {
    fs::create_dir_all(store_dir).map_err(io_err(store_dir))?;
    let mut body = Vec::with_capacity(scores.len() * 96);
    for score in scores {
        serde_json::to_writer(&mut body, score)?;
        body.push(b'\n');
    }
    write_atomic(store_dir, &scores_path(store_dir, year), &body)?;
    let mut meta = serde_json::to_vec_pretty(provenance)?;
    meta.push(b'\n');
    write_atomic(store_dir, &meta_path(store_dir, year), &meta)
}

/// Loads one year's scores. A year that was never saved loads as empty.
pub fn load_scores(store_dir: &Path, year: i32) -> Result<Vec<QualityScore>, StoreError> {
    let path = scores_path(store_dir, year);
    let file = match File::open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io_err(&path)(e)),
    };
    let mut scores = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(&path))?;
        if line.trim().is_empty() {
            continue;
        }
        let score = serde_json::from_str(&line).map_err(|e| StoreError::Corrupt {
            path: path.clone(),
            line: i + 1,
            message: e.to_string(),
        })?;
        scores.push(score);
    }
    Ok(scores)
}

pub fn load_provenance(store_dir: &Path, year: i32) -> Result<Option<Provenance>, StoreError> {
    let path = meta_path(store_dir, year);
    match fs::read(&path) {
        Ok(bytes) => serde_json::from_slice(&bytes)
            .map(Some)
            .map_err(|e| StoreError::Corrupt {
                path,
                line: e.line(),
                message: e.to_string(),
            }),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(io_err(&path)(e)),
    }
}

/// Cohort years that have a score file, ascending. A missing directory has none.
pub fn available_years(store_dir: &Path) -> Result<Vec<i32>, StoreError> {
    let entries = match fs::read_dir(store_dir) {
        Ok(e) => e,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io_err(store_dir)(e)),
    };
    let mut years = Vec::new();
    for entry in entries {
        let entry = entry.map_err(io_err(store_dir))?;
        let name = entry.file_name();
        let Some(name) = name.to_str() else { continue };
        if let Some(year) = name
            .strip_prefix("scores_")
            .and_then(|rest| rest.strip_suffix(".jsonl"))
            .and_then(|y| y.parse().ok())
        {
            years.push(year);
        }
    }
    years.sort_unstable();
    Ok(years)
}

/// SHA-256 of a file's contents, lowercase hex.
pub fn file_digest(path: &Path) -> io::Result<String> {
    let mut hasher = Sha256::new();
    let mut file = File::open(path)?;
    io::copy(&mut file, &mut hasher)?;
    Ok(format!("{:x}", hasher.finalize()))
}
