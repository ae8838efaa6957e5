//! Input tables, ranking-context assembly and the per-year score store.

mod context;
mod diagnostics;
mod store;
mod tables;

pub use context::{build_context, select_rank_year, ContextOptions};
pub use diagnostics::{Diagnostic, DiagnosticKind, LoadError, LoadReport};
pub use store::{
    available_years, file_digest, load_provenance, load_scores, meta_path, save_scores, scores_path, InputDigest,
    Provenance, StoreError,
};
pub use tables::{
    load_company_ranks, load_students, load_university_ranks, read_company_ranks, read_students, read_university_ranks,
    CompanyRankEntry, RankScope, StudentRecord, UniversityRankEntry, COMPANY_COLUMNS, STUDENT_COLUMNS,
    UNIVERSITY_COLUMNS,
};
