use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate scale: input_min and input_max are both {0}")]
    DegenerateScale(f64),

    #[error("invalid scale: scaled_min {min} is not below scaled_max {max}")]
    InvertedScale { min: f64, max: f64 },

    #[error("degenerate ranking: rank table has a single rank (rank_max = 1)")]
    DegenerateRanking,

    #[error("{what} {value} is outside [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("no package bounds available for a placed student")]
    MissingPackageBounds,

    #[error("student {student_id}: {source}")]
    Student {
        student_id: i64,
        #[source]
        source: Box<Error>,
    },

    #[error("no students in cohort {0}")]
    NoStudentsForYear(i32),

    #[error("cohort has no students")]
    EmptyCohort,

    #[error("scores from several cohort years ({0} and {1}) in one summary")]
    MixedCohort(i32, i32),

    #[error("duplicate cohort year {0} in trend")]
    DuplicateYear(i32),

    #[error("invalid bands: need 0 <= lower ({lower}) < upper ({upper}) <= 10")]
    InvalidBands { lower: f64, upper: f64 },

    #[error("cohort {year}: no {table} ranking data after year filtering")]
    NoRankingData { year: i32, table: &'static str },
}

impl Error {
    pub(crate) fn for_student(self, student_id: i64) -> Self {
        Error::Student {
            student_id,
            source: Box::new(self),
        }
    }
}
