use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qscore_core::data::ContextOptions;
use qscore_core::pipeline::ScoringOptions;
use qscore_core::scoring::UniversityScope;
use qscore_core::BandConfig;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qscore",
    version,
    about = "Outcome-based quality scores for graduating cohorts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn args(&self) -> &RunArgs {
        match &self.command {
            Command::Validate(a) | Command::Score(a) | Command::Report(a) => a,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the three input tables and list every problem found.
    Validate(RunArgs),
    /// Score each requested cohort year and write it to the store.
    Score(RunArgs),
    /// Render pie and trend charts from stored scores.
    Report(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScopeArg {
    CountryThenWorld,
    Country,
    World,
}

impl From<ScopeArg> for UniversityScope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::CountryThenWorld => UniversityScope::CountryThenWorld,
            ScopeArg::Country => UniversityScope::CountryOnly,
            ScopeArg::World => UniversityScope::WorldOnly,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON config file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Student table CSV.
    #[arg(long, value_name = "CSV")]
    pub students: Option<PathBuf>,
    /// University rank table CSV.
    #[arg(long, value_name = "CSV")]
    pub univ_ranks: Option<PathBuf>,
    /// Company rank table CSV.
    #[arg(long, value_name = "CSV")]
    pub comp_ranks: Option<PathBuf>,
    /// Score store directory [default: $QSCORE_STORE].
    #[arg(long, value_name = "DIR")]
    pub store: Option<PathBuf>,
    /// Cohort years, comma separated [default: every year in the input or store].
    #[arg(long, value_delimiter = ',', value_name = "YEAR,...")]
    pub years: Vec<i32>,
    /// Band thresholds `lower,upper` [default: 4,7].
    #[arg(long, value_parser = parse_bands, value_name = "LOWER,UPPER")]
    pub bands: Option<BandConfig>,
    /// Score only students whose final_result is Pass.
    #[arg(long)]
    pub pass_only: bool,
    /// Require ranking tables for the exact cohort year.
    #[arg(long)]
    pub no_rank_fallback: bool,
    /// Which university ranking tables to consult.
    #[arg(long, value_enum, value_name = "SCOPE")]
    pub univ_scope: Option<ScopeArg>,
    /// Report output directory [default: report].
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Draw the trend chart even for a single year.
    #[arg(long)]
    pub force_line: bool,
}

fn parse_bands(s: &str) -> Result<BandConfig, String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LOWER,UPPER")?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    BandConfig::new(parse(lo)?, parse(hi)?).map_err(|e| e.to_string())
}

/// Contents of a `--config` JSON file. Relative paths resolve against the file's directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub students: Option<PathBuf>,
    pub univ_ranks: Option<PathBuf>,
    pub comp_ranks: Option<PathBuf>,
    pub store: Option<PathBuf>,
    pub years: Option<Vec<i32>>,
    pub bands: Option<[f64; 2]>,
    pub pass_only: Option<bool>,
    pub rank_fallback: Option<bool>,
    pub univ_scope: Option<ScopeArg>,
    pub out: Option<PathBuf>,
    pub force_line: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: ConfigFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut cfg.students,
            &mut cfg.univ_ranks,
            &mut cfg.comp_ranks,
            &mut cfg.store,
            &mut cfg.out,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub students: Option<PathBuf>,
    pub univ_ranks: Option<PathBuf>,
    pub comp_ranks: Option<PathBuf>,
    pub store: Option<PathBuf>,
    pub years: Vec<i32>,
    pub bands: BandConfig,
    pub scoring: ScoringOptions,
    pub out: PathBuf,
    pub force_line: bool,
}

impl RunConfig {
    /// Precedence: flags, then config file, then `env_store` for the store directory.
    pub fn resolve(args: &RunArgs, env_store: Option<OsString>) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let bands = match (args.bands, file.bands) {
            (Some(b), _) => b,
            (None, Some([lo, hi])) => BandConfig::new(lo, hi).map_err(|e| CliError::Usage(e.to_string()))?,
            (None, None) => BandConfig::default(),
        };
        let scope = args
            .univ_scope
            .or(file.univ_scope)
            .map(UniversityScope::from)
            .unwrap_or_default();
        Ok(Self {
            students: args.students.clone().or(file.students),
            univ_ranks: args.univ_ranks.clone().or(file.univ_ranks),
            comp_ranks: args.comp_ranks.clone().or(file.comp_ranks),
            store: args.store.clone().or(file.store).or(env_store.map(PathBuf::from)),
            years: if args.years.is_empty() {
                file.years.unwrap_or_default()
            } else {
                args.years.clone()
            },
            bands,
            scoring: ScoringOptions {
                pass_only: args.pass_only || file.pass_only.unwrap_or(false),
                context: ContextOptions {
                    rank_fallback: !args.no_rank_fallback && file.rank_fallback.unwrap_or(true),
                    university_scope: scope,
                },
            },
            out: args.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("report")),
            force_line: args.force_line || file.force_line.unwrap_or(false),
        })
    }

    pub(crate) fn require<'a>(&self, value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
        value
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("missing required --{flag}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunArgs {
        let cli = Cli::try_parse_from(std::iter::once("qscore").chain(args.iter().copied())).unwrap();
        cli.args().clone()
    }

    #[test]
    fn flags_parse() {
        let a = parse(&[
            "score",
            "--years",
            "2013,2014",
            "--bands",
            "3.5,8",
            "--pass-only",
            "--no-rank-fallback",
        ]);
        assert_eq!(a.years, vec![2013, 2014]);
        assert_eq!(a.bands, Some(BandConfig::new(3.5, 8.0).unwrap()));
        let c = RunConfig::resolve(&a, None).unwrap();
        assert!(c.scoring.pass_only);
        assert!(!c.scoring.context.rank_fallback);
        assert_eq!(c.out, PathBuf::from("report"));
    }

    #[test]
    fn bad_bands_rejected() {
        assert!(Cli::try_parse_from(["qscore", "report", "--bands", "7,4"]).is_err());
        assert!(Cli::try_parse_from(["qscore", "report", "--bands", "4"]).is_err());
    }

    #[test]
    fn flags_override_file_and_env_is_last() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("qscore.json");
        fs::write(
            &cfg,
            r#"{"students": "in/s.csv", "store": "/abs/store", "years": [2013], "bands": [3, 6],
                "pass_only": true, "univ_scope": "world"}"#,
        )
        .unwrap();
        let cfg_arg = cfg.to_str().unwrap();

        let c = RunConfig::resolve(&parse(&["score", "--config", cfg_arg]), Some("/env/store".into())).unwrap();
        assert_eq!(c.students, Some(dir.path().join("in/s.csv")));
        assert_eq!(c.store, Some(PathBuf::from("/abs/store")));
        assert_eq!(c.years, vec![2013]);
        assert_eq!(c.bands, BandConfig::new(3.0, 6.0).unwrap());
        assert!(c.scoring.pass_only);
        assert_eq!(c.scoring.context.university_scope, UniversityScope::WorldOnly);

        let c = RunConfig::resolve(
            &parse(&[
                "score",
                "--config",
                cfg_arg,
                "--store",
                "flag",
                "--years",
                "2014",
                "--univ-scope",
                "country",
            ]),
            Some("/env/store".into()),
        )
        .unwrap();
        assert_eq!(c.store, Some(PathBuf::from("flag")));
        assert_eq!(c.years, vec![2014]);
        assert_eq!(c.scoring.context.university_scope, UniversityScope::CountryOnly);

        let c = RunConfig::resolve(&parse(&["score"]), Some("/env/store".into())).unwrap();
        assert_eq!(c.store, Some(PathBuf::from("/env/store")));
    }

    #[test]
    fn unknown_config_keys_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.json");
        fs::write(&cfg, r#"{"studnets": "x"}"#).unwrap();
        let err = RunConfig::resolve(&parse(&["validate", "--config", cfg.to_str().unwrap()]), None).unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
    }
}
