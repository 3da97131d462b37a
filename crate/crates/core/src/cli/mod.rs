//! Command-line front end: `check`, `compute`, `verify` and `batch`.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 validation failure,
//! 3 failed theorem check.

mod format;
mod random;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::foliation::{
    residues, subset_label, validate_spec, ValidationError, ValidationLevel,
    ValidationOptions,
};
use crate::schemes::{run_checks, CheckKind, CheckStatus, VerifyOptions};

pub use format::{RationalValue, ReportFile, SpecFile, ValidationSection, Verdict};
pub use random::random_instances;

pub const ENGINE: &str = concat!("logfol ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        1
    }
}

#[derive(Parser, Debug)]
#[command(name = "logfol", version, about = "Singular, Kupka and persistent ideals of logarithmic foliations")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Validation level, overriding the one in the spec.
    #[arg(long)]
    level: Option<ValidationLevel>,
    /// Write the JSON report (for `batch`: a directory of reports) here.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Format of what is printed on stdout.
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
    /// Run theorem checks even when their hypotheses fail; failed validation
    /// checks are recorded instead of rejecting the spec.
    #[arg(long)]
    waive_preconditions: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OutputFormat {
    Human,
    Machine,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    Sing,
    Kupka,
    Persistent,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a spec file.
    Check {
        spec: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compute reduced Gröbner bases of the singular, Kupka or persistent ideals.
    Compute {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the checks listed in a spec file.
    Verify {
        spec: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Verify every spec in a directory and/or a batch of random instances.
    Batch {
        dir: Option<PathBuf>,
        /// Number of random generic instances to add.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "LOGFOL_WORKERS")]
        workers: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Which part of the pipeline a report is for.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub command: String,
    /// `None` runs the checks listed in the spec.
    pub checks: Option<Vec<CheckKind>>,
    pub level: Option<ValidationLevel>,
    pub waive: bool,
    pub seed: Option<u64>,
}

impl RunOptions {
    pub fn verify() -> RunOptions {
        RunOptions {
            command: "verify".into(),
            checks: None,
            level: None,
            waive: false,
            seed: None,
        }
    }
}

/// Validates `file` and runs the requested checks. Only malformed specs are
/// errors; validation and check failures are recorded in the verdict.
pub fn process(file: &SpecFile, opts: &RunOptions) -> Result<ReportFile, CliError> {
    let spec = file.to_spec()?;
    let level = opts.level.unwrap_or(file.validation_level);
    let validation_opts = ValidationOptions {
        level,
        exhaustive_snc: false,
        waive: opts.waive,
    };
    let mut report = ReportFile {
        engine: ENGINE.to_string(),
        command: opts.command.clone(),
        seed: opts.seed,
        spec: file.clone(),
        validation: ValidationSection {
            level,
            passed: false,
            checks: Vec::new(),
            failures: Vec::new(),
            waived: Vec::new(),
            residues: Default::default(),
        },
        checks: Vec::new(),
        verdict: Verdict::Invalid,
    };
    let vs = match validate_spec(&spec, validation_opts) {
        Ok(vs) => vs,
        Err(ValidationError::Malformed(e)) => return Err(CliError::Parse(format!("malformed spec: {e}"))),
        Err(ValidationError::Failed {
            failures,
            certificate,
        }) => {
            report.validation.checks = certificate.checks;
            report.validation.failures = failures.iter().map(|f| f.to_string()).collect();
            return Ok(report);
        }
    };
    report.validation.passed = vs.waived_failures().is_empty();
    report.validation.checks = vs.certificate().checks.clone();
    report.validation.waived = vs.waived_failures().iter().map(|f| f.to_string()).collect();
    report.validation.residues = residues(&vs)
        .iter()
        .map(|(k, v)| (subset_label(k), RationalValue(v.clone())))
        .collect();

    let checks = opts.checks.clone().unwrap_or_else(|| file.checks.clone());
    let verify_opts = VerifyOptions {
        waive_preconditions: opts.waive,
        variable_names: Some(file.variable_names()),
    };
    report.checks = run_checks(&vs, &checks, verify_opts).checks;
    report.verdict = if report.checks.iter().any(|c| c.status == CheckStatus::Fail) {
        Verdict::Failed
    } else {
        Verdict::Ok
    };
    Ok(report)
}

fn read_spec(path: &Path) -> Result<SpecFile, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    SpecFile::from_json(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Writes `contents` to a sibling temporary file and renames it into place.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

fn emit(report: &ReportFile, common: &CommonArgs) -> Result<(), CliError> {
    if let Some(path) = &common.output {
        write_atomic(path, &report.to_json())?;
    }
    match common.format {
        OutputFormat::Human => print!("{}", report.to_human()),
        OutputFormat::Machine => print!("{}", report.to_json()),
    }
    if !report.validation.failures.is_empty() {
        for f in &report.validation.failures {
            eprintln!("validation failure: {f}");
        }
    }
    Ok(())
}

fn single(path: &Path, common: &CommonArgs, mut opts: RunOptions) -> Result<i32, CliError> {
    let file = read_spec(path)?;
    opts.level = common.level;
    let report = process(&file, &opts)?;
    emit(&report, common)?;
    Ok(report.verdict.exit_code())
}

/// One line of a batch summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchRow {
    pub name: String,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub engine: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub rows: Vec<BatchRow>,
}

impl BatchSummary {
    pub fn exit_code(&self) -> i32 {
        self.rows.iter().map(|r| r.exit_code).max().unwrap_or(0)
    }

    pub fn to_human(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
        let mut out = format!("{:width$}  verdict  pass  fail  skip\n", "spec");
        for r in &self.rows {
            let verdict = r.verdict.map(|v| v.to_string()).unwrap_or_else(|| "error".into());
            out += &format!(
                "{:width$}  {:7}  {:4}  {:4}  {:4}",
                r.name, verdict, r.passed, r.failed, r.skipped
            );
            if let Some(e) = &r.error {
                out += &format!("  {e}");
            }
            out.push('\n');
        }
        out += &format!("{} specs, exit code {}\n", self.rows.len(), self.exit_code());
        out
    }
}

fn count_status(report: &ReportFile, status: CheckStatus) -> usize {
    report.checks.iter().filter(|c| c.status == status).count()
}

fn batch(
    dir: Option<&Path>,
    random: Option<usize>,
    seed: u64,
    workers: Option<usize>,
    common: &CommonArgs,
) -> Result<i32, CliError> {
    let mut inputs: Vec<(String, Result<SpecFile, CliError>, Option<u64>)> = Vec::new();
    if let Some(dir) = dir {
        let entries = fs::read_dir(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for p in paths {
            let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            inputs.push((name, read_spec(&p), None));
        }
    }
    if let Some(count) = random {
        for (k, file) in random_instances(seed, count).into_iter().enumerate() {
            inputs.push((format!("random-{seed}-{k:03}"), Ok(file), Some(seed)));
        }
    }
    if dir.is_none() && random.is_none() {
        return Err(CliError::Parse("batch needs a directory or --random".into()));
    }
    if let Some(out) = &common.output {
        fs::create_dir_all(out).map_err(|source| CliError::Io {
            path: out.clone(),
            source,
        })?;
    }

    let workers = workers
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Parse(format!("cannot start {workers} workers: {e}")))?;

    let rows: Vec<Result<BatchRow, CliError>> = pool.install(|| {
        inputs
            .par_iter()
            .map(|(name, file, seed)| {
                let opts = RunOptions {
                    command: "verify".into(),
                    checks: None,
                    level: common.level,
                    waive: common.waive_preconditions,
                    seed: *seed,
                };
                let result = file.as_ref().map_err(|e| CliError::Parse(e.to_string())).and_then(|f| process(f, &opts));
                match result {
                    Ok(report) => {
                        if let Some(out) = &common.output {
                            write_atomic(&out.join(format!("{name}.report.json")), &report.to_json())?;
                        }
                        Ok(BatchRow {
                            name: name.clone(),
                            exit_code: report.verdict.exit_code(),
                            verdict: Some(report.verdict),
                            error: None,
                            passed: count_status(&report, CheckStatus::Pass),
                            failed: count_status(&report, CheckStatus::Fail),
                            skipped: count_status(&report, CheckStatus::Skipped),
                        })
                    }
                    Err(e) => Ok(BatchRow {
                        name: name.clone(),
                        exit_code: e.exit_code(),
                        verdict: None,
                        error: Some(e.to_string()),
                        passed: 0,
                        failed: 0,
                        skipped: 0,
                    }),
                }
            })
            .collect()
    });
    let summary = BatchSummary {
        engine: ENGINE.to_string(),
        seed: random.map(|_| seed),
        rows: rows.into_iter().collect::<Result<_, _>>()?,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    if let Some(out) = &common.output {
        write_atomic(&out.join("summary.json"), &json)?;
    }
    match common.format {
        OutputFormat::Human => print!("{}", summary.to_human()),
        OutputFormat::Machine => print!("{json}"),
    }
    Ok(summary.exit_code())
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Check { spec, common } => single(
            &spec,
            &common,
            RunOptions {
                command: "check".into(),
                checks: Some(Vec::new()),
                level: None,
                waive: false,
                seed: None,
            },
        ),
        Command::Compute { spec, which, common } => {
            let checks = match which {
                Which::Sing => vec![CheckKind::Sing],
                Which::Kupka => vec![CheckKind::Kupka],
                Which::Persistent => vec![CheckKind::Persistent],
                Which::All => vec![CheckKind::Sing, CheckKind::Kupka, CheckKind::Persistent],
            };
            let waive = common.waive_preconditions;
            single(
                &spec,
                &common,
                RunOptions {
                    command: "compute".into(),
                    checks: Some(checks),
                    level: None,
                    waive,
                    seed: None,
                },
            )
        }
        Command::Verify { spec, common } => {
            let opts = RunOptions {
                waive: common.waive_preconditions,
                ..RunOptions::verify()
            };
            single(&spec, &common, opts)
        }
        Command::Batch {
            dir,
            random,
            seed,
            workers,
            common,
        } => batch(dir.as_deref(), random, seed, workers, &common),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
