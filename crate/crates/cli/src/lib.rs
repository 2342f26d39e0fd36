//! Library side of the `cergm` binary: argument parsing, config resolution,
//! execution and artifact writing.

pub mod args;
pub mod config;
pub mod error;
pub mod run;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use args::{Cli, CommandArgs};
pub use config::{Command, FileConfig, RunConfig, SCHEMA_VERSION};
pub use error::CliError;
use run::CsvKind;

pub const THREADS_ENV: &str = "ERGM_THREADS";

/// What lands in the JSON file.
#[derive(Debug, Serialize)]
pub struct Envelope<'a> {
    pub schema_version: u32,
    pub config: &'a RunConfig,
    /// SHA-256 of the compact JSON of `{"config": .., "result": ..}`.
    pub content_hash: String,
    pub timestamp_unix: u64,
    pub result: &'a Value,
}

pub fn content_hash(config: &RunConfig, result: &Value) -> String {
    let body = serde_json::json!({ "config": config, "result": result });
    let bytes = serde_json::to_vec(&body).expect("json values serialize");
    hex::encode(Sha256::digest(&bytes))
}

/// `--threads`, else `ERGM_THREADS`, else rayon's default.
pub fn thread_count(flag: Option<usize>, env: Option<&str>) -> Result<Option<usize>, CliError> {
    let n = match (flag, env) {
        (Some(n), _) => n,
        (None, Some(s)) => s.trim().parse::<usize>().map_err(|_| {
            CliError::Usage(format!("{THREADS_ENV}={s:?} is not a positive integer"))
        })?,
        (None, None) => return Ok(None),
    };
    if n == 0 {
        return Err(CliError::Usage("thread count must be positive".into()));
    }
    Ok(Some(n))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Explicit path, else `<output-dir>/<default_name>`, else nothing.
fn artifact_path(explicit: Option<PathBuf>, dir: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    explicit.or_else(|| dir.map(|d| d.join(default_name)))
}

struct CsvTargets {
    cells: Option<PathBuf>,
    transitions: Option<PathBuf>,
    curve: Option<PathBuf>,
    grid: Option<PathBuf>,
    grid_resolution: Option<usize>,
}

fn csv_targets(cmd: &CommandArgs, file: &FileConfig, dir: Option<&Path>) -> CsvTargets {
    let mut t = CsvTargets {
        cells: None,
        transitions: None,
        curve: None,
        grid: None,
        grid_resolution: None,
    };
    match cmd {
        CommandArgs::PhaseScan(a) => {
            let f = &file.phase_scan;
            t.cells = artifact_path(a.csv_out.clone().or(f.csv_out.clone()), dir, "phase-scan.csv");
            t.transitions = artifact_path(
                a.transitions_out.clone().or(f.transitions_out.clone()),
                dir,
                "phase-scan-transitions.csv",
            );
        }
        CommandArgs::Curve(a) => {
            t.curve = artifact_path(a.csv_out.clone().or(file.curve.csv_out.clone()), dir, "curve.csv");
        }
        CommandArgs::Solve(a) => {
            let f = &file.solve;
            t.grid = a.grid_csv.clone().or(f.grid_csv.clone());
            if t.grid.is_some() {
                t.grid_resolution = Some(
                    a.grid_resolution
                        .or(f.grid_resolution)
                        .unwrap_or(config::DEFAULT_GRID_RESOLUTION),
                );
            }
        }
        _ => {}
    }
    t
}

fn execute(cli: Cli, env_threads: Option<&str>) -> Result<String, CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let threads = thread_count(cli.threads.or(file.threads), env_threads)?;
    let config = config::resolve(&cli.command, &file, cli.seed, cli.output_dir.clone())?;
    let dir = config.output_dir.clone();
    let targets = csv_targets(&cli.command, &file, dir.as_deref());

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let outcome = pool.install(|| run::execute(&config, targets.grid_resolution))?;

    for (kind, text) in &outcome.csv {
        let path = match kind {
            CsvKind::Cells => &targets.cells,
            CsvKind::Transitions => &targets.transitions,
            CsvKind::Curve => &targets.curve,
            CsvKind::Grid => &targets.grid,
        };
        if let Some(p) = path {
            write_file(p, text)?;
        }
    }

    let json_name = format!("{}.json", config.command.name());
    if let Some(path) = artifact_path(cli.json_out.clone(), dir.as_deref(), &json_name) {
        let envelope = Envelope {
            schema_version: SCHEMA_VERSION,
            config: &config,
            content_hash: content_hash(&config, &outcome.result),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            result: &outcome.result,
        };
        let mut text = serde_json::to_string_pretty(&envelope).expect("json values serialize");
        text.push('\n');
        write_file(&path, &text)?;
    }
    Ok(outcome.summary)
}

/// Parses `argv` (program name first), runs, prints and returns the exit code.
pub fn run<I, T>(argv: I, env_threads: Option<&str>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli, env_threads) {
        Ok(summary) => {
            let mut out = std::io::stdout().lock();
            if writeln!(out, "{summary}").is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
