//! Resolved run configuration and the TOML file format that can supply it.

use std::path::{Path, PathBuf};

use cergm_core::scan::{LinearRange, DEFAULT_REFINE_TOL};
use cergm_core::solver::SolverConfig;
use cergm_core::SubgraphSpec;
use serde::{Deserialize, Serialize};

use crate::args::{
    CommandArgs, CurveArgs, EnumerateArgs, McmcArgs, OracleArgs, PointArgs, ScanArgs, SolveArgs,
    StationaryArgs,
};
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_MCMC_STEPS: usize = 100_000;
pub const DEFAULT_MCMC_BURN_IN: usize = 10_000;
pub const DEFAULT_GRID_RESOLUTION: usize = 200;

/// Everything that determines a run's result. Artifact paths are left out so
/// that the same computation hashes the same wherever it is written.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema_version: u32,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    Solve {
        subgraph: String,
        epsilon: f64,
        beta2: f64,
        blocks: usize,
        restarts: usize,
        audit: bool,
    },
    PhaseScan {
        subgraph: String,
        eps_range: LinearRange,
        beta2_range: LinearRange,
        blocks: usize,
        restarts: usize,
        refine_tol: f64,
    },
    Curve {
        p: u32,
        beta2_range: LinearRange,
    },
    Stationary {
        beta2: f64,
    },
    Limits {
        subgraph: String,
        epsilon: f64,
        beta2: f64,
    },
    Certify {
        subgraph: String,
        epsilon: f64,
        beta2: f64,
    },
    OracleEnumerate {
        n: usize,
        epsilon: f64,
        delta: f64,
        subgraph: String,
        beta2: f64,
        top_k: usize,
    },
    OracleMcmc {
        n: usize,
        edge_count: usize,
        subgraph: String,
        beta2: f64,
        steps: usize,
        burn_in: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::PhaseScan { .. } => "phase-scan",
            Command::Curve { .. } => "curve",
            Command::Stationary { .. } => "stationary",
            Command::Limits { .. } => "limits",
            Command::Certify { .. } => "certify",
            Command::OracleEnumerate { .. } => "oracle-enumerate",
            Command::OracleMcmc { .. } => "oracle-mcmc",
        }
    }
}

impl RunConfig {
    pub fn solver_config(&self, blocks: usize, restarts: usize) -> SolverConfig {
        SolverConfig {
            max_blocks: blocks,
            restarts,
            seed: self.seed,
            ..SolverConfig::default()
        }
    }
}

/// Layout of a `--config` file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub solve: SolveArgs,
    #[serde(default)]
    pub phase_scan: ScanArgs,
    #[serde(default)]
    pub curve: CurveArgs,
    #[serde(default)]
    pub stationary: StationaryArgs,
    #[serde(default)]
    pub limits: PointArgs,
    #[serde(default)]
    pub certify: PointArgs,
    #[serde(default)]
    pub oracle: OracleFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleFile {
    #[serde(default)]
    pub enumerate: EnumerateArgs,
    #[serde(default)]
    pub mcmc: McmcArgs,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(file)
        .ok_or_else(|| CliError::Usage(format!("missing required parameter --{name}")))
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn subgraph(flag: Option<String>, file: Option<String>, default: Option<&str>) -> Result<String, CliError> {
    let s = match default {
        Some(d) => pick(flag, file, d.to_string()),
        None => required(flag, file, "subgraph")?,
    };
    // validate early; the stored string is what the user wrote
    s.parse::<SubgraphSpec>()?;
    Ok(s)
}

fn range(flag: Option<String>, file: Option<String>, name: &str) -> Result<LinearRange, CliError> {
    Ok(required(flag, file, name)?.parse::<LinearRange>()?)
}

/// Flags first, then the file, then built-in defaults.
pub fn resolve(
    cmd: &CommandArgs,
    file: &FileConfig,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
) -> Result<RunConfig, CliError> {
    let defaults = SolverConfig::default();
    let command = match cmd {
        CommandArgs::Solve(a) => {
            let f = file.solve.clone();
            Command::Solve {
                subgraph: subgraph(a.subgraph.clone(), f.subgraph, None)?,
                epsilon: required(a.epsilon, f.epsilon, "epsilon")?,
                beta2: required(a.beta2, f.beta2, "beta2")?,
                blocks: pick(a.blocks, f.blocks, defaults.max_blocks),
                restarts: pick(a.restarts, f.restarts, defaults.restarts),
                audit: a.audit || f.audit,
            }
        }
        CommandArgs::PhaseScan(a) => {
            let f = file.phase_scan.clone();
            Command::PhaseScan {
                subgraph: subgraph(a.subgraph.clone(), f.subgraph, None)?,
                eps_range: range(a.eps_range.clone(), f.eps_range, "eps-range")?,
                beta2_range: range(a.beta2_range.clone(), f.beta2_range, "beta2-range")?,
                blocks: pick(a.blocks, f.blocks, defaults.max_blocks),
                restarts: pick(a.restarts, f.restarts, defaults.restarts),
                refine_tol: pick(a.refine_tol, f.refine_tol, DEFAULT_REFINE_TOL),
            }
        }
        CommandArgs::Curve(a) => {
            let f = file.curve.clone();
            Command::Curve {
                p: pick(a.p, f.p, 2),
                beta2_range: range(a.beta2_range.clone(), f.beta2_range, "beta2-range")?,
            }
        }
        CommandArgs::Stationary(a) => Command::Stationary {
            beta2: required(a.beta2, file.stationary.beta2, "beta2")?,
        },
        CommandArgs::Limits(a) | CommandArgs::Certify(a) => {
            let f = match cmd {
                CommandArgs::Limits(_) => file.limits.clone(),
                _ => file.certify.clone(),
            };
            let subgraph = subgraph(a.subgraph.clone(), f.subgraph, None)?;
            let epsilon = required(a.epsilon, f.epsilon, "epsilon")?;
            let beta2 = required(a.beta2, f.beta2, "beta2")?;
            if matches!(cmd, CommandArgs::Limits(_)) {
                Command::Limits { subgraph, epsilon, beta2 }
            } else {
                Command::Certify { subgraph, epsilon, beta2 }
            }
        }
        CommandArgs::Oracle(OracleArgs::Enumerate(a)) => {
            let f = file.oracle.enumerate.clone();
            Command::OracleEnumerate {
                n: required(a.n, f.n, "n")?,
                epsilon: required(a.epsilon, f.epsilon, "epsilon")?,
                delta: required(a.delta, f.delta, "delta")?,
                subgraph: subgraph(a.subgraph.clone(), f.subgraph, Some("star:2"))?,
                beta2: pick(a.beta2, f.beta2, 0.0),
                top_k: pick(a.top_k, f.top_k, cergm_core::oracle::DEFAULT_TOP_K),
            }
        }
        CommandArgs::Oracle(OracleArgs::Mcmc(a)) => {
            let f = file.oracle.mcmc.clone();
            let n = required(a.n, f.n, "n")?;
            let edge_count = match (a.edge_count, a.epsilon, f.edge_count, f.epsilon) {
                (Some(m), _, _, _) => m,
                (None, Some(e), _, _) => edge_count_for(n, e)?,
                (None, None, Some(m), _) => m,
                (None, None, None, Some(e)) => edge_count_for(n, e)?,
                _ => {
                    return Err(CliError::Usage(
                        "missing required parameter --edge-count (or --epsilon)".into(),
                    ))
                }
            };
            Command::OracleMcmc {
                n,
                edge_count,
                subgraph: subgraph(a.subgraph.clone(), f.subgraph, Some("star:2"))?,
                beta2: pick(a.beta2, f.beta2, 0.0),
                steps: pick(a.steps, f.steps, DEFAULT_MCMC_STEPS),
                burn_in: pick(a.burn_in, f.burn_in, DEFAULT_MCMC_BURN_IN),
            }
        }
    };
    Ok(RunConfig {
        schema_version: SCHEMA_VERSION,
        seed: seed.or(file.seed).unwrap_or(0),
        output_dir: output_dir.or_else(|| file.output_dir.clone()),
        command,
    })
}

/// `round(ε n² / 2)`.
fn edge_count_for(n: usize, epsilon: f64) -> Result<usize, CliError> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(cergm_core::Error::Domain {
            name: "epsilon",
            value: epsilon,
            expected: "[0, 1]",
        }
        .into());
    }
    Ok((epsilon * (n * n) as f64 / 2.0).round() as usize)
}
