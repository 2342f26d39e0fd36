//! Command-line surface. Every subcommand parameter is optional here so that a
//! config file can supply it; [`crate::config`] resolves flags, file values and
//! defaults into a [`crate::config::RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "cergm", version, about = "Edge-constrained ERGM variational solver")]
pub struct Cli {
    /// TOML file with parameter values; flags win on conflict.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (falls back to ERGM_THREADS, then all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for JSON and CSV artifacts.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// Path of the JSON result; defaults to `<output-dir>/<command>.json`.
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Maximise the variational objective at one (epsilon, beta2).
    Solve(SolveArgs),
    /// Classify a grid of (epsilon, beta2) cells and bisect boundaries.
    PhaseScan(ScanArgs),
    /// Tabulate the scalar transition curve.
    Curve(CurveArgs),
    /// Two-star stationary point at epsilon = 1/2 and its second variation.
    Stationary(StationaryArgs),
    /// Bracket for psi/beta2 at large coupling.
    Limits(PointArgs),
    /// Closed-form phase certificates at one point.
    Certify(PointArgs),
    /// Finite-n ground truth.
    #[command(subcommand)]
    Oracle(OracleArgs),
}

#[derive(Debug, Subcommand)]
pub enum OracleArgs {
    /// Exact sum over labelled graphs (n <= 7).
    Enumerate(EnumerateArgs),
    /// Edge-swap Metropolis chain at fixed edge count.
    Mcmc(McmcArgs),
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveArgs {
    /// `edge`, `triangle`, `star:p` or JSON `{"v": .., "edges": [[i,j], ..]}`.
    #[arg(long)]
    pub subgraph: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Option<f64>,
    /// Maximum number of blocks.
    #[arg(long)]
    pub blocks: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Run the numerical search even when a certificate decides the point.
    #[arg(long)]
    #[serde(default)]
    pub audit: bool,
    /// Also write the optimiser on an r x r grid as CSV.
    #[arg(long)]
    pub grid_csv: Option<PathBuf>,
    #[arg(long)]
    pub grid_resolution: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanArgs {
    #[arg(long)]
    pub subgraph: Option<String>,
    /// `start:end:count`.
    #[arg(long, allow_hyphen_values = true)]
    pub eps_range: Option<String>,
    /// `start:end:count`.
    #[arg(long, allow_hyphen_values = true)]
    pub beta2_range: Option<String>,
    #[arg(long)]
    pub blocks: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Bisection width for boundary cells.
    #[arg(long)]
    pub refine_tol: Option<f64>,
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
    #[arg(long)]
    pub transitions_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveArgs {
    /// Star order.
    #[arg(long)]
    pub p: Option<u32>,
    /// `start:end:count`; every value must exceed the curve endpoint.
    #[arg(long, allow_hyphen_values = true)]
    pub beta2_range: Option<String>,
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationaryArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointArgs {
    #[arg(long)]
    pub subgraph: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Window half-width on 2m/n^2.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub subgraph: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Option<f64>,
    #[arg(long)]
    pub top_k: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McmcArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Fixed number of edges.
    #[arg(long)]
    pub edge_count: Option<usize>,
    /// Alternative to --edge-count: round(epsilon n^2 / 2).
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub subgraph: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
}
