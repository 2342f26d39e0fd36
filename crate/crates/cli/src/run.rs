//! Executes a resolved [`RunConfig`].

use cergm_core::oracle::{enumerate_psi_with, mcmc_sample, EnumerationOptions};
use cergm_core::scalar_phase::{critical_point, transition_curve};
use cergm_core::scan::phase_scan;
use cergm_core::solver::{
    certify, limit_ratio, saddle_check, solve_canonical, solve_numerical, stationary_delta_newton,
    stationary_graphon, uniform_objective,
};
use cergm_core::SubgraphSpec;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;

use crate::config::{Command, RunConfig};
use crate::error::CliError;

/// CSV artifacts a command can emit, keyed by role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvKind {
    Cells,
    Transitions,
    Curve,
    Grid,
}

pub struct Outcome {
    pub summary: String,
    pub result: Value,
    pub csv: Vec<(CsvKind, String)>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result types serialize")
}

fn spec(s: &str) -> Result<SubgraphSpec, CliError> {
    Ok(s.parse()?)
}

/// `grid_resolution` is only used by `solve` when a grid CSV was requested.
pub fn execute(config: &RunConfig, grid_resolution: Option<usize>) -> Result<Outcome, CliError> {
    match &config.command {
        Command::Solve {
            subgraph,
            epsilon,
            beta2,
            blocks,
            restarts,
            audit,
        } => {
            let h = spec(subgraph)?;
            let solver = config.solver_config(*blocks, *restarts);
            let r = solve_canonical(&h, *epsilon, *beta2, &solver)?;
            let numerical = if *audit && r.certificate.is_some() {
                Some(solve_numerical(&h, *epsilon, *beta2, &solver)?)
            } else {
                None
            };
            let mut summary = format!(
                "{} psi={:.10} gain={:.3e} K={}",
                r.classification,
                r.psi,
                r.gain_over_uniform(),
                r.diagnostics.k_effective
            );
            if let Some(c) = r.certificate {
                let _ = write!(summary, " ({c})");
            }
            let mut csv = Vec::new();
            if let Some(res) = grid_resolution {
                csv.push((CsvKind::Grid, r.best.to_grid_csv(res)));
            }
            Ok(Outcome {
                summary,
                result: json!({
                    "solution": r,
                    "gain_over_uniform": r.gain_over_uniform(),
                    "degree_profile": r.best.degree_profile(),
                    "numerical_audit": numerical,
                }),
                csv,
            })
        }
        Command::PhaseScan {
            subgraph,
            eps_range,
            beta2_range,
            blocks,
            restarts,
            refine_tol,
        } => {
            let h = spec(subgraph)?;
            let solver = config.solver_config(*blocks, *restarts);
            let scan = phase_scan(&h, eps_range, beta2_range, &solver, *refine_tol)?;
            let mut summary = format!("{} cells, {} transitions", scan.cells.len(), scan.transitions.len());
            for t in &scan.transitions {
                let _ = write!(summary, "; epsilon={} beta2={:.5}", t.epsilon, t.estimate());
            }
            Ok(Outcome {
                summary,
                csv: vec![
                    (CsvKind::Cells, scan.cells_csv()),
                    (CsvKind::Transitions, scan.transitions_csv()),
                ],
                result: to_value(&scan),
            })
        }
        Command::Curve { p, beta2_range } => {
            let points = beta2_range
                .values()
                .into_iter()
                .map(|b| transition_curve(b, *p))
                .collect::<Result<Vec<_>, _>>()?;
            let (b1c, b2c) = critical_point(*p);
            let mut csv = String::new();
            let _ = writeln!(csv, "# transition curve of the scalar problem with p = {p}");
            csv.push_str("# beta2: quadratic coupling\n");
            csv.push_str("# beta1: linear coupling at which both maximizers tie\n");
            csv.push_str("# x1, x2: the two global maximizers, x1 < x2\n");
            csv.push_str("beta2,beta1,x1,x2\n");
            for q in &points {
                let _ = writeln!(csv, "{},{},{},{}", q.beta2, q.beta1, q.x1, q.x2);
            }
            Ok(Outcome {
                summary: format!(
                    "{} curve points for p={p}, critical point ({b1c:.6}, {b2c:.6})",
                    points.len()
                ),
                result: json!({ "critical_point": [b1c, b2c], "points": points }),
                csv: vec![(CsvKind::Curve, csv)],
            })
        }
        Command::Stationary { beta2 } => {
            let point = stationary_graphon(*beta2)?;
            let saddle = saddle_check(*beta2)?;
            let newton = stationary_delta_newton(*beta2);
            Ok(Outcome {
                summary: format!(
                    "delta={:.10} blocks={} el_residual={:.1e} second-variation={}",
                    point.delta,
                    point.graphon.num_blocks(),
                    point.el_residual,
                    serde_json::to_value(saddle.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
                ),
                result: json!({
                    "stationary": point,
                    "delta_newton": newton,
                    "second_variation": saddle,
                }),
                csv: Vec::new(),
            })
        }
        Command::Limits {
            subgraph,
            epsilon,
            beta2,
        } => {
            let h = spec(subgraph)?;
            let (lo, hi) = limit_ratio(&h, *epsilon, *beta2)?;
            Ok(Outcome {
                summary: format!("bracket [{lo:.6}, {hi:.6}]"),
                result: json!({ "lower": lo, "upper": hi }),
                csv: Vec::new(),
            })
        }
        Command::Certify {
            subgraph,
            epsilon,
            beta2,
        } => {
            let h = spec(subgraph)?;
            let cert = certify(&h, *epsilon, *beta2)?;
            let summary = match cert {
                Some(c) if c.proves_uniform() => format!("uniform-certified ({c})"),
                Some(c) => format!("nonuniform-certified ({c})"),
                None => "no certificate applies".to_string(),
            };
            Ok(Outcome {
                summary,
                result: json!({
                    "certificate": cert,
                    "proves_uniform": cert.map(|c| c.proves_uniform()),
                    "uniform_psi": uniform_objective(&h, *epsilon, *beta2),
                }),
                csv: Vec::new(),
            })
        }
        Command::OracleEnumerate {
            n,
            epsilon,
            delta,
            subgraph,
            beta2,
            top_k,
        } => {
            let h = spec(subgraph)?;
            let opts = EnumerationOptions {
                top_k: *top_k,
                ..EnumerationOptions::default()
            };
            let r = enumerate_psi_with(*n, *epsilon, *delta, &h, *beta2, &opts)?;
            Ok(Outcome {
                summary: format!(
                    "psi_n_delta={:.12} admitted={} edge_counts={:?} mean_t={:.10}",
                    r.psi_n_delta, r.num_admitted, r.edge_counts, r.mean_t
                ),
                result: to_value(&r),
                csv: Vec::new(),
            })
        }
        Command::OracleMcmc {
            n,
            edge_count,
            subgraph,
            beta2,
            steps,
            burn_in,
        } => {
            let h = spec(subgraph)?;
            let r = mcmc_sample(*n, *edge_count, &h, *beta2, *steps, *burn_in, config.seed)?;
            let se = r
                .std_error
                .map(|s| format!("{s:.2e}"))
                .unwrap_or_else(|| "n/a".into());
            let mut summary = format!(
                "mean_t={:.8} se={se} acceptance={:.4}",
                r.mean_t, r.acceptance_rate
            );
            if r.frozen {
                summary.push_str(" (frozen: no swap possible)");
            }
            Ok(Outcome {
                summary,
                result: to_value(&r),
                csv: Vec::new(),
            })
        }
    }
}
