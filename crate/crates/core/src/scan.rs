//! Phase-plane scans over `(ε, β₂)` grids with bisection of the
//! uniform/non-uniform boundary along each `ε` row.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{certify, solve_canonical, solve_numerical, Certificate, Classification, SolverConfig};
use crate::subgraph::SubgraphSpec;

pub const DEFAULT_REFINE_TOL: f64 = 1e-4;

/// `count` evenly spaced points from `start` to `end` inclusive, written
/// `start:end:count`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearRange {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl LinearRange {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() {
            return Err(Error::domain("range bound", if start.is_finite() { end } else { start }, "finite reals"));
        }
        if count == 0 {
            return Err(Error::domain("range count", 0.0, "positive integers"));
        }
        if count > 1 && start > end {
            return Err(Error::domain("range end", end, "values >= start"));
        }
        Ok(LinearRange { start, end, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.end } else { self.start + step * i as f64 })
            .collect()
    }
}

impl FromStr for LinearRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Unsupported(format!("range {s:?} is not start:end:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].trim().parse::<f64>().map_err(|_| bad())?;
        let end = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
        let count = parts[2].trim().parse::<usize>().map_err(|_| bad())?;
        LinearRange::new(start, end, count)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub epsilon: f64,
    pub beta2: f64,
    pub psi: f64,
    pub classification: Classification,
    pub certificate: Option<Certificate>,
    pub k_effective: usize,
    /// `ψ` minus the constant-graphon value.
    pub delta_over_uniform: f64,
}

/// A bracketed boundary point on one `ε` row. `lower` is on the side of the
/// grid cell nearer zero coupling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub epsilon: f64,
    pub lower: f64,
    pub upper: f64,
    /// Classification at `lower`.
    pub uniform_below: bool,
}

impl Transition {
    pub fn estimate(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseScan {
    pub subgraph: String,
    /// Row-major: `ε` outer, `β₂` inner.
    pub cells: Vec<ScanCell>,
    pub transitions: Vec<Transition>,
}

/// Uniform or not, using a certificate when one applies.
fn is_uniform(h: &SubgraphSpec, epsilon: f64, beta2: f64, config: &SolverConfig) -> Result<bool> {
    match certify(h, epsilon, beta2)? {
        Some(c) => Ok(c.proves_uniform()),
        None => Ok(solve_numerical(h, epsilon, beta2, config)?.classification.is_uniform()),
    }
}

fn bisect_row(
    h: &SubgraphSpec,
    epsilon: f64,
    (mut lo, mut hi): (f64, f64),
    uniform_lo: bool,
    config: &SolverConfig,
    tol: f64,
) -> Result<Transition> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if is_uniform(h, epsilon, mid, config)? == uniform_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Transition {
        epsilon,
        lower: lo,
        upper: hi,
        uniform_below: uniform_lo,
    })
}

/// Solves every grid cell in parallel, then bisects each change of
/// classification between neighbouring `β₂` cells down to width `refine_tol`.
pub fn phase_scan(
    h: &SubgraphSpec,
    epsilons: &LinearRange,
    betas: &LinearRange,
    config: &SolverConfig,
    refine_tol: f64,
) -> Result<PhaseScan> {
    if !(refine_tol > 0.0) {
        return Err(Error::domain("refine_tol", refine_tol, "positive reals"));
    }
    let eps = epsilons.values();
    let bs = betas.values();
    let jobs: Vec<(f64, f64)> = eps
        .iter()
        .flat_map(|&e| bs.iter().map(move |&b| (e, b)))
        .collect();
    let cells: Vec<ScanCell> = jobs
        .par_iter()
        .map(|&(epsilon, beta2)| {
            let r = solve_canonical(h, epsilon, beta2, config)?;
            Ok(ScanCell {
                epsilon,
                beta2,
                psi: r.psi,
                classification: r.classification,
                certificate: r.certificate,
                k_effective: r.diagnostics.k_effective,
                delta_over_uniform: r.psi - r.uniform_psi,
            })
        })
        .collect::<Result<_>>()?;

    let brackets: Vec<(f64, (f64, f64), bool)> = cells
        .chunks(bs.len())
        .flat_map(|row| {
            row.windows(2).filter_map(|w| {
                let (a, b) = (&w[0], &w[1]);
                let (ua, ub) = (a.classification.is_uniform(), b.classification.is_uniform());
                (ua != ub).then_some((a.epsilon, (a.beta2, b.beta2), ua))
            })
        })
        .collect();
    let transitions = brackets
        .par_iter()
        .map(|&(e, bracket, ua)| bisect_row(h, e, bracket, ua, config, refine_tol))
        .collect::<Result<_>>()?;
    Ok(PhaseScan {
        subgraph: h.label(),
        cells,
        transitions,
    })
}

impl PhaseScan {
    pub fn cells_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# phase scan for {}\n", self.subgraph));
        out.push_str("# epsilon: edge density constraint\n");
        out.push_str("# beta2: subgraph coupling\n");
        out.push_str("# psi: best objective found (certified uniform cells use the exact constant value)\n");
        out.push_str("# classification: uniform-certified | uniform-numerical | nonuniform-certified | nonuniform-numerical\n");
        out.push_str("# certificate: rule that decided the cell, empty if none\n");
        out.push_str("# K_effective: blocks in the reported optimizer\n");
        out.push_str("# delta_over_uniform: psi minus the constant-graphon value\n");
        out.push_str("epsilon,beta2,psi,classification,certificate,K_effective,delta_over_uniform\n");
        for c in &self.cells {
            let cert = c.certificate.map(|x| x.description()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                c.epsilon,
                c.beta2,
                c.psi,
                c.classification.as_str(),
                csv_field(&cert),
                c.k_effective,
                c.delta_over_uniform
            );
        }
        out
    }

    pub fn transitions_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# classification changes for {}\n", self.subgraph));
        out.push_str("# epsilon: edge density constraint\n");
        out.push_str("# beta2_lower, beta2_upper: bisection bracket\n");
        out.push_str("# beta2_estimate: bracket midpoint\n");
        out.push_str("# uniform_below: classification at beta2_lower\n");
        out.push_str("epsilon,beta2_lower,beta2_upper,beta2_estimate,uniform_below\n");
        for t in &self.transitions {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                t.epsilon,
                t.lower,
                t.upper,
                t.estimate(),
                t.uniform_below
            );
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
