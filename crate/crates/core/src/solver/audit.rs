use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::subgraph::SubgraphSpec;

use super::{solve_canonical, Classification, SolverConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub beta2: f64,
    pub classification: Classification,
    pub psi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub epsilon: f64,
    /// Sorted by `β₂`.
    pub entries: Vec<AuditEntry>,
    /// `β₂` values classified uniform although a smaller `|β₂|` of the same
    /// sign was non-uniform. These point at too few restarts, not at theory.
    pub violations: Vec<f64>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Solves at every `β₂` and checks that non-uniformity, once reached, persists
/// as `|β₂|` grows on each side of zero.
pub fn monotonicity_audit(
    h: &SubgraphSpec,
    epsilon: f64,
    beta2_list: &[f64],
    config: &SolverConfig,
) -> Result<MonotonicityReport> {
    let mut betas = beta2_list.to_vec();
    betas.sort_by(f64::total_cmp);
    let mut entries = Vec::with_capacity(betas.len());
    for &b in &betas {
        let r = solve_canonical(h, epsilon, b, config)?;
        entries.push(AuditEntry {
            beta2: b,
            classification: r.classification,
            psi: r.psi,
        });
    }
    let mut violations = Vec::new();
    let mut seen = false;
    for e in entries.iter().filter(|e| e.beta2 > 0.0) {
        if !e.classification.is_uniform() {
            seen = true;
        } else if seen {
            violations.push(e.beta2);
        }
    }
    seen = false;
    for e in entries.iter().rev().filter(|e| e.beta2 < 0.0) {
        if !e.classification.is_uniform() {
            seen = true;
        } else if seen {
            violations.push(e.beta2);
        }
    }
    violations.sort_by(f64::total_cmp);
    Ok(MonotonicityReport {
        epsilon,
        entries,
        violations,
    })
}
