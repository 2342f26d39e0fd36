//! The constrained variational problem
//! `ψ(ε, β₂) = sup { β₂ t(H, h) − ½ ∬ I(h) : ∬ h = ε }` over block graphons,
//! together with the closed-form thresholds, certificates, and the analysis of
//! the two-star stationary point.

mod ascent;
mod audit;
mod certify;
mod fixed_point;
mod repulsive;
mod starts;
mod stationary;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_open_unit, Error, Result};
use crate::graphon::{neg_entropy_unchecked, BlockGraphon};
use crate::subgraph::SubgraphSpec;

pub use ascent::{local_ascent, LocalOptimum};
pub use audit::{monotonicity_audit, MonotonicityReport};
pub use certify::{certify, limit_ratio, threshold_twostar, threshold_ve, Certificate};
pub use fixed_point::{
    el_fixed_point_star, star_fixed_point_residual, FixedPointOptions, FixedPointResidual,
    FixedPointResult,
};
pub use repulsive::{repulsive_critical_beta2, repulsive_triangle_scan, RepulsiveScan};
pub use starts::StartKind;
pub use stationary::{
    saddle_check, second_variation, stationary_delta, stationary_delta_newton,
    stationary_graphon, SaddleReport, SaddleVerdict, StationaryPoint, StepPerturbation,
};

/// Mixing constant separating per-restart seeds.
const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;
/// `block_distance` below which a numerical optimum counts as uniform.
const UNIFORM_DISTANCE: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Number of blocks `K` of the search space.
    pub max_blocks: usize,
    /// Total number of local ascents, structured starts included.
    pub restarts: usize,
    /// Families of structured starts; random starts fill up to `restarts`.
    pub starts: Vec<StartKind>,
    /// Values are kept in `[m, 1 − m]` during ascent.
    pub interior_margin: f64,
    pub tol_objective: f64,
    pub tol_constraint: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_blocks: 4,
            restarts: 24,
            starts: StartKind::ALL.to_vec(),
            interior_margin: 1e-9,
            tol_objective: 1e-9,
            tol_constraint: 1e-10,
            max_iterations: 4000,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_blocks == 0 {
            return Err(Error::domain("max_blocks", 0.0, "positive integers"));
        }
        for (name, v) in [
            ("tol_objective", self.tol_objective),
            ("tol_constraint", self.tol_constraint),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(name, v, "positive reals"));
            }
        }
        if !(self.interior_margin > 0.0 && self.interior_margin < 0.5) {
            return Err(Error::domain("interior_margin", self.interior_margin, "(0, 0.5)"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    UniformCertified,
    UniformNumerical,
    NonuniformCertified,
    NonuniformNumerical,
}

impl Classification {
    pub fn is_uniform(self) -> bool {
        matches!(
            self,
            Classification::UniformCertified | Classification::UniformNumerical
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::UniformCertified => "uniform-certified",
            Classification::UniformNumerical => "uniform-numerical",
            Classification::NonuniformCertified => "nonuniform-certified",
            Classification::NonuniformNumerical => "nonuniform-numerical",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Iterations of the ascent that produced the best point.
    pub iterations: usize,
    pub constraint_residual: f64,
    /// Largest minus smallest objective over restarts.
    pub restart_spread: f64,
    pub restarts_run: usize,
    /// Restarts whose ascent met the first-order stopping rule.
    pub restarts_converged: usize,
    /// Blocks of the returned graphon.
    pub k_effective: usize,
    /// Lagrange multiplier of the edge constraint at the returned point.
    pub multiplier: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub best: BlockGraphon,
    pub psi: f64,
    /// Objective of the uniform graphon, `β₂ ε^{e(H)} − ½ I(ε)`.
    pub uniform_psi: f64,
    pub classification: Classification,
    pub certificate: Option<Certificate>,
    pub diagnostics: Diagnostics,
    /// Other restart optima within tolerance of the best but structurally
    /// different from it (for instance `h` and `1 − h`).
    pub alternates: Vec<BlockGraphon>,
}

impl SolveResult {
    /// `ψ − (β₂ ε^{e(H)} − ½ I(ε))`, never negative.
    pub fn gain_over_uniform(&self) -> f64 {
        self.psi - self.uniform_psi
    }
}

/// `β₂ ε^{e(H)} − ½ I(ε)`.
pub fn uniform_objective(h: &SubgraphSpec, epsilon: f64, beta2: f64) -> f64 {
    beta2 * epsilon.powi(h.edge_count() as i32) - 0.5 * neg_entropy_unchecked(epsilon)
}

fn check_inputs(epsilon: f64, beta2: f64, config: &SolverConfig) -> Result<()> {
    check_open_unit("epsilon", epsilon)?;
    check_finite("beta2", beta2)?;
    config.validate()
}

/// Solves the constrained problem: certificates first, multistart ascent for
/// everything they do not settle on their own.
pub fn solve_canonical(
    h: &SubgraphSpec,
    epsilon: f64,
    beta2: f64,
    config: &SolverConfig,
) -> Result<SolveResult> {
    check_inputs(epsilon, beta2, config)?;
    let certificate = certify(h, epsilon, beta2)?;
    match certificate {
        Some(cert) if cert.proves_uniform() => {
            let best = BlockGraphon::uniform(epsilon)?;
            let psi = uniform_objective(h, epsilon, beta2);
            Ok(SolveResult {
                best,
                psi,
                uniform_psi: psi,
                classification: Classification::UniformCertified,
                certificate,
                diagnostics: Diagnostics {
                    k_effective: 1,
                    multiplier: uniform_multiplier(h, epsilon, beta2),
                    ..Diagnostics::default()
                },
                alternates: Vec::new(),
            })
        }
        Some(cert) => {
            let mut result = solve_numerical(h, epsilon, beta2, config)?;
            result.certificate = Some(cert);
            result.classification = Classification::NonuniformCertified;
            Ok(result)
        }
        None => solve_numerical(h, epsilon, beta2, config),
    }
}

/// First-order multiplier at the uniform graphon:
/// `β₁ = β₂ e(H) ε^{e(H)−1} − ½ log(ε/(1−ε))` in the normalisation
/// `log(h/(1−h)) = 2β₂ ∂t/∂h − 2β₁`.
fn uniform_multiplier(h: &SubgraphSpec, epsilon: f64, beta2: f64) -> f64 {
    let e = h.edge_count() as i32;
    beta2 * e as f64 * epsilon.powi(e - 1) - 0.5 * (epsilon / (1.0 - epsilon)).ln()
}

/// Multistart ascent without certificates. Classifies from the numbers alone.
pub fn solve_numerical(
    h: &SubgraphSpec,
    epsilon: f64,
    beta2: f64,
    config: &SolverConfig,
) -> Result<SolveResult> {
    check_inputs(epsilon, beta2, config)?;
    let k = config.max_blocks;
    let raw: Vec<(StartKind, BlockGraphon)> =
        starts::structured_starts(&config.starts, h, epsilon, beta2)
            .into_iter()
            .filter(|(_, g)| g.num_blocks() <= k)
            .collect();
    let structured: Vec<BlockGraphon> = raw
        .iter()
        .enumerate()
        .map(|(idx, (kind, g))| {
            let noise = if *kind == StartKind::Uniform { 0.3 } else { 0.05 };
            starts::embed(g, k, noise, &mut restart_rng(config.seed, idx))
        })
        .collect();
    let random_count = if config.starts.contains(&StartKind::Random) {
        config.restarts.saturating_sub(structured.len())
    } else {
        0
    };
    let all: Vec<BlockGraphon> = structured
        .into_iter()
        .chain((0..random_count).map(|r| {
            let idx = 1_000 + r;
            starts::random_start(k, &mut restart_rng(config.seed, idx))
        }))
        .collect();
    if all.is_empty() {
        return Err(Error::Unsupported("no start fits the requested block count".into()));
    }

    let runs: Vec<Result<LocalOptimum>> = all
        .par_iter()
        .map(|start| local_ascent(h, epsilon, beta2, start, config))
        .collect();
    let mut optima = Vec::with_capacity(runs.len());
    for run in runs {
        optima.push(run?);
    }
    // exact 0/1 starts sit outside the clamped box the ascent works in
    for (o, (_, g)) in optima.iter_mut().zip(&raw) {
        let residual = (g.edge_density() - epsilon).abs();
        if residual > config.tol_constraint {
            continue;
        }
        let value = g.objective(h, beta2)?;
        if value > o.objective {
            o.graphon = g.clone();
            o.objective = value;
            o.constraint_residual = residual;
        }
    }
    let feasible: Vec<&LocalOptimum> = optima
        .iter()
        .filter(|o| o.constraint_residual <= config.tol_constraint)
        .collect();
    if feasible.is_empty() {
        return Err(Error::NonConvergence(
            "no restart met the edge-density constraint".into(),
        ));
    }
    let best = feasible
        .iter()
        .copied()
        .reduce(|a, b| if b.objective > a.objective { b } else { a })
        .unwrap();
    let lo = feasible.iter().map(|o| o.objective).fold(f64::INFINITY, f64::min);
    let uniform_psi = uniform_objective(h, epsilon, beta2);
    let uniform = BlockGraphon::uniform(epsilon)?;
    let canonical = best.graphon.canonical();
    let gain = best.objective - uniform_psi;

    // a gain within tolerance counts as uniform even when the maximiser found
    // sits far from the constant graphon (a flat direction)
    let nonuniform = gain > config.tol_objective;
    let (graphon, psi, classification) = if nonuniform {
        (canonical, best.objective, Classification::NonuniformNumerical)
    } else {
        (uniform, uniform_psi, Classification::UniformNumerical)
    };
    let alternates = if nonuniform {
        let mut alts: Vec<BlockGraphon> = Vec::new();
        for o in &feasible {
            if o.objective < best.objective - config.tol_objective.max(1e-9) {
                continue;
            }
            let g = o.graphon.canonical();
            let novel = g.block_distance(&graphon) > UNIFORM_DISTANCE
                && alts.iter().all(|a| a.block_distance(&g) > UNIFORM_DISTANCE);
            if novel && alts.len() < 4 {
                alts.push(g);
            }
        }
        alts
    } else {
        Vec::new()
    };
    Ok(SolveResult {
        diagnostics: Diagnostics {
            iterations: best.iterations,
            constraint_residual: (graphon.edge_density() - epsilon).abs(),
            restart_spread: best.objective - lo,
            restarts_run: optima.len(),
            restarts_converged: optima.iter().filter(|o| o.converged).count(),
            k_effective: graphon.num_blocks(),
            multiplier: if nonuniform {
                best.multiplier
            } else {
                uniform_multiplier(h, epsilon, beta2)
            },
        },
        best: graphon,
        psi,
        uniform_psi,
        classification,
        certificate: None,
        alternates,
    })
}

fn restart_rng(seed: u64, idx: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add((idx as u64).wrapping_mul(SEED_STRIDE)))
}
