//! Feasible ascent for `β₂ t(H, h) − ½ ∬ I(h)` over `K`-block graphons with
//! `∬ h = ε`.
//!
//! Values live in logit space `u = log(h / (1 − h))`, clamped to keep `h` in
//! `[m, 1 − m]`. Every iterate is exactly feasible: after any move the logits
//! are shifted by a common scalar chosen by bisection so that the edge density
//! is restored.

use crate::error::{Error, Result};
use crate::graphon::{logistic, logit, neg_entropy_unchecked, BlockGraphon};
use crate::subgraph::{block_density, SubgraphSpec, DEFAULT_BLOCK_BUDGET};

use super::SolverConfig;

/// Fractions below this are removed during ascent.
const DROP_FRACTION: f64 = 1e-10;
/// Blocks whose rows agree within this are candidates for merging.
const CONSOLIDATE_TOL: f64 = 1e-3;
/// Values this close to 0 or 1 are candidates for snapping.
const SNAP_TOL: f64 = 1e-6;

/// Outcome of one local ascent.
#[derive(Clone, Debug)]
pub struct LocalOptimum {
    pub graphon: BlockGraphon,
    pub objective: f64,
    pub iterations: usize,
    /// `|∬ h − ε|` at the returned point.
    pub constraint_residual: f64,
    /// Max deviation of the logits from the first-order condition.
    pub stationarity: f64,
    /// Lagrange multiplier of the edge constraint (the `β₁` of the
    /// first-order condition).
    pub multiplier: f64,
    pub converged: bool,
}

pub(crate) struct Problem<'a> {
    pub h: &'a SubgraphSpec,
    pub epsilon: f64,
    pub beta2: f64,
    pub clamp: f64,
}

impl<'a> Problem<'a> {
    pub fn new(h: &'a SubgraphSpec, epsilon: f64, beta2: f64, margin: f64) -> Self {
        Problem {
            h,
            epsilon,
            beta2,
            clamp: ((1.0 - margin) / margin).ln(),
        }
    }

    pub fn objective(&self, c: &[f64], vals: &[f64]) -> Result<f64> {
        let t = if self.beta2 == 0.0 {
            0.0
        } else {
            block_density(self.h, c, vals, DEFAULT_BLOCK_BUDGET, false)?.value
        };
        Ok(self.beta2 * t - 0.5 * weighted(c, vals, neg_entropy_unchecked))
    }

    fn values(&self, u: &[f64]) -> Vec<f64> {
        u.iter().map(|&x| logistic(x)).collect()
    }

    /// Shifts all logits by a common amount so that `Σ c_i c_j h_ij = ε`.
    fn restore(&self, c: &[f64], u: &mut [f64]) -> f64 {
        let l = self.clamp;
        let density = |mu: f64| {
            let vals: Vec<f64> = u.iter().map(|&x| logistic((x + mu).clamp(-l, l))).collect();
            weighted(c, &vals, |h| h)
        };
        let umax = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let umin = u.iter().copied().fold(f64::INFINITY, f64::min);
        let (mut lo, mut hi) = (-l - umax - 1.0, l - umin + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if density(mid) < self.epsilon {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mu = 0.5 * (lo + hi);
        for x in u.iter_mut() {
            *x = (*x + mu).clamp(-l, l);
        }
        (weighted(c, &self.values(u), |h| h) - self.epsilon).abs()
    }
}

pub(crate) fn weighted(c: &[f64], vals: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let k = c.len();
    let mut total = 0.0;
    for i in 0..k {
        let mut row = 0.0;
        for j in 0..k {
            row += c[j] * f(vals[i * k + j]);
        }
        total += c[i] * row;
    }
    total
}

struct State {
    c: Vec<f64>,
    u: Vec<f64>,
    objective: f64,
}

/// First-order data at a state.
struct Gradient {
    /// Logit residual `T_ij − u_ij`, with `T` the unconstrained target.
    residual: Vec<f64>,
    multiplier: f64,
    stationarity: f64,
    d_fractions: Vec<f64>,
}

impl Problem<'_> {
    fn gradient(&self, s: &State) -> Result<Gradient> {
        let k = s.c.len();
        let vals = self.values(&s.u);
        let bd = block_density(self.h, &s.c, &vals, DEFAULT_BLOCK_BUDGET, true)?;
        let mut residual = vec![0.0; k * k];
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..k {
            for j in 0..k {
                let w = s.c[i] * s.c[j] * if i == j { 1.0 } else { 2.0 };
                let idx = i * k + j;
                let target = if self.beta2 == 0.0 {
                    0.0
                } else {
                    2.0 * self.beta2 * bd.d_values[idx] / w
                };
                let r = target - s.u[idx];
                residual[idx] = r;
                if j >= i && s.u[idx].abs() < self.clamp {
                    let sw = w * vals[idx] * (1.0 - vals[idx]);
                    num += sw * r;
                    den += sw;
                }
            }
        }
        // the common shift that keeps the density fixed to first order
        let shift = if den > 0.0 { num / den } else { 0.0 };
        // entries pinned at the clamp only count when pushed back inside
        let stationarity = (0..k * k)
            .map(|idx| {
                let r = residual[idx] - shift;
                if (s.u[idx] >= self.clamp && r >= 0.0) || (s.u[idx] <= -self.clamp && r <= 0.0) {
                    0.0
                } else {
                    r.abs()
                }
            })
            .fold(0.0, f64::max);
        let multiplier = 0.5 * shift;
        let d_fractions = (0..k)
            .map(|m| {
                let ent: f64 = (0..k)
                    .map(|j| s.c[j] * neg_entropy_unchecked(vals[m * k + j]))
                    .sum();
                let dens: f64 = (0..k).map(|j| s.c[j] * vals[m * k + j]).sum();
                self.beta2 * bd.d_fractions[m] - ent - 2.0 * multiplier * dens
            })
            .collect();
        Ok(Gradient {
            residual,
            multiplier,
            stationarity,
            d_fractions,
        })
    }

    fn state(&self, c: Vec<f64>, mut u: Vec<f64>) -> Result<State> {
        self.restore(&c, &mut u);
        let objective = self.objective(&c, &self.values(&u))?;
        Ok(State { c, u, objective })
    }
}

/// Euclidean projection onto the probability simplex.
pub(crate) fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        cumulative += x;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    let mut out: Vec<f64> = v.iter().map(|&x| (x - theta).max(0.0)).collect();
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|x| *x /= total);
    out
}

fn accepts(new: f64, old: f64) -> bool {
    new >= old - 1e-14 * old.abs().max(1.0)
}

struct Ascent<'a, 'b> {
    problem: &'a Problem<'b>,
    value_step: f64,
    fraction_step: f64,
    optimize_fractions: bool,
}

impl Ascent<'_, '_> {
    /// One value move along the logit residual; returns the gain.
    fn value_move(&mut self, s: &mut State, g: &Gradient) -> Result<f64> {
        let mut alpha = (self.value_step * 2.0).min(1.0);
        for _ in 0..40 {
            let u: Vec<f64> = s.u.iter().zip(&g.residual).map(|(x, r)| x + alpha * r).collect();
            let trial = self.problem.state(s.c.clone(), symmetrize(u, s.c.len()))?;
            // below rounding level, only a more stationary point is accepted
            let better = trial.objective > s.objective
                || (accepts(trial.objective, s.objective)
                    && self.problem.gradient(&trial)?.stationarity < g.stationarity);
            if better {
                let gain = trial.objective - s.objective;
                *s = trial;
                self.value_step = alpha;
                return Ok(gain);
            }
            alpha *= 0.5;
        }
        self.value_step = alpha;
        Ok(0.0)
    }

    fn fraction_move(&mut self, s: &mut State, g: &Gradient) -> Result<f64> {
        let mut eta = self.fraction_step * 2.0;
        for _ in 0..40 {
            let raw: Vec<f64> = s.c.iter().zip(&g.d_fractions).map(|(c, d)| c + eta * d).collect();
            let c = project_simplex(&raw);
            let trial = self.problem.state(c, s.u.clone())?;
            if trial.objective > s.objective {
                let gain = trial.objective - s.objective;
                *s = trial;
                self.fraction_step = eta;
                return Ok(gain);
            }
            eta *= 0.5;
        }
        self.fraction_step = eta.max(1e-12);
        Ok(0.0)
    }

    fn run(&mut self, s: &mut State, max_iterations: usize, tol: f64) -> Result<(usize, Gradient, bool)> {
        let mut stalled = 0;
        let mut it = 0;
        loop {
            let g = self.problem.gradient(s)?;
            let frac_stat = if self.optimize_fractions {
                fraction_stationarity(&s.c, &g.d_fractions)
            } else {
                0.0
            };
            if g.stationarity <= 1e-10 && frac_stat <= 1e-9 {
                return Ok((it, g, true));
            }
            if it >= max_iterations || stalled >= 30 {
                return Ok((it, g, false));
            }
            it += 1;
            let mut gain = self.value_move(s, &g)?;
            if self.optimize_fractions {
                let g = self.problem.gradient(s)?;
                gain += self.fraction_move(s, &g)?;
                drop_tiny_blocks(self.problem, s)?;
            }
            // slow linear convergence near a flat direction: small gains
            // with an almost stationary point count as a stall
            if gain <= tol * 1e-6 || (gain <= tol * 1e-3 && g.stationarity <= 1e-7) {
                stalled += 1;
            } else {
                stalled = 0;
            }
        }
    }
}

fn symmetrize(mut u: Vec<f64>, k: usize) -> Vec<f64> {
    for i in 0..k {
        for j in 0..i {
            let m = 0.5 * (u[i * k + j] + u[j * k + i]);
            u[i * k + j] = m;
            u[j * k + i] = m;
        }
    }
    u
}

/// Distance between the fractions and their projected-gradient image.
fn fraction_stationarity(c: &[f64], d: &[f64]) -> f64 {
    let raw: Vec<f64> = c.iter().zip(d).map(|(c, d)| c + d).collect();
    project_simplex(&raw)
        .iter()
        .zip(c)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn drop_tiny_blocks(problem: &Problem, s: &mut State) -> Result<()> {
    let k = s.c.len();
    if k == 1 || s.c.iter().all(|&c| c > DROP_FRACTION) {
        return Ok(());
    }
    let keep: Vec<usize> = (0..k).filter(|&i| s.c[i] > DROP_FRACTION).collect();
    let total: f64 = keep.iter().map(|&i| s.c[i]).sum();
    let c = keep.iter().map(|&i| s.c[i] / total).collect();
    let mut u = Vec::with_capacity(keep.len() * keep.len());
    for &i in &keep {
        for &j in &keep {
            u.push(s.u[i * k + j]);
        }
    }
    *s = problem.state(c, u)?;
    Ok(())
}

/// Local ascent from `start`. The start need not be feasible: its values are
/// shifted in logit space onto the constraint first.
pub fn local_ascent(
    h: &SubgraphSpec,
    epsilon: f64,
    beta2: f64,
    start: &BlockGraphon,
    config: &SolverConfig,
) -> Result<LocalOptimum> {
    let problem = Problem::new(h, epsilon, beta2, config.interior_margin);
    let l = problem.clamp;
    let u: Vec<f64> = start
        .values_flat()
        .iter()
        .map(|&v| logit(v).clamp(-l, l))
        .collect();
    let mut s = problem.state(start.fractions().to_vec(), u)?;
    let mut ascent = Ascent {
        problem: &problem,
        value_step: 0.5,
        fraction_step: 0.1,
        optimize_fractions: true,
    };
    let (mut iterations, _, _) = ascent.run(&mut s, config.max_iterations, config.tol_objective)?;

    // merge blocks that have become indistinguishable, then polish
    let current = to_graphon(&problem, &s);
    let merged = current.consolidated(CONSOLIDATE_TOL);
    if merged.num_blocks() < current.num_blocks() {
        let u = merged
            .values_flat()
            .iter()
            .map(|&v| logit(v).clamp(-l, l))
            .collect();
        let candidate = problem.state(merged.fractions().to_vec(), u)?;
        if candidate.objective >= s.objective - config.tol_objective {
            let mut candidate = candidate;
            let (more, _, _) = ascent.run(&mut candidate, config.max_iterations, config.tol_objective)?;
            iterations += more;
            if candidate.objective >= s.objective - config.tol_objective {
                s = candidate;
            }
        }
    }
    // final value-only polish at fixed fractions
    ascent.optimize_fractions = false;
    ascent.value_step = 1.0;
    let (more, g, converged) = ascent.run(&mut s, config.max_iterations, config.tol_objective)?;
    iterations += more;

    let mut graphon = to_graphon(&problem, &s);
    let mut objective = s.objective;
    if let Some((snapped, value)) = snap(&problem, &graphon, config.tol_constraint)? {
        if value >= objective {
            graphon = snapped;
            objective = value;
        }
    }
    let constraint_residual = (graphon.edge_density() - epsilon).abs();
    if !objective.is_finite() {
        return Err(Error::NonConvergence("objective became non-finite".into()));
    }
    Ok(LocalOptimum {
        graphon,
        objective,
        iterations,
        constraint_residual,
        stationarity: g.stationarity,
        multiplier: g.multiplier,
        converged,
    })
}

fn to_graphon(problem: &Problem, s: &State) -> BlockGraphon {
    BlockGraphon::from_parts(s.c.clone(), problem.values(&s.u))
}

/// Sets values within [`SNAP_TOL`] of 0 or 1 to the endpoint and re-solves the
/// constraint on the remaining entries. `None` when nothing is snapped or the
/// constraint cannot be restored.
fn snap(problem: &Problem, g: &BlockGraphon, tol: f64) -> Result<Option<(BlockGraphon, f64)>> {
    let c = g.fractions();
    let vals = g.values_flat();
    let fixed: Vec<Option<f64>> = vals
        .iter()
        .map(|&v| {
            if v <= SNAP_TOL {
                Some(0.0)
            } else if v >= 1.0 - SNAP_TOL {
                Some(1.0)
            } else {
                None
            }
        })
        .collect();
    if fixed.iter().all(Option::is_none) {
        return Ok(None);
    }
    let density = |mu: f64| -> Vec<f64> {
        vals.iter()
            .zip(&fixed)
            .map(|(&v, f)| f.unwrap_or_else(|| logistic(logit(v) + mu)))
            .collect()
    };
    let free = fixed.iter().any(Option::is_none);
    let mut out = density(0.0);
    if free {
        let (mut lo, mut hi) = (-50.0, 50.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if weighted(c, &density(mid), |h| h) < problem.epsilon {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out = density(0.5 * (lo + hi));
    }
    if (weighted(c, &out, |h| h) - problem.epsilon).abs() > tol {
        return Ok(None);
    }
    let value = problem.objective(c, &out)?;
    Ok(Some((BlockGraphon::from_parts(c.to_vec(), out), value)))
}
