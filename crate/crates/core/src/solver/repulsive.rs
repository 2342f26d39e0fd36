//! Triangle model with `β₂ ≤ 0` restricted to the two-block checkerboard
//! family, parametrised by its triangle density `τ`.

use serde::{Deserialize, Serialize};

use crate::error::{check_open_unit, Error, Result};
use crate::graphon::BlockGraphon;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepulsiveScan {
    pub epsilon: f64,
    pub beta2: f64,
    /// Maximising triangle density.
    pub tau_star: f64,
    /// `β₂ τ* − ½ ∬ I(h_{τ*})`, a lower bound on `ψ`.
    pub psi_lower: f64,
    /// `τ* = ε³`, i.e. the maximiser is the constant graphon.
    pub uniform: bool,
    pub graphon: BlockGraphon,
}

fn family_objective(epsilon: f64, beta2: f64, tau: f64) -> Result<f64> {
    let g = BlockGraphon::checkerboard(epsilon, tau)?;
    Ok(beta2 * tau - 0.5 * g.entropy_integral())
}

/// Smallest triangle density reachable in the family.
fn tau_floor(epsilon: f64) -> f64 {
    let d = epsilon.min(1.0 - epsilon);
    (epsilon.powi(3) - d.powi(3)).max(0.0)
}

/// Maximises `β₂ τ − ½ ∬ I(h_τ)` over a uniform `τ` grid of `grid` intervals,
/// then refines around the best grid point by golden-section search.
pub fn repulsive_triangle_scan(epsilon: f64, beta2: f64, grid: usize) -> Result<RepulsiveScan> {
    check_open_unit("epsilon", epsilon)?;
    if !(beta2 <= 0.0) {
        return Err(Error::domain("beta2", beta2, "non-positive reals"));
    }
    if grid < 2 {
        return Err(Error::domain("grid", grid as f64, "integers >= 2"));
    }
    let top = epsilon.powi(3);
    let floor = tau_floor(epsilon);
    let taus: Vec<f64> = (0..=grid)
        .map(|i| {
            if i == grid {
                top
            } else {
                floor + (top - floor) * i as f64 / grid as f64
            }
        })
        .collect();
    let mut values = Vec::with_capacity(taus.len());
    for &t in &taus {
        values.push(family_objective(epsilon, beta2, t)?);
    }
    let best = (0..taus.len())
        .max_by(|&a, &b| values[a].total_cmp(&values[b]).then(b.cmp(&a)))
        .unwrap();
    let lo = taus[best.saturating_sub(1)];
    let hi = taus[(best + 1).min(grid)];
    let (mut tau_star, mut value) = golden_max(|t| family_objective(epsilon, beta2, t), lo, hi)?;
    if values[best] > value {
        tau_star = taus[best];
        value = values[best];
    }
    let at_top = family_objective(epsilon, beta2, top)?;
    if at_top >= value {
        tau_star = top;
        value = at_top;
    }
    Ok(RepulsiveScan {
        epsilon,
        beta2,
        tau_star,
        psi_lower: value,
        uniform: tau_star == top,
        graphon: BlockGraphon::checkerboard(epsilon, tau_star)?,
    })
}

fn golden_max(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..200 {
        if b - a <= 1e-15 * b.abs().max(1e-300) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

/// Largest `β₂ < 0` at which the scan stops returning the constant graphon,
/// located by bisection on `[lower, 0]` to width `tol`.
pub fn repulsive_critical_beta2(epsilon: f64, grid: usize, lower: f64, tol: f64) -> Result<f64> {
    if repulsive_triangle_scan(epsilon, lower, grid)?.uniform {
        return Err(Error::NonConvergence(format!(
            "the family stays uniform down to beta2 = {lower}"
        )));
    }
    let (mut lo, mut hi) = (lower, 0.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if repulsive_triangle_scan(epsilon, mid, grid)?.uniform {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
