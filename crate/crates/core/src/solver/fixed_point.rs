//! First-order conditions for star subgraphs in degree form.
//!
//! For a `p`-star the optimizer satisfies
//! `log(h/(1−h))(x, y) = pβ₂ (g(x)^{p−1} + g(y)^{p−1}) − 2β₁` with
//! `g(x) = ∫ h(x, y) dy`, so the degree profile is a fixed point of
//! `g(x) ↦ ∫ σ(pβ₂ (g(x)^{p−1} + g(y)^{p−1}) − 2β₁) dy` and every degree value
//! `z` is a root of `F(z) = z − ∫ σ(pβ₂ (z^{p−1} + g(y)^{p−1}) − 2β₁) dy`.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_open_unit, Error, Result};
use crate::graphon::{logistic, BlockGraphon};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FixedPointOptions {
    pub grid_size: usize,
    /// Weight `λ` of the new profile in `g ← (1−λ) g + λ T(g)`.
    pub damping: f64,
    pub max_sweeps: usize,
    pub tol: f64,
    /// Initial profile: `ε ± perturbation·min(ε, 1−ε)` on the first
    /// `split` fraction of the grid and the rest, adjusted to mean `ε`.
    pub perturbation: f64,
    pub split: f64,
    /// Degree values closer than this are merged into one block.
    pub cluster_tol: f64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            grid_size: 256,
            damping: 0.5,
            max_sweeps: 20_000,
            tol: 1e-13,
            perturbation: 0.2,
            split: 0.5,
            cluster_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointResult {
    /// Degree profile on the grid.
    pub degrees: Vec<f64>,
    pub beta1: f64,
    /// Clustered block graphon rebuilt from the logistic formula.
    pub graphon: BlockGraphon,
    pub converged: bool,
    pub sweeps: usize,
    /// `(z, F(z))` for each distinct degree value of the block graphon.
    pub residuals: Vec<(f64, f64)>,
}

/// Sorted distinct values of `a` with their summed weights.
fn group(a: &[f64], w: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut pairs: Vec<(f64, f64)> = a.iter().copied().zip(w.iter().copied()).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut values: Vec<f64> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    for (v, wt) in pairs {
        if values.last() == Some(&v) {
            *weights.last_mut().unwrap() += wt;
        } else {
            values.push(v);
            weights.push(wt);
        }
    }
    (values, weights)
}

/// `β₁` such that `Σ_ij w_i w_j σ(a_i + a_j − 2β₁) = ε`.
fn solve_beta1(a: &[f64], w: &[f64], epsilon: f64) -> f64 {
    let density = |b1: f64| {
        let mut total = 0.0;
        for (ai, wi) in a.iter().zip(w) {
            let mut row = 0.0;
            for (aj, wj) in a.iter().zip(w) {
                row += wj * logistic(ai + aj - 2.0 * b1);
            }
            total += wi * row;
        }
        total
    };
    let amax = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let amin = a.iter().copied().fold(f64::INFINITY, f64::min);
    // density is decreasing in β₁
    let (mut lo, mut hi) = (amin - 400.0, amax + 400.0);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if density(mid) > epsilon {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_star_inputs(p: usize, epsilon: f64, beta2: f64) -> Result<()> {
    if p < 2 {
        return Err(Error::domain("p", p as f64, "integers >= 2"));
    }
    check_open_unit("epsilon", epsilon)?;
    check_finite("beta2", beta2)
}

/// Damped fixed-point iteration on the degree profile. Non-convergence is
/// reported through `converged`, not as an error.
pub fn el_fixed_point_star(
    p: usize,
    epsilon: f64,
    beta2: f64,
    options: &FixedPointOptions,
) -> Result<FixedPointResult> {
    check_star_inputs(p, epsilon, beta2)?;
    let n = options.grid_size.max(2);
    if !(options.damping > 0.0 && options.damping <= 1.0) {
        return Err(Error::domain("damping", options.damping, "(0, 1]"));
    }
    let pf = p as f64;
    let pe = p as i32 - 1;
    let w = vec![1.0 / n as f64; n];

    let amp = options.perturbation * epsilon.min(1.0 - epsilon);
    let cut = ((options.split * n as f64).round() as usize).clamp(1, n - 1);
    let mut g: Vec<f64> = (0..n)
        .map(|i| if i < cut { epsilon + amp } else { epsilon - amp })
        .collect();
    let mean: f64 = g.iter().sum::<f64>() / n as f64;
    g.iter_mut().for_each(|x| *x = (*x + epsilon - mean).clamp(1e-12, 1.0 - 1e-12));

    let mut beta1 = 0.0;
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < options.max_sweeps {
        sweeps += 1;
        let a: Vec<f64> = g.iter().map(|&x| pf * beta2 * x.powi(pe)).collect();
        // grid points sharing a degree value evolve identically
        let (ua, uw) = group(&a, &w);
        beta1 = solve_beta1(&ua, &uw, epsilon);
        let ut: Vec<f64> = ua
            .iter()
            .map(|ai| {
                ua.iter()
                    .zip(&uw)
                    .map(|(aj, wj)| wj * logistic(ai + aj - 2.0 * beta1))
                    .sum()
            })
            .collect();
        let mut change: f64 = 0.0;
        for (gi, ai) in g.iter_mut().zip(&a) {
            let idx = ua.partition_point(|x| x < ai);
            let t = ut[idx];
            change = change.max((t - *gi).abs());
            *gi = (1.0 - options.damping) * *gi + options.damping * t;
        }
        if change <= options.tol {
            converged = true;
            break;
        }
    }

    let (graphon, beta1_blocks) = compress(&g, p, beta2, epsilon, options.cluster_tol)?;
    let residuals = degree_residuals(&graphon, p, beta2, beta1_blocks);
    Ok(FixedPointResult {
        degrees: g,
        beta1: if converged { beta1 } else { beta1_blocks },
        graphon,
        converged,
        sweeps,
        residuals,
    })
}

/// Clusters the sorted degree values and rebuilds `h` from the logistic formula
/// with `β₁` re-solved so that `∬ h = ε` exactly.
fn compress(g: &[f64], p: usize, beta2: f64, epsilon: f64, tol: f64) -> Result<(BlockGraphon, f64)> {
    let mut sorted = g.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    let mut anchor = f64::NEG_INFINITY;
    for &x in &sorted {
        match clusters.last_mut() {
            Some((sum, count)) if x - anchor <= tol => {
                *sum += x;
                *count += 1;
            }
            _ => {
                clusters.push((x, 1));
                anchor = x;
            }
        }
    }
    let n = g.len() as f64;
    let c: Vec<f64> = clusters.iter().map(|&(_, k)| k as f64 / n).collect();
    let z: Vec<f64> = clusters.iter().map(|&(s, k)| s / k as f64).collect();
    let pf = p as f64;
    let a: Vec<f64> = z.iter().map(|&x| pf * beta2 * x.powi(p as i32 - 1)).collect();
    let beta1 = solve_beta1(&a, &c, epsilon);
    let k = c.len();
    let mut vals = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            vals[i * k + j] = logistic(a[i] + a[j] - 2.0 * beta1);
        }
    }
    let total: f64 = c.iter().sum();
    let c = c.iter().map(|x| x / total).collect();
    Ok((BlockGraphon::from_flat(c, vals)?, beta1))
}

fn degree_residuals(graphon: &BlockGraphon, p: usize, beta2: f64, beta1: f64) -> Vec<(f64, f64)> {
    let g = graphon.degree_profile();
    let c = graphon.fractions();
    let pf = p as f64;
    let a: Vec<f64> = g.iter().map(|&x| pf * beta2 * x.powi(p as i32 - 1)).collect();
    g.iter()
        .zip(&a)
        .map(|(&z, &az)| {
            let integral: f64 = a
                .iter()
                .zip(c)
                .map(|(aj, cj)| cj * logistic(az + aj - 2.0 * beta1))
                .sum();
            (z, z - integral)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointResidual {
    /// Multiplier making `Σ c_i c_j σ(·)` equal the graphon's edge density.
    pub beta1: f64,
    /// `(z, F(z))` per block degree value.
    pub residuals: Vec<(f64, f64)>,
    pub max_abs: f64,
}

/// Evaluates `F` at each block degree of `graphon` for a `p`-star model.
pub fn star_fixed_point_residual(
    graphon: &BlockGraphon,
    p: usize,
    beta2: f64,
) -> Result<FixedPointResidual> {
    let epsilon = graphon.edge_density();
    check_star_inputs(p, epsilon, beta2)?;
    let g = graphon.degree_profile();
    let pf = p as f64;
    let a: Vec<f64> = g.iter().map(|&x| pf * beta2 * x.powi(p as i32 - 1)).collect();
    let beta1 = solve_beta1(&a, graphon.fractions(), epsilon);
    let residuals = degree_residuals(graphon, p, beta2, beta1);
    let max_abs = residuals.iter().map(|r| r.1.abs()).fold(0.0, f64::max);
    Ok(FixedPointResidual {
        beta1,
        residuals,
        max_abs,
    })
}
