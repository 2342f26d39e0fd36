//! Block (multipodal) graphons and the functionals of the canonical problem.
//!
//! A [`BlockGraphon`] is the step function on `[0,1]^2` whose axis is cut into
//! consecutive intervals of lengths `c_1, .., c_K`, taking the value `h_{ij}` on
//! the cell `I_i × I_j`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::subgraph::{hom_density_blocks, SubgraphSpec};

/// Tolerance on `Σ c_i = 1`.
pub const FRACTION_SUM_TOL: f64 = 1e-12;
/// Rows closer than this (max-norm) are merged by [`BlockGraphon::canonical`].
pub const MERGE_TOL: f64 = 1e-10;
/// Fractions at or below this are dropped by [`BlockGraphon::canonical`].
pub const ZERO_FRACTION: f64 = 1e-14;

/// `I(x) = x log x + (1 - x) log(1 - x)` with `I(0) = I(1) = 0`.
pub fn neg_entropy(x: f64) -> Result<f64> {
    check_unit("x", x)?;
    Ok(neg_entropy_unchecked(x))
}

#[inline]
pub(crate) fn neg_entropy_unchecked(x: f64) -> f64 {
    let a = if x > 0.0 { x * x.ln() } else { 0.0 };
    let b = if x < 1.0 { (1.0 - x) * (-x).ln_1p() } else { 0.0 };
    a + b
}

/// `I'(x) = log(x / (1 - x))`.
#[inline]
pub(crate) fn logit(x: f64) -> f64 {
    (x / (1.0 - x)).ln()
}

#[inline]
pub(crate) fn logistic(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// Largest two-star density among graphons of edge density `ε`:
/// `2ε + (1-ε)^{3/2} - 1` below `1/2`, `ε^{3/2}` above.
pub fn max_two_star_density(epsilon: f64) -> Result<f64> {
    check_unit("epsilon", epsilon)?;
    Ok(if epsilon <= 0.5 {
        2.0 * epsilon + (1.0 - epsilon).powf(1.5) - 1.0
    } else {
        epsilon.powf(1.5)
    })
}

/// Largest triangle density among graphons of edge density `ε`: `ε^{3/2}`.
pub fn max_triangle_density(epsilon: f64) -> Result<f64> {
    check_unit("epsilon", epsilon)?;
    Ok(epsilon.powf(1.5))
}

/// Entropy summary of a graphon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    /// `∬ I(h)`, always in `[-log 2, 0]`.
    pub entropy_integral: f64,
    pub edge_density: f64,
}

/// Finite step graphon with block fractions `c` and symmetric values `h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphonRepr", into = "GraphonRepr")]
pub struct BlockGraphon {
    fractions: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GraphonRepr {
    c: Vec<f64>,
    h: Vec<Vec<f64>>,
}

impl TryFrom<GraphonRepr> for BlockGraphon {
    type Error = Error;

    fn try_from(repr: GraphonRepr) -> Result<Self> {
        BlockGraphon::new(repr.c, repr.h)
    }
}

impl From<BlockGraphon> for GraphonRepr {
    fn from(g: BlockGraphon) -> Self {
        GraphonRepr {
            h: g.values(),
            c: g.fractions,
        }
    }
}

impl BlockGraphon {
    pub fn new(fractions: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let k = fractions.len();
        if values.len() != k || values.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidGraphon(format!(
                "value matrix must be {k} x {k} to match the fractions"
            )));
        }
        BlockGraphon::from_flat(fractions, values.concat())
    }

    /// Builds from a row-major `K × K` value vector.
    pub fn from_flat(fractions: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let k = fractions.len();
        if k == 0 {
            return Err(Error::InvalidGraphon("at least one block is required".into()));
        }
        if values.len() != k * k {
            return Err(Error::InvalidGraphon(format!(
                "expected {} values, got {}",
                k * k,
                values.len()
            )));
        }
        if fractions.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidGraphon("block fractions must be non-negative".into()));
        }
        let total: f64 = fractions.iter().sum();
        if (total - 1.0).abs() > FRACTION_SUM_TOL {
            return Err(Error::InvalidGraphon(format!(
                "block fractions sum to {total}, not 1"
            )));
        }
        if values.iter().any(|h| !(0.0..=1.0).contains(h)) {
            return Err(Error::InvalidGraphon("values must lie in [0, 1]".into()));
        }
        let mut values = values;
        for i in 0..k {
            for j in 0..i {
                let (a, b) = (values[i * k + j], values[j * k + i]);
                if (a - b).abs() > 1e-12 {
                    return Err(Error::InvalidGraphon(format!(
                        "values are not symmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
                values[i * k + j] = values[j * k + i];
            }
        }
        Ok(BlockGraphon { fractions, values })
    }

    /// Skips validation; callers guarantee the invariants up to rounding.
    pub(crate) fn from_parts(fractions: Vec<f64>, values: Vec<f64>) -> Self {
        BlockGraphon { fractions, values }
    }

    /// Constant graphon `h ≡ ε`.
    pub fn uniform(epsilon: f64) -> Result<Self> {
        check_unit("epsilon", epsilon)?;
        Ok(BlockGraphon {
            fractions: vec![1.0],
            values: vec![epsilon],
        })
    }

    /// Clique of measure `√ε`: value 1 on the leading square, 0 elsewhere.
    pub fn clique(epsilon: f64) -> Result<Self> {
        check_unit("epsilon", epsilon)?;
        let s = epsilon.sqrt();
        Ok(BlockGraphon {
            fractions: vec![s, 1.0 - s],
            values: vec![1.0, 0.0, 0.0, 0.0],
        })
    }

    /// Anticlique: value 0 on a trailing square of side `√(1-ε)`, 1 elsewhere.
    pub fn anticlique(epsilon: f64) -> Result<Self> {
        check_unit("epsilon", epsilon)?;
        let s = (1.0 - epsilon).sqrt();
        Ok(BlockGraphon {
            fractions: vec![1.0 - s, s],
            values: vec![1.0, 1.0, 1.0, 0.0],
        })
    }

    /// Two equal halves with `ε - d` inside each half and `ε + d` across,
    /// `d = (ε^3 - τ)^{1/3}`; its triangle density is exactly `τ`.
    pub fn checkerboard(epsilon: f64, tau: f64) -> Result<Self> {
        check_unit("epsilon", epsilon)?;
        let cube = epsilon.powi(3);
        if !(0.0..=cube).contains(&tau) {
            return Err(Error::domain("tau", tau, "[0, epsilon^3]"));
        }
        let d = (cube - tau).cbrt();
        let (inside, across) = (epsilon - d, epsilon + d);
        // cbrt rounding can leave the extreme case a hair outside [0, 1]
        let snap = |x: f64| {
            if x.abs() < 1e-12 {
                0.0
            } else if (x - 1.0).abs() < 1e-12 {
                1.0
            } else {
                x
            }
        };
        let (inside, across) = (snap(inside), snap(across));
        if !(0.0..=1.0).contains(&inside) || !(0.0..=1.0).contains(&across) {
            return Err(Error::domain(
                "tau",
                tau,
                "values with epsilon ± (epsilon^3 - tau)^(1/3) inside [0, 1]",
            ));
        }
        Ok(BlockGraphon {
            fractions: vec![0.5, 0.5],
            values: vec![inside, across, across, inside],
        })
    }

    pub fn num_blocks(&self) -> usize {
        self.fractions.len()
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn values_flat(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.num_blocks() + j]
    }

    pub fn values(&self) -> Vec<Vec<f64>> {
        self.values
            .chunks(self.num_blocks())
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// `∬ h = Σ c_i c_j h_{ij}`.
    pub fn edge_density(&self) -> f64 {
        self.weighted_sum(|h| h)
    }

    /// `∬ I(h) = Σ c_i c_j I(h_{ij})`.
    pub fn entropy_integral(&self) -> f64 {
        self.weighted_sum(neg_entropy_unchecked)
    }

    pub fn entropy_report(&self) -> EntropyReport {
        EntropyReport {
            entropy_integral: self.entropy_integral(),
            edge_density: self.edge_density(),
        }
    }

    fn weighted_sum(&self, f: impl Fn(f64) -> f64) -> f64 {
        let k = self.num_blocks();
        let mut total = 0.0;
        for i in 0..k {
            for j in 0..k {
                total += self.fractions[i] * self.fractions[j] * f(self.values[i * k + j]);
            }
        }
        total
    }

    /// `β₂ t(H, h) - ½ ∬ I(h)`.
    pub fn objective(&self, h: &SubgraphSpec, beta2: f64) -> Result<f64> {
        let t = if beta2 == 0.0 {
            0.0
        } else {
            hom_density_blocks(h, self)?
        };
        Ok(beta2 * t - 0.5 * self.entropy_integral())
    }

    /// Block degrees `g_i = Σ_j c_j h_{ij}`.
    pub fn degree_profile(&self) -> Vec<f64> {
        let k = self.num_blocks();
        (0..k)
            .map(|i| (0..k).map(|j| self.fractions[j] * self.values[i * k + j]).sum())
            .collect()
    }

    /// `1 - h` on the same partition.
    pub fn complement(&self) -> BlockGraphon {
        BlockGraphon {
            fractions: self.fractions.clone(),
            values: self.values.iter().map(|h| 1.0 - h).collect(),
        }
    }

    /// Canonical representative: zero-fraction blocks dropped, blocks with
    /// identical rows merged, blocks sorted by (fraction, diagonal value,
    /// degree).
    pub fn canonical(&self) -> BlockGraphon {
        let merged = self.consolidated(MERGE_TOL);
        let k = merged.num_blocks();
        let degrees = merged.degree_profile();
        let c = &merged.fractions;
        let order: Vec<usize> = (0..k)
            .sorted_by(|&x, &y| {
                c[x].total_cmp(&c[y])
                    .then(merged.value(x, x).total_cmp(&merged.value(y, y)))
                    .then(degrees[x].total_cmp(&degrees[y]))
            })
            .collect();
        let mut out = merged.reordered(&order);
        for v in out.values.iter_mut() {
            *v = v.clamp(0.0, 1.0);
        }
        out
    }

    /// Drops blocks of fraction at most [`ZERO_FRACTION`] and merges blocks
    /// whose rows agree within `tol` (max-norm). Merging replaces two blocks by
    /// their fraction-weighted average, which preserves the edge density.
    pub fn consolidated(&self, tol: f64) -> BlockGraphon {
        let keep: Vec<usize> = (0..self.num_blocks())
            .filter(|&i| self.fractions[i] > ZERO_FRACTION)
            .collect();
        let keep = if keep.is_empty() {
            // all mass vanished: keep the largest block rather than nothing
            vec![(0..self.num_blocks())
                .max_by(|&a, &b| self.fractions[a].total_cmp(&self.fractions[b]))
                .unwrap()]
        } else {
            keep
        };
        let total: f64 = keep.iter().map(|&i| self.fractions[i]).sum();
        let mut c: Vec<f64> = keep.iter().map(|&i| self.fractions[i] / total).collect();
        let k0 = self.num_blocks();
        let mut h: Vec<Vec<f64>> = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.values[i * k0 + j]).collect())
            .collect();

        while let Some((a, b)) = first_mergeable(&h, tol) {
            let (ca, cb) = (c[a], c[b]);
            let m = ca + cb;
            let k = c.len();
            let row: Vec<f64> = (0..k).map(|j| (ca * h[a][j] + cb * h[b][j]) / m).collect();
            let diag = (ca * ca * h[a][a] + 2.0 * ca * cb * h[a][b] + cb * cb * h[b][b]) / (m * m);
            for j in 0..k {
                h[a][j] = row[j];
                h[j][a] = row[j];
            }
            h[a][a] = diag;
            c[a] = m;
            c.remove(b);
            h.remove(b);
            for r in h.iter_mut() {
                r.remove(b);
            }
        }
        BlockGraphon {
            fractions: c,
            values: h.concat(),
        }
    }

    /// Same graphon with blocks reordered: new block `i` is old block `order[i]`.
    pub fn reordered(&self, order: &[usize]) -> BlockGraphon {
        let k = self.num_blocks();
        let fractions = order.iter().map(|&i| self.fractions[i]).collect();
        let mut values = Vec::with_capacity(k * k);
        for &i in order {
            for &j in order {
                values.push(self.values[i * k + j]);
            }
        }
        BlockGraphon { fractions, values }
    }

    /// Splits block `i` into two pieces with fractions `c_i·w` and `c_i·(1-w)`
    /// carrying identical values (the step function is unchanged).
    pub fn split_block(&self, i: usize, w: f64) -> BlockGraphon {
        let k = self.num_blocks();
        let mut fractions = self.fractions.clone();
        fractions[i] *= w;
        fractions.push(self.fractions[i] * (1.0 - w));
        let src = |a: usize| if a == k { i } else { a };
        let mut values = Vec::with_capacity((k + 1) * (k + 1));
        for a in 0..=k {
            for b in 0..=k {
                values.push(self.values[src(a) * k + src(b)]);
            }
        }
        BlockGraphon { fractions, values }
    }

    /// `∬ |h_1 - h_2|` minimised over block orderings of both graphons, the
    /// step functions being compared on the common refinement of their
    /// interval partitions.
    ///
    /// Exhaustive over orderings while `K_1! · K_2!` stays below 40320;
    /// beyond that only the canonical orderings are compared.
    pub fn block_distance(&self, other: &BlockGraphon) -> f64 {
        let (k1, k2) = (self.num_blocks(), other.num_blocks());
        let exhaustive = factorial(k1).saturating_mul(factorial(k2)) <= 40_320;
        if !exhaustive {
            let a = self.canonical();
            let b = other.canonical();
            return step_l1(&a, &b)
                .min(step_l1(&a, &b.reordered(&(0..b.num_blocks()).rev().collect::<Vec<_>>())));
        }
        let mut best = f64::INFINITY;
        for p1 in (0..k1).permutations(k1) {
            let a = self.reordered(&p1);
            for p2 in (0..k2).permutations(k2) {
                best = best.min(step_l1(&a, &other.reordered(&p2)));
                if best == 0.0 {
                    return 0.0;
                }
            }
        }
        best
    }

    /// CSV samples of the step function at cell centres of an `r × r` grid.
    pub fn to_grid_csv(&self, resolution: usize) -> String {
        let r = resolution.max(1);
        let bounds = cumulative(&self.fractions);
        let block_of = |x: f64| {
            bounds
                .iter()
                .position(|&b| x < b)
                .unwrap_or(self.num_blocks() - 1)
        };
        let mut out = String::new();
        out.push_str("# x,y: cell-centre coordinates on a uniform grid; h: graphon value\n");
        out.push_str("x,y,h\n");
        for i in 0..r {
            let x = (i as f64 + 0.5) / r as f64;
            let bi = block_of(x);
            for j in 0..r {
                let y = (j as f64 + 0.5) / r as f64;
                let _ = writeln!(out, "{x},{y},{}", self.value(bi, block_of(y)));
            }
        }
        out
    }
}

fn factorial(k: usize) -> usize {
    (1..=k).fold(1usize, |acc, x| acc.saturating_mul(x))
}

fn cumulative(fractions: &[f64]) -> Vec<f64> {
    fractions
        .iter()
        .scan(0.0, |acc, c| {
            *acc += c;
            Some(*acc)
        })
        .collect()
}

/// Pieces of the common refinement: (length, block in `a`, block in `b`).
fn refinement(a: &[f64], b: &[f64]) -> Vec<(f64, usize, usize)> {
    let (ca, cb) = (cumulative(a), cumulative(b));
    let mut pieces = Vec::new();
    let (mut i, mut j, mut x) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        let end = ca[i].min(cb[j]);
        if end > x {
            pieces.push((end - x, i, j));
            x = end;
        }
        match ca[i].partial_cmp(&cb[j]) {
            Some(Ordering::Less) => i += 1,
            Some(Ordering::Greater) => j += 1,
            _ => {
                i += 1;
                j += 1;
            }
        }
    }
    pieces
}

fn step_l1(a: &BlockGraphon, b: &BlockGraphon) -> f64 {
    let pieces = refinement(&a.fractions, &b.fractions);
    let mut total = 0.0;
    for &(lp, ap, bp) in &pieces {
        for &(lq, aq, bq) in &pieces {
            total += lp * lq * (a.value(ap, aq) - b.value(bp, bq)).abs();
        }
    }
    total
}

fn first_mergeable(h: &[Vec<f64>], tol: f64) -> Option<(usize, usize)> {
    let k = h.len();
    for a in 0..k {
        for b in a + 1..k {
            let same = (0..k).all(|j| (h[a][j] - h[b][j]).abs() <= tol);
            if same {
                return Some((a, b));
            }
        }
    }
    None
}
