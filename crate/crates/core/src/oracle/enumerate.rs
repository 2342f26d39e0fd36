//! Exact sums over all labelled graphs on `n ≤ 7` vertices whose edge density
//! `2m/n²` lies within `δ` of `ε`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adjacency::{pair_count, AdjacencyGraph};
use crate::error::{check_finite, Error, Result};
use crate::solver::{solve_canonical, SolverConfig};
use crate::subgraph::{hom_count_graph, SubgraphSpec};

/// Largest `n` for which every labelled graph is visited.
pub const MAX_ENUMERATION_N: usize = 7;
pub const DEFAULT_TOP_K: usize = 5;
/// Graph codes per parallel task.
const CHUNK: u64 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub beta2: f64,
    /// `(1/n²) log Σ exp(n² β₂ t(H, G))` over the admitted graphs.
    pub psi_n_delta: f64,
    pub num_admitted: u64,
    /// Admitted edge counts, ascending.
    pub edge_counts: Vec<usize>,
    /// Expectation of `t(H, G)` under the conditional measure.
    pub mean_t: f64,
    /// Most probable admitted graphs, ties broken by enumeration code.
    pub top_graphs: Vec<(AdjacencyGraph, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EnumerationOrder {
    #[default]
    Forward,
    Reverse,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnumerationOptions {
    pub top_k: usize,
    pub order: EnumerationOrder,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            top_k: DEFAULT_TOP_K,
            order: EnumerationOrder::Forward,
        }
    }
}

/// Edge counts `m` with `|2m/n² − ε| < δ`.
pub fn admitted_edge_counts(n: usize, epsilon: f64, delta: f64) -> Vec<usize> {
    let n2 = (n * n) as f64;
    (0..=pair_count(n))
        .filter(|&m| (2.0 * m as f64 / n2 - epsilon).abs() < delta)
        .collect()
}

/// Running log-sum-exp with a `t`-weighted companion sum.
#[derive(Clone, Debug)]
struct Accumulator {
    shift: f64,
    sum: f64,
    t_sum: f64,
    count: u64,
    /// `(log weight, code)`, best first, at most `top_k` long.
    top: Vec<(f64, u64)>,
}

impl Accumulator {
    fn new() -> Self {
        Accumulator {
            shift: f64::NEG_INFINITY,
            sum: 0.0,
            t_sum: 0.0,
            count: 0,
            top: Vec::new(),
        }
    }

    fn push(&mut self, log_w: f64, t: f64, code: u64, top_k: usize) {
        if log_w > self.shift {
            let scale = (self.shift - log_w).exp();
            self.sum *= scale;
            self.t_sum *= scale;
            self.shift = log_w;
        }
        let w = (log_w - self.shift).exp();
        self.sum += w;
        self.t_sum += w * t;
        self.count += 1;
        insert_top(&mut self.top, (log_w, code), top_k);
    }

    fn merge(mut self, other: Accumulator, top_k: usize) -> Self {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let shift = self.shift.max(other.shift);
        let (a, b) = ((self.shift - shift).exp(), (other.shift - shift).exp());
        self.sum = self.sum * a + other.sum * b;
        self.t_sum = self.t_sum * a + other.t_sum * b;
        self.shift = shift;
        self.count += other.count;
        for entry in other.top {
            insert_top(&mut self.top, entry, top_k);
        }
        self
    }

    fn log_total(&self) -> f64 {
        self.shift + self.sum.ln()
    }
}

fn rank(a: &(f64, u64), b: &(f64, u64)) -> Ordering {
    b.0.total_cmp(&a.0).then(a.1.cmp(&b.1))
}

fn insert_top(top: &mut Vec<(f64, u64)>, entry: (f64, u64), k: usize) {
    if k == 0 {
        return;
    }
    if top.len() == k && rank(&entry, top.last().unwrap()) != Ordering::Less {
        return;
    }
    let pos = top.partition_point(|x| rank(x, &entry) == Ordering::Less);
    top.insert(pos, entry);
    top.truncate(k);
}

fn check_window(n: usize, delta: f64, epsilon: f64) -> Result<()> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::domain("n", n as f64, "1..=7"));
    }
    check_finite("epsilon", epsilon)?;
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::domain("delta", delta, "positive reals"));
    }
    Ok(())
}

pub fn enumerate_psi(
    n: usize,
    epsilon: f64,
    delta: f64,
    h: &SubgraphSpec,
    beta2: f64,
) -> Result<EnumerationResult> {
    enumerate_psi_with(n, epsilon, delta, h, beta2, &EnumerationOptions::default())
}

pub fn enumerate_psi_with(
    n: usize,
    epsilon: f64,
    delta: f64,
    h: &SubgraphSpec,
    beta2: f64,
    options: &EnumerationOptions,
) -> Result<EnumerationResult> {
    check_window(n, delta, epsilon)?;
    check_finite("beta2", beta2)?;
    let edge_counts = admitted_edge_counts(n, epsilon, delta);
    if edge_counts.is_empty() {
        return Err(Error::EmptyWindow { n, epsilon, delta });
    }
    let mut admitted = vec![false; pair_count(n) + 1];
    for &m in &edge_counts {
        admitted[m] = true;
    }
    let n2 = (n * n) as f64;
    let denom = (n as f64).powi(h.vertex_count() as i32);
    let total: u64 = 1 << pair_count(n);
    let chunks = total.div_ceil(CHUNK);
    let top_k = options.top_k;
    let reverse = options.order == EnumerationOrder::Reverse;

    let visit = |chunk: u64| {
        let mut acc = Accumulator::new();
        let start = chunk * CHUNK;
        let end = (start + CHUNK).min(total);
        let mut step = |code: u64| {
            if !admitted[code.count_ones() as usize] {
                return;
            }
            let g = AdjacencyGraph::from_code(n, code);
            let t = hom_count_graph(h, &g) as f64 / denom;
            acc.push(n2 * beta2 * t, t, code, top_k);
        };
        if reverse {
            (start..end).rev().for_each(&mut step);
        } else {
            (start..end).for_each(&mut step);
        }
        acc
    };
    let mut order: Vec<u64> = (0..chunks).collect();
    if reverse {
        order.reverse();
    }
    let partials: Vec<Accumulator> = order.par_iter().map(|&c| visit(c)).collect();
    let acc = partials
        .into_iter()
        .fold(Accumulator::new(), |a, b| a.merge(b, top_k));

    let log_total = acc.log_total();
    let top_graphs = acc
        .top
        .iter()
        .map(|&(lw, code)| (AdjacencyGraph::from_code(n, code), (lw - log_total).exp()))
        .collect();
    Ok(EnumerationResult {
        n,
        epsilon,
        delta,
        beta2,
        psi_n_delta: log_total / n2,
        num_admitted: acc.count,
        edge_counts,
        mean_t: acc.t_sum / acc.sum,
        top_graphs,
    })
}

/// The `k` most probable admitted graphs with their conditional probabilities.
pub fn conditional_top(
    n: usize,
    epsilon: f64,
    delta: f64,
    h: &SubgraphSpec,
    beta2: f64,
    k: usize,
) -> Result<Vec<(AdjacencyGraph, f64)>> {
    let options = EnumerationOptions {
        top_k: k,
        ..EnumerationOptions::default()
    };
    Ok(enumerate_psi_with(n, epsilon, delta, h, beta2, &options)?.top_graphs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    /// `None` when the window is empty at this `n`.
    pub psi_n_delta: Option<f64>,
    pub num_admitted: u64,
    /// `ψ_{n,δ} − ψ`.
    pub gap: Option<f64>,
    pub empty_window: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSweep {
    pub epsilon: f64,
    pub delta: f64,
    pub beta2: f64,
    /// Variational value from the solver.
    pub psi: f64,
    pub rows: Vec<SweepRow>,
}

/// Finite-`n` values against the variational limit. No rate is asserted.
pub fn convergence_sweep(
    n_list: &[usize],
    epsilon: f64,
    delta: f64,
    h: &SubgraphSpec,
    beta2: f64,
    config: &SolverConfig,
) -> Result<ConvergenceSweep> {
    let psi = solve_canonical(h, epsilon, beta2, config)?.psi;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        match enumerate_psi_with(n, epsilon, delta, h, beta2, &EnumerationOptions { top_k: 0, ..Default::default() }) {
            Ok(r) => rows.push(SweepRow {
                n,
                psi_n_delta: Some(r.psi_n_delta),
                num_admitted: r.num_admitted,
                gap: Some(r.psi_n_delta - psi),
                empty_window: false,
            }),
            Err(Error::EmptyWindow { .. }) => rows.push(SweepRow {
                n,
                psi_n_delta: None,
                num_admitted: 0,
                gap: None,
                empty_window: true,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(ConvergenceSweep {
        epsilon,
        delta,
        beta2,
        psi,
        rows,
    })
}
