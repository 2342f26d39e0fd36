//! Metropolis chain on graphs with a fixed number of edges. A move swaps one
//! present edge for one absent pair, so the edge count never changes.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adjacency::{pair_count, AdjacencyGraph};
use crate::error::{check_finite, Error, Result};
use crate::subgraph::{hom_count_graph, SubgraphSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McmcRun {
    pub n: usize,
    pub edge_count: usize,
    pub beta2: f64,
    pub subgraph: String,
    pub steps: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub acceptance_rate: f64,
    /// Average of `t(H, G)` over the post-burn-in steps.
    pub mean_t: f64,
    /// Batch-means standard error of `mean_t`; `None` below four samples.
    pub std_error: Option<f64>,
    /// Time-averaged sorted degree sequence divided by `n`, ascending.
    pub degree_profile: Vec<f64>,
    /// No swap exists (empty or complete graph); the chain never moves.
    pub frozen: bool,
    pub final_graph: AdjacencyGraph,
}

/// A proposed move: `removed` leaves the graph, `added` joins it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Swap {
    pub removed: (usize, usize),
    pub added: (usize, usize),
    removed_slot: usize,
    added_slot: usize,
}

#[derive(Clone, Debug)]
enum Counter {
    /// `Σ_v deg(v)^p`.
    Star(u32),
    /// `6 · #triangles`.
    Triangle,
    /// Recount from scratch.
    Full,
}

/// Graph state with edge and non-edge lists for O(1) uniform proposals and an
/// exactly maintained homomorphism count.
#[derive(Clone, Debug)]
pub struct SwapChain {
    graph: AdjacencyGraph,
    present: Vec<(usize, usize)>,
    absent: Vec<(usize, usize)>,
    degrees: Vec<i64>,
    h: SubgraphSpec,
    counter: Counter,
    hom: i128,
    denom: f64,
}

impl SwapChain {
    /// Starts from `edge_count` edges chosen uniformly at random.
    pub fn new<R: Rng>(n: usize, edge_count: usize, h: &SubgraphSpec, rng: &mut R) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("n", n as f64, "integers >= 2"));
        }
        let pairs = pair_count(n);
        if edge_count > pairs {
            return Err(Error::domain("edge_count", edge_count as f64, "0..=n(n-1)/2"));
        }
        let mut all: Vec<(usize, usize)> = Vec::with_capacity(pairs);
        for i in 0..n {
            for j in i + 1..n {
                all.push((i, j));
            }
        }
        // partial Fisher-Yates: the first edge_count pairs become edges
        for k in 0..edge_count {
            let r = rng.gen_range(k..pairs);
            all.swap(k, r);
        }
        let absent = all.split_off(edge_count);
        let present = all;
        let graph = AdjacencyGraph::from_edges(n, present.iter().copied())?;
        let counter = if let Some(p) = h.star_order() {
            Counter::Star(p as u32)
        } else if h.is_triangle() {
            Counter::Triangle
        } else {
            Counter::Full
        };
        let hom = hom_count_graph(h, &graph) as i128;
        let degrees = graph.degrees().into_iter().map(|d| d as i64).collect();
        Ok(SwapChain {
            graph,
            present,
            absent,
            degrees,
            h: h.clone(),
            counter,
            hom,
            denom: (n as f64).powi(h.vertex_count() as i32),
        })
    }

    pub fn graph(&self) -> &AdjacencyGraph {
        &self.graph
    }

    pub fn hom_count(&self) -> i128 {
        self.hom
    }

    pub fn density(&self) -> f64 {
        self.hom as f64 / self.denom
    }

    pub fn is_frozen(&self) -> bool {
        self.present.is_empty() || self.absent.is_empty()
    }

    pub fn propose<R: Rng>(&self, rng: &mut R) -> Option<Swap> {
        if self.is_frozen() {
            return None;
        }
        let removed_slot = rng.gen_range(0..self.present.len());
        let added_slot = rng.gen_range(0..self.absent.len());
        Some(Swap {
            removed: self.present[removed_slot],
            added: self.absent[added_slot],
            removed_slot,
            added_slot,
        })
    }

    /// Change in the homomorphism count if `swap` were applied.
    pub fn delta(&mut self, swap: &Swap) -> i128 {
        let (a, b) = swap.removed;
        let (c, d) = swap.added;
        match self.counter {
            Counter::Star(p) => {
                let change = [(a, -1i128), (b, -1), (c, 1), (d, 1)];
                let mut total = 0i128;
                for (k, &(v, _)) in change.iter().enumerate() {
                    // each vertex once, with its net degree change
                    if change[..k].iter().any(|x| x.0 == v) {
                        continue;
                    }
                    let shift: i128 = change[k..].iter().filter(|x| x.0 == v).map(|x| x.1).sum();
                    let old = self.degrees[v] as i128;
                    total += (old + shift).pow(p) - old.pow(p);
                }
                total
            }
            Counter::Triangle => {
                let lost = self.graph.common_neighbors(a, b) as i128;
                self.graph.set_edge(a, b, false);
                let gained = self.graph.common_neighbors(c, d) as i128;
                self.graph.set_edge(a, b, true);
                6 * (gained - lost)
            }
            Counter::Full => {
                self.toggle(swap);
                let after = hom_count_graph(&self.h, &self.graph) as i128;
                self.untoggle(swap);
                after - self.hom
            }
        }
    }

    fn toggle(&mut self, swap: &Swap) {
        self.graph.set_edge(swap.removed.0, swap.removed.1, false);
        self.graph.set_edge(swap.added.0, swap.added.1, true);
    }

    fn untoggle(&mut self, swap: &Swap) {
        self.graph.set_edge(swap.added.0, swap.added.1, false);
        self.graph.set_edge(swap.removed.0, swap.removed.1, true);
    }

    /// Applies `swap` given its precomputed `delta`.
    pub fn apply(&mut self, swap: &Swap, delta: i128) {
        self.toggle(swap);
        self.present[swap.removed_slot] = swap.added;
        self.absent[swap.added_slot] = swap.removed;
        self.degrees[swap.removed.0] -= 1;
        self.degrees[swap.removed.1] -= 1;
        self.degrees[swap.added.0] += 1;
        self.degrees[swap.added.1] += 1;
        self.hom += delta;
    }
}

fn batch_means_error(samples: &[f64]) -> Option<f64> {
    let n = samples.len();
    if n < 4 {
        return None;
    }
    let size = (n as f64).sqrt().floor() as usize;
    let batches = n / size;
    let means: Vec<f64> = (0..batches)
        .map(|b| samples[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (batches - 1) as f64;
    Some((var / batches as f64).sqrt())
}

/// Runs `burn_in + steps` proposals; statistics use the last `steps`.
pub fn mcmc_sample(
    n: usize,
    edge_count: usize,
    h: &SubgraphSpec,
    beta2: f64,
    steps: usize,
    burn_in: usize,
    seed: u64,
) -> Result<McmcRun> {
    check_finite("beta2", beta2)?;
    if steps == 0 {
        return Err(Error::domain("steps", 0.0, "positive integers"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chain = SwapChain::new(n, edge_count, h, &mut rng)?;
    let n2 = (n * n) as f64;
    let mut accepted = 0usize;
    let mut samples = Vec::with_capacity(steps);
    let mut profile = vec![0.0; n];
    let mut sorted = vec![0i64; n];
    for step in 0..burn_in + steps {
        if let Some(swap) = chain.propose(&mut rng) {
            let delta = chain.delta(&swap);
            let log_ratio = n2 * beta2 * delta as f64 / chain.denom;
            if log_ratio >= 0.0 || rng.gen::<f64>() < log_ratio.exp() {
                chain.apply(&swap, delta);
                if step >= burn_in {
                    accepted += 1;
                }
            }
        }
        if step >= burn_in {
            samples.push(chain.density());
            sorted.copy_from_slice(&chain.degrees);
            sorted.sort_unstable();
            for (acc, d) in profile.iter_mut().zip(&sorted) {
                *acc += *d as f64;
            }
        }
    }
    let scale = 1.0 / (steps as f64 * n as f64);
    profile.iter_mut().for_each(|x| *x *= scale);
    Ok(McmcRun {
        n,
        edge_count,
        beta2,
        subgraph: h.label(),
        steps,
        burn_in,
        seed,
        acceptance_rate: accepted as f64 / steps as f64,
        mean_t: samples.iter().sum::<f64>() / steps as f64,
        std_error: batch_means_error(&samples),
        degree_profile: profile,
        frozen: chain.is_frozen(),
        final_graph: chain.graph.clone(),
    })
}
