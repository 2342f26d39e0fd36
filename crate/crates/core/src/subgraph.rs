//! The fixed simple graph `H` and its homomorphism densities.
//!
//! Densities count *all* vertex maps `V(H) -> V(G)` that send edges to edges,
//! normalised by `n^{v(H)}`; on block graphons the same quantity is the
//! integral of the edge-product over `[0,1]^{v(H)}`, which for a step function
//! is a finite sum over block assignments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::adjacency::AdjacencyGraph;
use crate::error::{Error, Result};
use crate::graphon::BlockGraphon;

/// Largest supported `v(H)`.
pub const MAX_VERTICES: usize = 8;

/// Default cap on the number of block assignments `K^{v(H)}` evaluated by
/// [`hom_density_blocks`].
pub const DEFAULT_BLOCK_BUDGET: u64 = 100_000_000;

/// A finite simple graph `H`, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubgraphRepr", into = "SubgraphRepr")]
pub struct SubgraphSpec {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct SubgraphRepr {
    v: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<SubgraphRepr> for SubgraphSpec {
    type Error = Error;

    fn try_from(repr: SubgraphRepr) -> Result<Self> {
        SubgraphSpec::new(repr.v, repr.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<SubgraphSpec> for SubgraphRepr {
    fn from(spec: SubgraphSpec) -> Self {
        SubgraphRepr {
            v: spec.vertex_count,
            edges: spec.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl SubgraphSpec {
    /// Builds `H` from a vertex count and unordered edge list.
    ///
    /// Loops, repeated edges (in either orientation) and endpoints outside
    /// `0..vertex_count` are rejected. Connectivity is not required.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count == 0 {
            return Err(Error::InvalidSubgraph("vertex_count must be positive".into()));
        }
        if vertex_count > MAX_VERTICES {
            return Err(Error::InvalidSubgraph(format!(
                "vertex_count {vertex_count} exceeds the supported maximum {MAX_VERTICES}"
            )));
        }
        let mut normalized: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidSubgraph(format!(
                    "edge {{{a},{b}}} has an endpoint outside 0..{vertex_count}"
                )));
            }
            if a == b {
                return Err(Error::InvalidSubgraph(format!("self-loop at vertex {a}")));
            }
            let e = (a.min(b), a.max(b));
            if normalized.contains(&e) {
                return Err(Error::InvalidSubgraph(format!(
                    "duplicate edge {{{},{}}}",
                    e.0, e.1
                )));
            }
            normalized.push(e);
        }
        Ok(SubgraphSpec {
            vertex_count,
            edges: normalized,
        })
    }

    /// A single edge.
    pub fn edge() -> Self {
        SubgraphSpec {
            vertex_count: 2,
            edges: vec![(0, 1)],
        }
    }

    /// The `p`-star: center `0` joined to leaves `1..=p`.
    pub fn star(p: usize) -> Result<Self> {
        if p == 0 || p + 1 > MAX_VERTICES {
            return Err(Error::InvalidSubgraph(format!(
                "star order {p} must lie in 1..={}",
                MAX_VERTICES - 1
            )));
        }
        SubgraphSpec::new(p + 1, (1..=p).map(|leaf| (0, leaf)))
    }

    pub fn two_star() -> Self {
        SubgraphSpec::star(2).expect("two-star is valid")
    }

    pub fn triangle() -> Self {
        SubgraphSpec {
            vertex_count: 3,
            edges: vec![(0, 1), (0, 2), (1, 2)],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// `Some(p)` when `H` is a `p`-star (one center adjacent to `p` leaves and
    /// nothing else, so `v(H) = p + 1`). A single edge is the 1-star.
    pub fn star_order(&self) -> Option<usize> {
        let p = self.edge_count();
        if p == 0 || self.vertex_count != p + 1 {
            return None;
        }
        if p == 1 {
            return Some(1);
        }
        let deg = self.degrees();
        let centers = deg.iter().filter(|&&d| d == p).count();
        let leaves = deg.iter().filter(|&&d| d == 1).count();
        (centers == 1 && leaves == p).then_some(p)
    }

    /// Center vertex of a star, if `H` is one.
    pub fn star_center(&self) -> Option<usize> {
        let p = self.star_order()?;
        if p == 1 {
            return Some(self.edges[0].0);
        }
        self.degrees().iter().position(|&d| d == p)
    }

    pub fn is_triangle(&self) -> bool {
        self.vertex_count == 3 && self.edges.len() == 3
    }

    /// True when every vertex has degree at most one. For such `H` the block
    /// density factorises as `t(H, h) = (edge density)^{e(H)}`.
    pub fn is_matching(&self) -> bool {
        self.degrees().iter().all(|&d| d <= 1)
    }

    /// Short name used in CLI contexts and reports.
    pub fn label(&self) -> String {
        if self.is_triangle() {
            return "triangle".into();
        }
        match self.star_order() {
            Some(1) => "edge".into(),
            Some(p) => format!("star:{p}"),
            None => {
                let edges: Vec<String> =
                    self.edges.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
                format!("{{\"v\":{},\"edges\":[{}]}}", self.vertex_count, edges.join(","))
            }
        }
    }
}

impl fmt::Display for SubgraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Accepts `edge`, `triangle`, `star:p` (with `two-star` as an alias for
/// `star:2`), or an inline JSON object `{"v": .., "edges": [[i,j], ..]}`.
impl FromStr for SubgraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "edge" => return Ok(SubgraphSpec::edge()),
            "triangle" => return Ok(SubgraphSpec::triangle()),
            "two-star" => return Ok(SubgraphSpec::two_star()),
            _ => {}
        }
        if let Some(p) = s.strip_prefix("star:") {
            let p: usize = p
                .parse()
                .map_err(|_| Error::InvalidSubgraph(format!("bad star order in {s:?}")))?;
            return SubgraphSpec::star(p);
        }
        if s.starts_with('{') {
            return serde_json::from_str(s)
                .map_err(|e| Error::InvalidSubgraph(format!("cannot parse {s:?}: {e}")));
        }
        Err(Error::InvalidSubgraph(format!(
            "unknown subgraph {s:?} (expected edge, triangle, star:p or JSON)"
        )))
    }
}

// ---------------------------------------------------------------------------
// Finite graphs
// ---------------------------------------------------------------------------

/// Exact number of homomorphisms `H -> G`.
pub fn hom_count_graph(h: &SubgraphSpec, g: &AdjacencyGraph) -> u128 {
    let n = g.n() as u128;
    if h.edge_count() == 0 {
        return n.pow(h.vertex_count as u32);
    }
    if let Some(p) = h.star_order() {
        return (0..g.n()).map(|v| (g.degree(v) as u128).pow(p as u32)).sum();
    }
    if h.is_triangle() {
        // trace(A^3) = sum over ordered adjacent (i, j) of |N(i) ∩ N(j)|
        let mut total = 0u128;
        for i in 0..g.n() {
            for j in g.neighbors(i) {
                total += g.common_neighbors(i, j) as u128;
            }
        }
        return total;
    }
    hom_count_backtrack(h, g)
}

/// `|hom(H, G)| / n^{v(H)}`.
pub fn hom_density_graph(h: &SubgraphSpec, g: &AdjacencyGraph) -> f64 {
    let denom = (g.n() as f64).powi(h.vertex_count as i32);
    hom_count_graph(h, g) as f64 / denom
}

/// Generic counter: assigns the vertices of `H` one at a time, restricting each
/// to the common neighbourhood of its already-placed neighbours.
pub(crate) fn hom_count_backtrack(h: &SubgraphSpec, g: &AdjacencyGraph) -> u128 {
    let order = placement_order(h);
    let v = order.len();
    let mut position = vec![0usize; h.vertex_count];
    for (k, &vertex) in order.iter().enumerate() {
        position[vertex] = k;
    }
    // earlier[k]: positions of already-placed neighbours of order[k]
    let mut earlier: Vec<Vec<usize>> = vec![Vec::new(); v];
    for &(a, b) in h.edges() {
        let (pa, pb) = (position[a], position[b]);
        if pa < pb {
            earlier[pb].push(pa);
        } else {
            earlier[pa].push(pb);
        }
    }
    let words = g.words_per_row();
    let mut scratch = vec![0u64; v * words];
    let mut image = vec![0usize; v];
    count_from(g, &earlier, 0, &mut image, &mut scratch, words)
}

fn count_from(
    g: &AdjacencyGraph,
    earlier: &[Vec<usize>],
    depth: usize,
    image: &mut [usize],
    scratch: &mut [u64],
    words: usize,
) -> u128 {
    let (candidates, rest) = scratch.split_at_mut(words);
    g.fill_all(candidates);
    for &k in &earlier[depth] {
        for (c, r) in candidates.iter_mut().zip(g.row(image[k])) {
            *c &= *r;
        }
    }
    if depth + 1 == earlier.len() {
        return candidates.iter().map(|w| w.count_ones() as u128).sum();
    }
    let mut total = 0u128;
    for (w, &word) in candidates.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            image[depth] = w * 64 + bits.trailing_zeros() as usize;
            bits &= bits - 1;
            total += count_from(g, earlier, depth + 1, image, rest, words);
        }
    }
    total
}

/// Vertex order that places each vertex after as many of its neighbours as
/// possible (greedy max-connectivity), so candidate sets shrink early.
fn placement_order(h: &SubgraphSpec) -> Vec<usize> {
    let v = h.vertex_count();
    let mut adj = vec![vec![false; v]; v];
    for &(a, b) in h.edges() {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let deg = h.degrees();
    let mut placed = vec![false; v];
    let mut order = Vec::with_capacity(v);
    for _ in 0..v {
        let next = (0..v)
            .filter(|&u| !placed[u])
            .max_by_key(|&u| {
                let links = order.iter().filter(|&&w| adj[u][w]).count();
                (links, deg[u], std::cmp::Reverse(u))
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }
    order
}

// ---------------------------------------------------------------------------
// Block graphons
// ---------------------------------------------------------------------------

/// `t(H, h)` for a block graphon together with its exact partial derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDensity {
    pub value: f64,
    /// `∂t/∂h_{ij}` with `h_{ij} = h_{ji}` treated as one variable, stored as a
    /// symmetric row-major `K × K` matrix.
    pub d_values: Vec<f64>,
    /// `∂t/∂c_k`, the derivative with respect to each block fraction.
    pub d_fractions: Vec<f64>,
}

/// `t(H, h)` with the default assignment budget.
pub fn hom_density_blocks(h: &SubgraphSpec, graphon: &BlockGraphon) -> Result<f64> {
    hom_density_blocks_with_budget(h, graphon, DEFAULT_BLOCK_BUDGET)
}

pub fn hom_density_blocks_with_budget(
    h: &SubgraphSpec,
    graphon: &BlockGraphon,
    budget: u64,
) -> Result<f64> {
    Ok(block_density(h, graphon.fractions(), graphon.values_flat(), budget, false)?.value)
}

/// Symmetric matrix of `∂t(H, h)/∂h_{ij}` over unordered block pairs.
pub fn hom_density_gradient(h: &SubgraphSpec, graphon: &BlockGraphon) -> Result<Vec<Vec<f64>>> {
    let k = graphon.num_blocks();
    let eval = block_density(
        h,
        graphon.fractions(),
        graphon.values_flat(),
        DEFAULT_BLOCK_BUDGET,
        true,
    )?;
    Ok(eval.d_values.chunks(k).map(<[f64]>::to_vec).collect())
}

/// Evaluates `t(H, h)` for fractions `c` and a flat symmetric value matrix.
///
/// Stars use the closed form `Σ_i c_i g_i^p` with `g_i = Σ_j c_j h_{ij}`; all
/// other graphs sum over the `K^{v(H)}` block assignments. The budget is
/// checked against `K^{v(H)}` in both cases so that callers see one contract.
pub(crate) fn block_density(
    h: &SubgraphSpec,
    c: &[f64],
    vals: &[f64],
    budget: u64,
    grads: bool,
) -> Result<BlockDensity> {
    let k = c.len();
    debug_assert_eq!(vals.len(), k * k);
    let v = h.vertex_count();
    let terms = (k as u128).pow(v as u32);
    if terms > budget as u128 {
        return Err(Error::BudgetExceeded { terms, budget });
    }
    if let Some(p) = h.star_order() {
        return Ok(star_density(p, c, vals, grads));
    }
    Ok(assignment_sum(h, c, vals, grads))
}

fn star_density(p: usize, c: &[f64], vals: &[f64], grads: bool) -> BlockDensity {
    let k = c.len();
    let g: Vec<f64> = (0..k)
        .map(|i| (0..k).map(|j| c[j] * vals[i * k + j]).sum())
        .collect();
    let pf = p as f64;
    let value = (0..k).map(|i| c[i] * g[i].powi(p as i32)).sum();
    if !grads {
        return BlockDensity {
            value,
            d_values: Vec::new(),
            d_fractions: Vec::new(),
        };
    }
    let gp1: Vec<f64> = g.iter().map(|x| x.powi(p as i32 - 1)).collect();
    let mut d_values = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            d_values[i * k + j] = if i == j {
                pf * c[i] * c[i] * gp1[i]
            } else {
                pf * c[i] * c[j] * (gp1[i] + gp1[j])
            };
        }
    }
    let d_fractions = (0..k)
        .map(|m| {
            g[m].powi(p as i32)
                + (0..k)
                    .map(|i| c[i] * pf * gp1[i] * vals[i * k + m])
                    .sum::<f64>()
        })
        .collect();
    BlockDensity {
        value,
        d_values,
        d_fractions,
    }
}

fn assignment_sum(h: &SubgraphSpec, c: &[f64], vals: &[f64], grads: bool) -> BlockDensity {
    let k = c.len();
    let v = h.vertex_count();
    let edges = h.edges();
    let e = edges.len();
    let mut assign = vec![0usize; v];
    let mut vf = vec![0.0; v];
    let mut ef = vec![0.0; e];
    let mut prefix = vec![1.0; e + 1];
    let mut suffix = vec![1.0; e + 1];
    let mut vprefix = vec![1.0; v + 1];
    let mut vsuffix = vec![1.0; v + 1];
    let mut value = 0.0;
    let mut d_values = vec![0.0; if grads { k * k } else { 0 }];
    let mut d_fractions = vec![0.0; if grads { k } else { 0 }];

    loop {
        for (slot, &b) in vf.iter_mut().zip(&assign) {
            *slot = c[b];
        }
        for (slot, &(a, b)) in ef.iter_mut().zip(edges) {
            *slot = vals[assign[a] * k + assign[b]];
        }
        if grads {
            for i in 0..e {
                prefix[i + 1] = prefix[i] * ef[i];
            }
            for i in (0..e).rev() {
                suffix[i] = suffix[i + 1] * ef[i];
            }
            for i in 0..v {
                vprefix[i + 1] = vprefix[i] * vf[i];
            }
            for i in (0..v).rev() {
                vsuffix[i] = vsuffix[i + 1] * vf[i];
            }
            let vprod = vprefix[v];
            let eprod = prefix[e];
            value += vprod * eprod;
            for (i, &(a, b)) in edges.iter().enumerate() {
                let (ba, bb) = (assign[a], assign[b]);
                let (lo, hi) = (ba.min(bb), ba.max(bb));
                d_values[lo * k + hi] += vprod * prefix[i] * suffix[i + 1];
            }
            for i in 0..v {
                d_fractions[assign[i]] += vprefix[i] * vsuffix[i + 1] * eprod;
            }
        } else {
            let prod: f64 = vf.iter().product::<f64>() * ef.iter().product::<f64>();
            value += prod;
        }

        // odometer
        let mut pos = 0;
        loop {
            if pos == v {
                if grads {
                    for i in 0..k {
                        for j in 0..i {
                            d_values[i * k + j] = d_values[j * k + i];
                        }
                    }
                }
                return BlockDensity {
                    value,
                    d_values,
                    d_fractions,
                };
            }
            assign[pos] += 1;
            if assign[pos] < k {
                break;
            }
            assign[pos] = 0;
            pos += 1;
        }
    }
}
