//! Simple undirected graphs on `n` labelled vertices, stored as bitset rows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric adjacency with zero diagonal.
///
/// Serialises as `{"n": n, "upper": "0110..."}` where `upper` lists the upper
/// triangle row-major: pairs `(0,1), (0,2), .., (0,n-1), (1,2), ..`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AdjacencyRepr", into = "AdjacencyRepr")]
pub struct AdjacencyGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct AdjacencyRepr {
    n: usize,
    upper: String,
}

impl TryFrom<AdjacencyRepr> for AdjacencyGraph {
    type Error = Error;

    fn try_from(repr: AdjacencyRepr) -> Result<Self> {
        AdjacencyGraph::from_bitstring(repr.n, &repr.upper)
    }
}

impl From<AdjacencyGraph> for AdjacencyRepr {
    fn from(g: AdjacencyGraph) -> Self {
        AdjacencyRepr {
            n: g.n,
            upper: g.to_bitstring(),
        }
    }
}

/// Number of unordered pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl AdjacencyGraph {
    /// Edgeless graph on `n > 0` vertices.
    pub fn empty(n: usize) -> Self {
        assert!(n > 0, "graphs need at least one vertex");
        let words = n.div_ceil(64);
        AdjacencyGraph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = AdjacencyGraph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.set_edge(i, j, true);
            }
        }
        g
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::domain("n", 0.0, "positive integers"));
        }
        let mut g = AdjacencyGraph::empty(n);
        for (a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidSubgraph(format!(
                    "edge {{{a},{b}}} is not a pair of distinct vertices below {n}"
                )));
            }
            g.set_edge(a, b, true);
        }
        Ok(g)
    }

    /// Decodes the upper-triangle bitstring (`'0'`/`'1'`, row-major).
    pub fn from_bitstring(n: usize, bits: &str) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n", 0.0, "positive integers"));
        }
        if bits.len() != pair_count(n) {
            return Err(Error::InvalidGraphon(format!(
                "bitstring of length {} does not match n = {n}",
                bits.len()
            )));
        }
        let mut g = AdjacencyGraph::empty(n);
        let mut chars = bits.chars();
        for i in 0..n {
            for j in i + 1..n {
                match chars.next() {
                    Some('1') => g.set_edge(i, j, true),
                    Some('0') => {}
                    other => {
                        return Err(Error::InvalidGraphon(format!(
                            "unexpected character {other:?} in adjacency bitstring"
                        )))
                    }
                }
            }
        }
        Ok(g)
    }

    /// Graph whose edge set is the binary expansion of `code`: bit `k` is the
    /// `k`-th pair in upper-triangle row-major order.
    pub fn from_code(n: usize, code: u64) -> Self {
        let mut g = AdjacencyGraph::empty(n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if code >> k & 1 == 1 {
                    g.set_edge(i, j, true);
                }
                k += 1;
            }
        }
        g
    }

    pub fn to_bitstring(&self) -> String {
        let mut s = String::with_capacity(pair_count(self.n));
        for i in 0..self.n {
            for j in i + 1..self.n {
                s.push(if self.has_edge(i, j) { '1' } else { '0' });
            }
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn words_per_row(&self) -> usize {
        self.words
    }

    pub(crate) fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    /// Writes the all-vertices mask into `out`.
    pub(crate) fn fill_all(&self, out: &mut [u64]) {
        for (w, slot) in out.iter_mut().enumerate() {
            let lo = w * 64;
            let hi = (lo + 64).min(self.n);
            *slot = if hi - lo == 64 {
                u64::MAX
            } else {
                (1u64 << (hi - lo)) - 1
            };
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        assert!(i != j, "simple graphs have no loops");
        for (a, b) in [(i, j), (j, i)] {
            let word = &mut self.rows[a * self.words + b / 64];
            if present {
                *word |= 1 << (b % 64);
            } else {
                *word &= !(1 << (b % 64));
            }
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    /// `t(edge, G) = 2|E| / n^2`.
    pub fn edge_density(&self) -> f64 {
        2.0 * self.edge_count() as f64 / (self.n * self.n) as f64
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * 64 + b)
                }
            })
        })
    }

    pub fn common_neighbors(&self, i: usize, j: usize) -> usize {
        self.row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Degree of every vertex.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    /// Relabels vertices: vertex `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> AdjacencyGraph {
        let mut g = AdjacencyGraph::empty(self.n);
        for i in 0..self.n {
            for j in self.neighbors(i) {
                if i < j {
                    g.set_edge(perm[i], perm[j], true);
                }
            }
        }
        g
    }
}
