//! Variational analysis of edge-constrained exponential random graph models.

pub mod adjacency;
pub mod error;
pub mod graphon;
pub mod oracle;
pub mod scalar_phase;
pub mod scan;
pub mod solver;
pub mod subgraph;

pub use adjacency::AdjacencyGraph;
pub use error::{Error, Result};
pub use graphon::{BlockGraphon, EntropyReport};
pub use subgraph::SubgraphSpec;
