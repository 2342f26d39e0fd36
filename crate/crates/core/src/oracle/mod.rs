//! Finite-`n` ground truth: exact enumeration for small graphs and an
//! edge-count-preserving Metropolis sampler.

mod enumerate;
mod mcmc;

pub use enumerate::{
    admitted_edge_counts, conditional_top, convergence_sweep, enumerate_psi, enumerate_psi_with,
    ConvergenceSweep, EnumerationOptions, EnumerationOrder, EnumerationResult, SweepRow,
    DEFAULT_TOP_K, MAX_ENUMERATION_N,
};
pub use mcmc::{mcmc_sample, McmcRun, Swap, SwapChain};
