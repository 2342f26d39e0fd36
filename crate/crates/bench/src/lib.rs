//! Shared inputs for the benchmarks.

use cergm_core::{BlockGraphon, SubgraphSpec};

/// Subgraphs benchmarked by name.
pub fn subgraphs() -> Vec<(&'static str, SubgraphSpec)> {
    vec![
        ("two-star", SubgraphSpec::two_star()),
        ("triangle", SubgraphSpec::triangle()),
        ("star4", SubgraphSpec::star(4).expect("valid star")),
        ("4-cycle", SubgraphSpec::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).expect("valid cycle")),
    ]
}

/// Deterministic `k`-block graphon with unequal fractions and values spread in `(0, 1)`.
pub fn sample_graphon(k: usize) -> BlockGraphon {
    let raw: Vec<f64> = (0..k).map(|i| 1.0 + i as f64).collect();
    let total: f64 = raw.iter().sum();
    let fractions = raw.iter().map(|x| x / total).collect();
    let mut values = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            values[i * k + j] = 0.1 + 0.8 * (((i + 1) * (j + 1)) % 7) as f64 / 6.0;
        }
    }
    BlockGraphon::from_flat(fractions, values).expect("valid graphon")
}
