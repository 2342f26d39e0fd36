use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graphon::{logistic, logit, BlockGraphon};
use crate::scalar_phase::u_region_optimizer;
use crate::subgraph::SubgraphSpec;

/// Families of starting graphons for the multistart ascent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartKind {
    /// Uniform graphon with a small random perturbation.
    Uniform,
    Clique,
    Anticlique,
    /// Two-block checkerboards at a few amplitudes.
    Checkerboard,
    /// Rank-one lift of the two-valued scalar profile, when it exists.
    ULift,
    Random,
}

impl StartKind {
    pub const ALL: [StartKind; 6] = [
        StartKind::Uniform,
        StartKind::Clique,
        StartKind::Anticlique,
        StartKind::Checkerboard,
        StartKind::ULift,
        StartKind::Random,
    ];
}

/// Deterministic starts (everything but `Random`) for the given kinds.
pub(crate) fn structured_starts(
    kinds: &[StartKind],
    h: &SubgraphSpec,
    epsilon: f64,
    beta2: f64,
) -> Vec<(StartKind, BlockGraphon)> {
    let mut out = Vec::new();
    let span = epsilon.min(1.0 - epsilon);
    for &kind in kinds {
        match kind {
            StartKind::Uniform => {
                out.push((kind, BlockGraphon::uniform(epsilon).expect("ε in (0,1)")))
            }
            StartKind::Clique => {
                out.push((kind, BlockGraphon::clique(epsilon).expect("ε in (0,1)")))
            }
            StartKind::Anticlique => {
                out.push((kind, BlockGraphon::anticlique(epsilon).expect("ε in (0,1)")))
            }
            StartKind::Checkerboard => {
                for scale in [0.25, 0.5, 0.9] {
                    let d = scale * span;
                    let (a, b) = (epsilon - d, epsilon + d);
                    out.push((
                        kind,
                        BlockGraphon::from_parts(vec![0.5, 0.5], vec![a, b, b, a]),
                    ));
                }
            }
            StartKind::ULift => {
                let p = h.edge_count() as u32;
                if p >= 2 && beta2 > 0.0 {
                    if let Ok(profile) = u_region_optimizer(epsilon, 2.0 * beta2, p) {
                        let g = profile.values;
                        let vals: Vec<f64> = (0..4)
                            .map(|idx| (g[idx / 2] * g[idx % 2] / epsilon).clamp(0.0, 1.0))
                            .collect();
                        out.push((
                            kind,
                            BlockGraphon::from_parts(profile.measures.to_vec(), vals),
                        ));
                    }
                }
            }
            StartKind::Random => {}
        }
    }
    out
}

/// Uniformly random fractions (flat Dirichlet) and symmetric values.
pub(crate) fn random_start(k: usize, rng: &mut ChaCha8Rng) -> BlockGraphon {
    let weights: Vec<f64> = (0..k).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let total: f64 = weights.iter().sum();
    let c = weights.iter().map(|w| w / total).collect();
    let mut vals = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let v = rng.gen_range(0.02..0.98);
            vals[i * k + j] = v;
            vals[j * k + i] = v;
        }
    }
    BlockGraphon::from_parts(c, vals)
}

/// Brings `g` up to `k` blocks by splitting its largest blocks in two, then
/// perturbs the logits by up to `noise` so that split copies can separate.
pub(crate) fn embed(g: &BlockGraphon, k: usize, noise: f64, rng: &mut ChaCha8Rng) -> BlockGraphon {
    let mut out = g.clone();
    while out.num_blocks() < k {
        let largest = (0..out.num_blocks())
            .max_by(|&a, &b| out.fractions()[a].total_cmp(&out.fractions()[b]))
            .unwrap();
        let w = rng.gen_range(0.35..0.65);
        out = out.split_block(largest, w);
    }
    if noise == 0.0 {
        return out;
    }
    let k = out.num_blocks();
    let mut vals = out.values_flat().to_vec();
    for i in 0..k {
        for j in i..k {
            let v = vals[i * k + j].clamp(1e-9, 1.0 - 1e-9);
            let shifted = logistic(logit(v) + rng.gen_range(-noise..noise));
            vals[i * k + j] = shifted;
            vals[j * k + i] = shifted;
        }
    }
    BlockGraphon::from_parts(out.fractions().to_vec(), vals)
}
