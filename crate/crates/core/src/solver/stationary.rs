//! The symmetric two-star stationary point at edge density `1/2` and the
//! second variation of the objective around it.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::graphon::BlockGraphon;

/// `G(δ) = log((½ + δ)/(½ − δ)) − 2β₂δ`.
fn g_fn(delta: f64, beta2: f64) -> f64 {
    ((0.5 + delta) / (0.5 - delta)).ln() - 2.0 * beta2 * delta
}

/// Positive root of `G` on `(0, ½)` by bisection; `0` when `β₂ ≤ 2`.
pub fn stationary_delta(beta2: f64) -> f64 {
    if beta2 <= 2.0 || beta2.is_nan() {
        return 0.0;
    }
    // G < 0 just right of 0 (G'(0) = 4 − 2β₂ < 0) and G → +∞ at ½
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        if g_fn(mid, beta2) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Same root by Newton's method from the right, where `G` is convex and
/// increasing, so the iterates decrease monotonically onto the root.
/// `None` if the starting point cannot be represented (very large `β₂`).
pub fn stationary_delta_newton(beta2: f64) -> Option<f64> {
    if beta2 <= 2.0 {
        return Some(0.0);
    }
    let mut delta = 0.5 - 0.5 * (-2.0 * beta2).exp();
    if delta >= 0.5 || g_fn(delta, beta2) <= 0.0 {
        return None;
    }
    for _ in 0..200 {
        let d1 = 1.0 / (0.5 - delta) + 1.0 / (0.5 + delta) - 2.0 * beta2;
        let step = g_fn(delta, beta2) / d1;
        let next = delta - step;
        if !(next > 0.0 && next < 0.5) {
            return None;
        }
        if (next - delta).abs() <= 1e-17 {
            return Some(next);
        }
        delta = next;
    }
    Some(delta)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub beta2: f64,
    pub delta: f64,
    pub graphon: BlockGraphon,
    /// Multiplier of the edge constraint, equal to `β₂`.
    pub lagrange_beta1: f64,
    /// Max over cells of `|2β₁ − 2β₂ g(x) − 2β₂ g(y) − log((1 − h)/h)|`.
    pub el_residual: f64,
}

/// `½ + δ` on the first half squared, `½ − δ` on the second, `½` across.
pub fn stationary_graphon(beta2: f64) -> Result<StationaryPoint> {
    check_finite("beta2", beta2)?;
    let delta = stationary_delta(beta2);
    let graphon = if delta == 0.0 {
        BlockGraphon::uniform(0.5)?
    } else {
        BlockGraphon::from_flat(vec![0.5, 0.5], vec![0.5 + delta, 0.5, 0.5, 0.5 - delta])?
    };
    let beta1 = beta2;
    let g = graphon.degree_profile();
    let k = graphon.num_blocks();
    let mut el_residual: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let h = graphon.value(i, j);
            let lhs = 2.0 * beta1 - 2.0 * beta2 * g[i] - 2.0 * beta2 * g[j];
            el_residual = el_residual.max((lhs - ((1.0 - h) / h).ln()).abs());
        }
    }
    Ok(StationaryPoint {
        beta2,
        delta,
        graphon,
        lagrange_beta1: beta1,
        el_residual,
    })
}

/// Signed symmetric step function used as a direction `δh`. Its partition
/// must have a cut at `1/2` so that every cell lies in one of the two
/// regions `R₁` (both coordinates on the same side of `1/2`) and `R₂`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepPerturbation {
    pub fractions: Vec<f64>,
    /// Row-major `K × K`.
    pub values: Vec<f64>,
}

impl StepPerturbation {
    /// `+e` on `R₁`, `−e` on `R₂`.
    pub fn checkerboard(e: f64) -> Self {
        StepPerturbation {
            fractions: vec![0.5, 0.5],
            values: vec![e, -e, -e, e],
        }
    }

    /// Blocks `[0,½), [½,¾), [¾,1)`: `+e` between the first and third,
    /// `−e` between the first and second, zero elsewhere.
    pub fn localized(e: f64) -> Self {
        StepPerturbation {
            fractions: vec![0.5, 0.25, 0.25],
            values: vec![0.0, -e, e, -e, 0.0, 0.0, e, 0.0, 0.0],
        }
    }

    pub fn zero() -> Self {
        StepPerturbation {
            fractions: vec![0.5, 0.5],
            values: vec![0.0; 4],
        }
    }

    fn mean(&self) -> f64 {
        let k = self.fractions.len();
        let mut total = 0.0;
        for i in 0..k {
            for j in 0..k {
                total += self.fractions[i] * self.fractions[j] * self.values[i * k + j];
            }
        }
        total
    }
}

/// `β₂ ∫ (∫ δh dy)² dx − (1 − 4δ²)⁻¹ ∬_{R₁} δh² − ∬_{R₂} δh²`, evaluated
/// exactly on a step direction.
pub fn second_variation(delta: f64, beta2: f64, dir: &StepPerturbation) -> Result<f64> {
    let k = dir.fractions.len();
    if dir.values.len() != k * k {
        return Err(Error::InvalidGraphon("perturbation must be K x K".into()));
    }
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::domain("delta", delta, "[0, 1/2)"));
    }
    for i in 0..k {
        for j in 0..i {
            if (dir.values[i * k + j] - dir.values[j * k + i]).abs() > 1e-15 {
                return Err(Error::InvalidGraphon("perturbation must be symmetric".into()));
            }
        }
    }
    let total: f64 = dir.fractions.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidGraphon("perturbation fractions must sum to 1".into()));
    }
    let mean = dir.mean();
    if mean.abs() > 1e-12 {
        return Err(Error::domain("perturbation mean", mean, "zero"));
    }
    // which half each block sits in; a block straddling 1/2 is rejected
    let mut side = Vec::with_capacity(k);
    let mut start = 0.0;
    for &c in &dir.fractions {
        let end = start + c;
        if c > 0.0 && start < 0.5 - 1e-12 && end > 0.5 + 1e-12 {
            return Err(Error::InvalidGraphon(
                "perturbation blocks must not straddle 1/2".into(),
            ));
        }
        side.push(end <= 0.5 + 1e-12);
        start = end;
    }
    let same = 1.0 / (1.0 - 4.0 * delta * delta);
    let mut degree_term = 0.0;
    let mut entropy_term = 0.0;
    for i in 0..k {
        let mut row = 0.0;
        for j in 0..k {
            let v = dir.values[i * k + j];
            let w = dir.fractions[i] * dir.fractions[j];
            row += dir.fractions[j] * v;
            entropy_term += w * v * v * if side[i] == side[j] { same } else { 1.0 };
        }
        degree_term += dir.fractions[i] * row * row;
    }
    Ok(beta2 * degree_term - entropy_term)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SaddleVerdict {
    /// Both canonical directions are descent directions.
    MaxCandidate,
    /// The two directions have opposite signs.
    Saddle,
    /// One direction is flat to second order.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleReport {
    pub beta2: f64,
    pub delta: f64,
    /// Second variation along the unit checkerboard direction.
    pub checkerboard: f64,
    /// Second variation along the unit localized direction.
    pub localized: f64,
    pub verdict: SaddleVerdict,
}

pub fn saddle_check(beta2: f64) -> Result<SaddleReport> {
    check_finite("beta2", beta2)?;
    let delta = stationary_delta(beta2);
    let checkerboard = second_variation(delta, beta2, &StepPerturbation::checkerboard(1.0))?;
    let localized = second_variation(delta, beta2, &StepPerturbation::localized(1.0))?;
    let verdict = if checkerboard.abs() <= 1e-12 || localized.abs() <= 1e-12 {
        SaddleVerdict::Degenerate
    } else if (checkerboard > 0.0) != (localized > 0.0) {
        SaddleVerdict::Saddle
    } else {
        SaddleVerdict::MaxCandidate
    };
    Ok(SaddleReport {
        beta2,
        delta,
        checkerboard,
        localized,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn delta_values() {
        assert_eq!(stationary_delta(2.0), 0.0);
        assert_eq!(stationary_delta(1.0), 0.0);
        let d = stationary_delta(3.0);
        assert_abs_diff_eq!(d, 0.429279818320055, epsilon = 1e-12);
        assert_abs_diff_eq!(stationary_delta_newton(3.0).unwrap(), d, epsilon = 1e-14);
        assert!(stationary_delta(200.0) > 0.5 - 1e-12);
        let d = stationary_delta(2.0001);
        assert!(d > 0.0 && d < 0.02);
    }

    #[test]
    fn stationary_graphon_shape() {
        let sp = stationary_graphon(3.0).unwrap();
        assert_eq!(sp.graphon.edge_density(), 0.5);
        let g = sp.graphon.degree_profile();
        assert_abs_diff_eq!(g[0], 0.5 + sp.delta / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g[1], 0.5 - sp.delta / 2.0, epsilon = 1e-15);
        assert!(sp.el_residual <= 1e-10);
        let flat = stationary_graphon(1.5).unwrap();
        assert_eq!(flat.graphon, BlockGraphon::uniform(0.5).unwrap());
        assert_eq!(flat.el_residual, 0.0);
    }

    #[test]
    fn second_variation_closed_forms() {
        let (delta, beta2, e) = (0.3, 5.0, 0.2);
        let cb = second_variation(delta, beta2, &StepPerturbation::checkerboard(e)).unwrap();
        let expected = -0.5 * (1.0 / (1.0 - 4.0 * delta * delta) + 1.0) * e * e;
        assert_abs_diff_eq!(cb, expected, epsilon = 1e-15);
        let loc = second_variation(delta, beta2, &StepPerturbation::localized(e)).unwrap();
        assert_abs_diff_eq!(loc, beta2 / 2.0 * e * e / 4.0 - e * e / 2.0, epsilon = 1e-15);
        assert_eq!(second_variation(delta, beta2, &StepPerturbation::zero()).unwrap(), 0.0);
    }

    #[test]
    fn second_variation_rejects_bad_directions() {
        let biased = StepPerturbation {
            fractions: vec![0.5, 0.5],
            values: vec![1.0, 0.0, 0.0, 0.0],
        };
        assert!(second_variation(0.1, 3.0, &biased).is_err());
        let straddle = StepPerturbation {
            fractions: vec![0.25, 0.5, 0.25],
            values: vec![0.0, 1.0, -1.0, 1.0, 0.0, -1.0, -1.0, -1.0, 4.0],
        };
        assert!(second_variation(0.1, 3.0, &straddle).is_err());
    }

    #[test]
    fn saddle_verdicts() {
        assert_eq!(saddle_check(5.0).unwrap().verdict, SaddleVerdict::Saddle);
        let r = saddle_check(3.0).unwrap();
        assert_eq!(r.verdict, SaddleVerdict::MaxCandidate);
        assert_abs_diff_eq!(r.localized, 3.0 / 8.0 - 0.5, epsilon = 1e-15);
        let r = saddle_check(4.0).unwrap();
        assert_eq!(r.verdict, SaddleVerdict::Degenerate);
        assert_eq!(r.localized, 0.0);
    }
}
