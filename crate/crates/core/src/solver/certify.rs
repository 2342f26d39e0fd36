//! Closed-form thresholds and the certificates that settle uniformity without
//! numerical search.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_open_unit, Error, Result};
use crate::graphon::{max_triangle_density, max_two_star_density, neg_entropy_unchecked};
use crate::scalar_phase::{u_region, URegionStatus};
use crate::subgraph::SubgraphSpec;

/// Named closed-form argument deciding the structure of the optimizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// `β₂ = 0`: strictly concave entropy alone.
    ZeroCoupling,
    /// `t(H, ·)` is a function of the edge density only (matchings).
    DensityOnly,
    /// `β₂ < 0` with `|β₂| e(H)(e(H) − 1) < 2`.
    WeakRepulsion,
    /// `H` a `p`-star and `(ε, 2β₂)` outside the U-shaped region of order `p`.
    StarOutsideU,
    /// `β₂ ≥ 0` and `(ε, 2β₂)` outside the U-shaped region of order `e(H)`.
    AttractiveOutsideU,
    /// `H` a `p`-star, `ε = 1/2` and `β₂ ≤ 4/(p(p−1))`.
    FPrimeBound,
    /// `e(H) > v(H)/2` and `β₂` above the clique-versus-uniform threshold.
    CliqueBeatsUniform,
    /// Two-star with `β₂ > 1/(2ε(1−ε))`.
    TwoStarInstability,
}

impl Certificate {
    pub fn proves_uniform(self) -> bool {
        !matches!(
            self,
            Certificate::CliqueBeatsUniform | Certificate::TwoStarInstability
        )
    }

    pub fn description(self) -> &'static str {
        match self {
            Certificate::ZeroCoupling => "zero coupling",
            Certificate::DensityOnly => "density fixed by edge density",
            Certificate::WeakRepulsion => "weak repulsion bound",
            Certificate::StarOutsideU => "star outside U-region",
            Certificate::AttractiveOutsideU => "attractive outside U-region",
            Certificate::FPrimeBound => "one-half-line/F-prime bound",
            Certificate::CliqueBeatsUniform => "clique beats uniform",
            Certificate::TwoStarInstability => "two-star instability",
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.description())
    }
}

/// `β₂` above which the clique graphon beats the uniform one:
/// `−½ I(ε) / (ε^{v/2} − ε^{e})`. `None` unless `e(H) > v(H)/2`.
pub fn threshold_ve(h: &SubgraphSpec, epsilon: f64) -> Result<Option<f64>> {
    check_open_unit("epsilon", epsilon)?;
    let (v, e) = (h.vertex_count() as f64, h.edge_count() as f64);
    if e <= v / 2.0 {
        return Ok(None);
    }
    let gap = epsilon.powf(v / 2.0) - epsilon.powf(e);
    Ok(Some(-0.5 * neg_entropy_unchecked(epsilon) / gap))
}

/// `1 / (2ε(1−ε))`.
pub fn threshold_twostar(epsilon: f64) -> Result<f64> {
    check_open_unit("epsilon", epsilon)?;
    Ok(1.0 / (2.0 * epsilon * (1.0 - epsilon)))
}

/// Bracket `[lo, hi]` for `ψ/β₂`: `lo` is the largest density of `H` at edge
/// density `ε`, `hi = lo + log 2 / (2β₂)`.
pub fn limit_ratio(h: &SubgraphSpec, epsilon: f64, beta2: f64) -> Result<(f64, f64)> {
    check_open_unit("epsilon", epsilon)?;
    if !(beta2 > 0.0 && beta2.is_finite()) {
        return Err(Error::domain("beta2", beta2, "positive reals"));
    }
    let lo = if h.is_triangle() {
        max_triangle_density(epsilon)?
    } else if h.star_order() == Some(2) {
        max_two_star_density(epsilon)?
    } else {
        return Err(Error::Unsupported(format!(
            "limit bracket is only available for the two-star and the triangle, not {}",
            h.label()
        )));
    };
    Ok((lo, lo + std::f64::consts::LN_2 / (2.0 * beta2)))
}

/// First certificate that applies at `(H, ε, β₂)`, in a fixed order: uniform
/// certificates before non-uniform ones.
pub fn certify(h: &SubgraphSpec, epsilon: f64, beta2: f64) -> Result<Option<Certificate>> {
    check_open_unit("epsilon", epsilon)?;
    check_finite("beta2", beta2)?;
    let e = h.edge_count();
    let star = h.star_order().filter(|&p| p >= 2);

    if beta2 == 0.0 {
        return Ok(Some(Certificate::ZeroCoupling));
    }
    if h.is_matching() {
        return Ok(Some(Certificate::DensityOnly));
    }
    let ef = e as f64;
    if beta2 < 0.0 && beta2.abs() * ef * (ef - 1.0) < 2.0 {
        return Ok(Some(Certificate::WeakRepulsion));
    }
    if let Some(p) = star {
        if outside_u(epsilon, 2.0 * beta2, p as u32)? {
            return Ok(Some(Certificate::StarOutsideU));
        }
    } else if beta2 >= 0.0 && outside_u(epsilon, 2.0 * beta2, e as u32)? {
        return Ok(Some(Certificate::AttractiveOutsideU));
    }
    if let Some(p) = star {
        let bound = 4.0 / (p * (p - 1)) as f64;
        if epsilon == 0.5 && beta2 > 0.0 && beta2 <= bound {
            return Ok(Some(Certificate::FPrimeBound));
        }
    }
    if beta2 > 0.0 {
        if let Some(t) = threshold_ve(h, epsilon)? {
            if beta2 > t {
                return Ok(Some(Certificate::CliqueBeatsUniform));
            }
        }
        if star == Some(2) && beta2 > threshold_twostar(epsilon)? {
            return Ok(Some(Certificate::TwoStarInstability));
        }
    }
    Ok(None)
}

fn outside_u(epsilon: f64, b: f64, p: u32) -> Result<bool> {
    // the region is open, so its boundary counts as outside
    Ok(u_region(epsilon, b, p)?.status != URegionStatus::Inside)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ve_thresholds() {
        let tri = threshold_ve(&SubgraphSpec::triangle(), 0.25).unwrap().unwrap();
        assert_abs_diff_eq!(tri, 2.570674946828838, epsilon = 1e-12);
        assert!((tri - 2.570672).abs() < 1e-5);
        let two = threshold_ve(&SubgraphSpec::two_star(), 0.25).unwrap().unwrap();
        assert_abs_diff_eq!(two, 4.498681156950467, epsilon = 1e-12);
        assert_eq!(threshold_ve(&SubgraphSpec::edge(), 0.25).unwrap(), None);
        assert!(threshold_ve(&SubgraphSpec::triangle(), 0.0).is_err());
        assert!(threshold_ve(&SubgraphSpec::triangle(), 1.0).is_err());
    }

    #[test]
    fn two_star_threshold() {
        assert_eq!(threshold_twostar(0.5).unwrap(), 2.0);
        assert_abs_diff_eq!(threshold_twostar(0.25).unwrap(), 8.0 / 3.0, epsilon = 1e-15);
        for eps in [0.1, 0.3, 0.45, 0.55, 0.9] {
            assert!(threshold_twostar(eps).unwrap() > 2.0);
        }
    }

    #[test]
    fn limit_brackets() {
        let (lo, hi) = limit_ratio(&SubgraphSpec::two_star(), 0.3, 200.0).unwrap();
        assert_abs_diff_eq!(lo, 0.185662018573853, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 0.187394886525253, epsilon = 1e-12);
        let (lo, hi) = limit_ratio(&SubgraphSpec::triangle(), 0.25, 100.0).unwrap();
        assert_eq!(lo, 0.125);
        assert_abs_diff_eq!(hi, 0.128465735902800, epsilon = 1e-12);
        let (a, b) = limit_ratio(&SubgraphSpec::triangle(), 0.25, 1e9).unwrap();
        assert!(b - a < 1e-9);
        assert!(limit_ratio(&SubgraphSpec::star(3).unwrap(), 0.25, 1.0).is_err());
    }

    #[test]
    fn certificate_order() {
        let two = SubgraphSpec::two_star();
        let tri = SubgraphSpec::triangle();
        assert_eq!(certify(&two, 0.5, 0.0).unwrap(), Some(Certificate::ZeroCoupling));
        assert_eq!(certify(&two, 0.5, 1.0).unwrap(), Some(Certificate::StarOutsideU));
        assert_eq!(certify(&two, 0.5, 1.5).unwrap(), Some(Certificate::FPrimeBound));
        assert_eq!(certify(&two, 0.5, 1.9).unwrap(), Some(Certificate::FPrimeBound));
        assert_eq!(certify(&two, 0.5, 2.5).unwrap(), Some(Certificate::TwoStarInstability));
        assert_eq!(certify(&two, 0.5, -3.0).unwrap(), Some(Certificate::StarOutsideU));
        assert_eq!(certify(&tri, 0.5, -0.2).unwrap(), Some(Certificate::WeakRepulsion));
        assert_eq!(certify(&tri, 0.25, 3.0).unwrap(), Some(Certificate::CliqueBeatsUniform));
        assert_eq!(certify(&SubgraphSpec::edge(), 0.3, 7.0).unwrap(), Some(Certificate::DensityOnly));
        assert!(certify(&tri, 1.0, 1.0).is_err());
    }

    #[test]
    fn negative_bound_is_strict() {
        // |β₂| e(e−1) = 2 exactly for the triangle at β₂ = −1/3
        let tri = SubgraphSpec::triangle();
        assert_ne!(certify(&tri, 0.5, -1.0 / 3.0).unwrap(), Some(Certificate::WeakRepulsion));
    }
}
