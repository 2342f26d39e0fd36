//! One-dimensional analysis of `ℓ(x) = β₁x + β₂x^p − I(x)` on `[0,1]`: global
//! maximizers, the curve in the `(β₁, β₂)` plane where two of them coexist, and
//! the U-shaped region it induces in the `(ε, B)` plane.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_open_unit, check_unit, Error, Result};
use crate::graphon::neg_entropy_unchecked;

/// Grid used to isolate sign changes of `ℓ'`.
pub const ROOT_GRID: usize = 10_000;
/// Two candidate maxima are tied when their `ℓ` values differ by less than this.
pub const TIE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarModel {
    pub p: u32,
    pub beta1: f64,
    pub beta2: f64,
}

impl ScalarModel {
    pub fn new(p: u32, beta1: f64, beta2: f64) -> Result<Self> {
        if p < 2 {
            return Err(Error::domain("p", p as f64, "integers >= 2"));
        }
        check_finite("beta1", beta1)?;
        check_finite("beta2", beta2)?;
        Ok(ScalarModel { p, beta1, beta2 })
    }

    pub fn ell(&self, x: f64) -> Result<f64> {
        check_unit("x", x)?;
        Ok(self.ell_unchecked(x))
    }

    pub fn ell_deriv(&self, x: f64) -> Result<f64> {
        check_open_unit("x", x)?;
        Ok(self.deriv_unchecked(x))
    }

    #[inline]
    fn ell_unchecked(&self, x: f64) -> f64 {
        self.beta1 * x + self.beta2 * x.powi(self.p as i32) - neg_entropy_unchecked(x)
    }

    #[inline]
    fn deriv_unchecked(&self, x: f64) -> f64 {
        let p = self.p as f64;
        self.beta1 + p * self.beta2 * x.powi(self.p as i32 - 1) - (x.ln() - (-x).ln_1p())
    }

    /// Global maximizers of `ℓ` on `[0, 1]`.
    pub fn global_maximizers(&self) -> MaximizerSet {
        let grid = search_grid();
        let mut candidates = Vec::new();
        let mut prev = (grid[0], self.deriv_unchecked(grid[0]));
        for &x in &grid[1..] {
            let d = self.deriv_unchecked(x);
            // interior local maxima: ℓ' goes from positive to non-positive
            if prev.1 > 0.0 && d <= 0.0 {
                let root = if d == 0.0 {
                    x
                } else {
                    bisect(|t| self.deriv_unchecked(t), prev.0, x)
                };
                candidates.push(root);
            }
            prev = (x, d);
        }
        if candidates.is_empty() {
            // ℓ' has the sign of +∞ at 0 and −∞ at 1; only reachable when
            // the root sits beyond the grid's resolution near an endpoint
            let x = if self.deriv_unchecked(0.5) > 0.0 {
                *grid.last().unwrap()
            } else {
                grid[0]
            };
            candidates.push(x);
        }
        let values: Vec<f64> = candidates.iter().map(|&x| self.ell_unchecked(x)).collect();
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut points: Vec<(f64, f64)> = candidates
            .into_iter()
            .zip(values)
            .filter(|&(_, v)| v >= best - TIE_TOL)
            .collect();
        if points.len() > 2 {
            let last = points.len() - 1;
            points = vec![points[0], points[last]];
        }
        MaximizerSet {
            on_curve: points.len() == 2,
            points: points.iter().map(|p| p.0).collect(),
            values: points.iter().map(|p| p.1).collect(),
        }
    }

    /// Inflection points `a < b` of `ℓ`, present when `β₂ > β₂^c(p)`.
    fn inflections(&self) -> Option<(f64, f64)> {
        let (_, b2c) = critical_point(self.p);
        if self.beta2 <= b2c {
            return None;
        }
        let p = self.p as f64;
        let peak = (p - 1.0) / p;
        let f = |x: f64| p * (p - 1.0) * self.beta2 * x.powi(self.p as i32 - 1) * (1.0 - x) - 1.0;
        let a = bisect(|x| -f(x), f64::MIN_POSITIVE, peak);
        let b = bisect(f, peak, 1.0);
        Some((a, b))
    }
}

/// Global maximizers of `ℓ`, ascending, with their values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximizerSet {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    pub on_curve: bool,
}

/// Endpoint of the transition curve: `(log(p−1) − p/(p−1), p^{p−1}/(p−1)^p)`.
pub fn critical_point(p: u32) -> (f64, f64) {
    let pf = p as f64;
    let beta1 = (pf - 1.0).ln() - pf / (pf - 1.0);
    let beta2 = pf.powi(p as i32 - 1) / (pf - 1.0).powi(p as i32);
    (beta1, beta2)
}

/// Coordinates of the lowest point of the U-shaped region: `((p−1)/p, β₂^c)`.
pub fn u_region_bottom(p: u32) -> (f64, f64) {
    let pf = p as f64;
    ((pf - 1.0) / pf, critical_point(p).1)
}

/// Point on the transition curve at height `β₂`: the `β₁` at which `ℓ` has two
/// global maximizers, together with those maximizers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub beta2: f64,
    pub beta1: f64,
    pub x1: f64,
    pub x2: f64,
}

pub fn transition_curve(beta2: f64, p: u32) -> Result<CurvePoint> {
    let (_, b2c) = critical_point(p);
    check_finite("beta2", beta2)?;
    if beta2 <= b2c {
        return Err(Error::Domain {
            name: "beta2",
            value: beta2,
            expected: "values above the critical beta2 of the transition curve",
        });
    }
    let probe = ScalarModel::new(p, 0.0, beta2)?;
    let (a, b) = probe.inflections().ok_or_else(|| {
        Error::NonConvergence("no inflection pair above the critical point".into())
    })?;
    // ℓ' = β₁ + k(x); the two local maxima coexist for β₁ ∈ (−k(b), −k(a))
    let k = |x: f64| probe.deriv_unchecked(x);
    let (mut lo, mut hi) = (-k(b), -k(a));
    let locals = |beta1: f64| {
        let m = ScalarModel { beta1, ..probe };
        let low = bisect(|x| m.deriv_unchecked(x), f64::MIN_POSITIVE, a);
        let high = bisect(|x| m.deriv_unchecked(x), b, 1.0);
        (low, high, m.ell_unchecked(high) - m.ell_unchecked(low))
    };
    // the gap ℓ(x_high) − ℓ(x_low) increases with β₁ at rate x_high − x_low
    let mut best = locals(0.5 * (lo + hi));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        best = locals(mid);
        if best.2 > 0.0 {
            hi = mid;
        } else if best.2 < 0.0 {
            lo = mid;
        } else {
            lo = mid;
            hi = mid;
            break;
        }
    }
    Ok(CurvePoint {
        beta2,
        beta1: 0.5 * (lo + hi),
        x1: best.0,
        x2: best.1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum URegionStatus {
    Outside,
    Inside,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct URegionReport {
    pub status: URegionStatus,
    /// The coexisting maximizers on the curve at height `B`, when `B > β₂^c`.
    pub maximizers: Option<(f64, f64)>,
}

/// Locates `(ε, B)` relative to the U-shaped region of order `p`.
pub fn u_region(epsilon: f64, b: f64, p: u32) -> Result<URegionReport> {
    check_open_unit("epsilon", epsilon)?;
    check_finite("B", b)?;
    if p < 2 {
        return Err(Error::domain("p", p as f64, "integers >= 2"));
    }
    let (eps_c, b_c) = u_region_bottom(p);
    if b <= b_c {
        let at_bottom = (b - b_c).abs() <= TIE_TOL && (epsilon - eps_c).abs() <= TIE_TOL;
        let status = if at_bottom {
            URegionStatus::Boundary
        } else {
            URegionStatus::Outside
        };
        return Ok(URegionReport {
            status,
            maximizers: None,
        });
    }
    let cp = transition_curve(b, p)?;
    let status = if (epsilon - cp.x1).abs() <= TIE_TOL || (epsilon - cp.x2).abs() <= TIE_TOL {
        URegionStatus::Boundary
    } else if cp.x1 < epsilon && epsilon < cp.x2 {
        URegionStatus::Inside
    } else {
        URegionStatus::Outside
    };
    Ok(URegionReport {
        status,
        maximizers: Some((cp.x1, cp.x2)),
    })
}

/// Step profile on `[0,1]` taking `values[0]` on measure `measures[0]` and
/// `values[1]` on the rest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoValuedProfile {
    pub values: [f64; 2],
    pub measures: [f64; 2],
}

impl TwoValuedProfile {
    pub fn mean(&self) -> f64 {
        self.values[0] * self.measures[0] + self.values[1] * self.measures[1]
    }

    /// `∫ (B g^p − I(g))`.
    pub fn objective(&self, b: f64, p: u32) -> f64 {
        (0..2)
            .map(|i| {
                let x = self.values[i];
                self.measures[i] * (b * x.powi(p as i32) - neg_entropy_unchecked(x))
            })
            .sum()
    }
}

/// `∫ (B g^p − I(g))` at the constant profile `g ≡ ε`.
pub fn constant_profile_objective(epsilon: f64, b: f64, p: u32) -> f64 {
    b * epsilon.powi(p as i32) - neg_entropy_unchecked(epsilon)
}

/// Optimal profile inside the U-shaped region: `x₁` on measure
/// `(x₂ − ε)/(x₂ − x₁)`, `x₂` on the rest.
pub fn u_region_optimizer(epsilon: f64, b: f64, p: u32) -> Result<TwoValuedProfile> {
    let report = u_region(epsilon, b, p)?;
    match (report.status, report.maximizers) {
        (URegionStatus::Inside, Some((x1, x2))) => {
            let m1 = (x2 - epsilon) / (x2 - x1);
            Ok(TwoValuedProfile {
                values: [x1, x2],
                measures: [m1, 1.0 - m1],
            })
        }
        _ => Err(Error::Domain {
            name: "epsilon",
            value: epsilon,
            expected: "points strictly inside the U-shaped region",
        }),
    }
}

/// Points where `ℓ'` is sampled: a uniform grid on `(0,1)` plus log-spaced
/// points towards both endpoints.
fn search_grid() -> Vec<f64> {
    let mut grid = Vec::with_capacity(ROOT_GRID + 600);
    for k in (0..300).rev() {
        // 10^{-300} .. 10^{-5}
        grid.push(10f64.powf(-5.0 - 295.0 * k as f64 / 299.0));
    }
    for i in 1..ROOT_GRID {
        grid.push(i as f64 / ROOT_GRID as f64);
    }
    for k in 0..60 {
        grid.push(1.0 - 10f64.powf(-5.0 - 10.0 * k as f64 / 59.0));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Root of `f` on `[lo, hi]` given `f(lo) > 0 ≥ f(hi)` (sign pattern may also
/// be reversed). Uses geometric midpoints while the bracket spans decades near 0.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_positive = f(lo) > 0.0;
    for _ in 0..2000 {
        let mid = if lo > 0.0 && hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi || hi - lo <= 1e-12 * hi.abs().max(1e-300) {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ell_examples() {
        let m = ScalarModel::new(2, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(m.ell(0.5).unwrap(), std::f64::consts::LN_2, epsilon = 1e-15);
        let m = ScalarModel::new(2, 0.0, 2.0).unwrap();
        assert_abs_diff_eq!(m.ell_deriv(0.5).unwrap(), 2.0, epsilon = 1e-15);
        let m = ScalarModel::new(2, -2.0, 2.0).unwrap();
        assert_abs_diff_eq!(m.ell_deriv(0.5).unwrap(), 0.0, epsilon = 1e-15);
        assert!(m.ell_deriv(0.0).is_err());
        assert!(m.ell(1.1).is_err());
        assert!(ScalarModel::new(1, 0.0, 0.0).is_err());
    }

    #[test]
    fn critical_points() {
        assert_eq!(critical_point(2), (-2.0, 2.0));
        let (b1, b2) = critical_point(3);
        assert_abs_diff_eq!(b1, -0.806852819440055, epsilon = 1e-12);
        assert_abs_diff_eq!(b2, 1.125, epsilon = 1e-15);
    }

    #[test]
    fn maximizer_at_critical_point() {
        let set = ScalarModel::new(2, -2.0, 2.0).unwrap().global_maximizers();
        assert_eq!(set.points.len(), 1);
        // ℓ is extremely flat at the critical point (ℓ''' = 0 too)
        assert_abs_diff_eq!(set.points[0], 0.5, epsilon = 1e-3);
    }

    #[test]
    fn repulsive_maximizer_below_half() {
        let set = ScalarModel::new(2, 0.0, -5.0).unwrap().global_maximizers();
        assert_eq!(set.points.len(), 1);
        assert!(set.points[0] > 0.0 && set.points[0] < 0.5);
        assert!(!set.on_curve);
    }

    #[test]
    fn curve_for_two_stars_is_antidiagonal() {
        for beta2 in [2.2, 3.0, 6.0] {
            let cp = transition_curve(beta2, 2).unwrap();
            assert_abs_diff_eq!(cp.beta1, -beta2, epsilon = 1e-9);
            assert_abs_diff_eq!(cp.x1 + cp.x2, 1.0, epsilon = 1e-9);
            let set = ScalarModel::new(2, cp.beta1, beta2).unwrap().global_maximizers();
            assert_eq!(set.points.len(), 2);
            assert_abs_diff_eq!(set.values[0], set.values[1], epsilon = 1e-9);
        }
        assert!(transition_curve(2.0, 2).is_err());
        assert!(transition_curve(1.0, 3).is_err());
    }

    #[test]
    fn curve_endpoint_and_decrease() {
        let (b1c, b2c) = critical_point(3);
        let near = transition_curve(b2c + 1e-6, 3).unwrap();
        assert!((near.beta1 - b1c).abs() < 1e-2);
        let mut last = f64::INFINITY;
        for beta2 in [1.2, 1.5, 2.0, 3.0, 5.0] {
            let cp = transition_curve(beta2, 3).unwrap();
            assert!(cp.beta1 < last);
            last = cp.beta1;
        }
    }

    #[test]
    fn u_region_examples() {
        assert_eq!(u_region(0.5, 1.5, 2).unwrap().status, URegionStatus::Outside);
        assert_eq!(u_region(0.5, 2.0, 2).unwrap().status, URegionStatus::Boundary);
        let (ec, bc) = u_region_bottom(3);
        assert_eq!(u_region(ec, bc, 3).unwrap().status, URegionStatus::Boundary);
        let r = u_region(0.5, 3.0, 2).unwrap();
        assert_eq!(r.status, URegionStatus::Inside);
        let (x1, x2) = r.maximizers.unwrap();
        assert_abs_diff_eq!(x1 + x2, 1.0, epsilon = 1e-9);
        assert_eq!(u_region(0.02, 3.0, 2).unwrap().status, URegionStatus::Outside);
    }

    #[test]
    fn u_optimizer_profile() {
        let g = u_region_optimizer(0.5, 3.0, 2).unwrap();
        assert_abs_diff_eq!(g.mean(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(g.measures[0], 0.5, epsilon = 1e-9);
        assert!(g.objective(3.0, 2) > constant_profile_objective(0.5, 3.0, 2));

        let (_, x2) = u_region(0.5, 3.0, 2).unwrap().maximizers.unwrap();
        let edge = u_region_optimizer(x2 - 1e-6, 3.0, 2).unwrap();
        assert!(edge.measures[0] < 1e-4);
        assert!(u_region_optimizer(0.5, 1.5, 2).is_err());
    }
}
