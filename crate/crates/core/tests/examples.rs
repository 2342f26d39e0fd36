//! One test per documented operation example.

use approx::assert_abs_diff_eq;
use cergm_core::graphon::{max_triangle_density, max_two_star_density, neg_entropy};
use cergm_core::scalar_phase::{
    critical_point, transition_curve, u_region, u_region_bottom, u_region_optimizer, ScalarModel,
    URegionStatus,
};
use cergm_core::solver::{
    el_fixed_point_star, limit_ratio, monotonicity_audit, repulsive_triangle_scan, saddle_check,
    second_variation, solve_canonical, stationary_delta, stationary_delta_newton,
    stationary_graphon, threshold_twostar, threshold_ve, Classification, FixedPointOptions,
    SaddleVerdict, SolverConfig, StepPerturbation,
};
use cergm_core::subgraph::{hom_density_blocks, hom_density_gradient, hom_density_graph};
use cergm_core::{AdjacencyGraph, BlockGraphon, Error, SubgraphSpec};

const LN2: f64 = std::f64::consts::LN_2;

fn two_star() -> SubgraphSpec {
    SubgraphSpec::two_star()
}

fn triangle() -> SubgraphSpec {
    SubgraphSpec::triangle()
}

// subgraph construction and densities

#[test]
fn make_subgraph_examples() {
    let t = SubgraphSpec::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
    assert_eq!((t.vertex_count(), t.edge_count()), (3, 3));
    assert!(t.is_triangle());
    let s = SubgraphSpec::new(3, [(0, 1), (0, 2)]).unwrap();
    assert_eq!((s.vertex_count(), s.edge_count()), (3, 2));
    assert_eq!(s.star_order(), Some(2));
    let dup = SubgraphSpec::new(2, [(0, 1), (0, 1)]);
    assert!(matches!(dup, Err(Error::InvalidSubgraph(_))));
}

#[test]
fn hom_density_graph_examples() {
    let k4 = AdjacencyGraph::complete(4);
    assert_eq!(hom_density_graph(&SubgraphSpec::edge(), &k4), 0.75);
    let k3 = AdjacencyGraph::complete(3);
    assert_abs_diff_eq!(hom_density_graph(&triangle(), &k3), 6.0 / 27.0, epsilon = 1e-15);
    let path = AdjacencyGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    assert_abs_diff_eq!(hom_density_graph(&two_star(), &path), 6.0 / 27.0, epsilon = 1e-15);
}

#[test]
fn hom_density_blocks_examples() {
    let u = BlockGraphon::uniform(0.5).unwrap();
    assert_abs_diff_eq!(hom_density_blocks(&triangle(), &u).unwrap(), 0.125, epsilon = 1e-15);
    let c = BlockGraphon::clique(0.64).unwrap();
    assert_abs_diff_eq!(hom_density_blocks(&two_star(), &c).unwrap(), 0.512, epsilon = 1e-12);
    let a = BlockGraphon::anticlique(0.3).unwrap();
    let expected = 2.0 * 0.3 + 0.7f64.powf(1.5) - 1.0;
    assert_abs_diff_eq!(hom_density_blocks(&two_star(), &a).unwrap(), expected, epsilon = 1e-12);
    assert_abs_diff_eq!(expected, 0.185662, epsilon = 1e-6);
}

#[test]
fn hom_density_gradient_examples() {
    let g = BlockGraphon::new(vec![0.3, 0.7], vec![vec![0.2, 0.6], vec![0.6, 0.9]]).unwrap();
    let d = hom_density_gradient(&SubgraphSpec::edge(), &g).unwrap();
    assert_abs_diff_eq!(d[0][0], 0.09, epsilon = 1e-15);
    assert_abs_diff_eq!(d[1][1], 0.49, epsilon = 1e-15);
    assert_abs_diff_eq!(d[0][1], 2.0 * 0.21, epsilon = 1e-15);
    assert_abs_diff_eq!(d[1][0], 2.0 * 0.21, epsilon = 1e-15);

    let u = BlockGraphon::uniform(0.4).unwrap();
    let d = hom_density_gradient(&triangle(), &u).unwrap();
    assert_abs_diff_eq!(d[0][0], 3.0 * 0.16, epsilon = 1e-14);

    let d = hom_density_gradient(&two_star(), &g).unwrap();
    let step = 1e-6;
    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        let bump = |s: f64| {
            let mut v = g.values();
            v[i][j] += s;
            if i != j {
                v[j][i] += s;
            }
            let b = BlockGraphon::new(g.fractions().to_vec(), v).unwrap();
            hom_density_blocks(&two_star(), &b).unwrap()
        };
        let fd = (bump(step) - bump(-step)) / (2.0 * step);
        assert_abs_diff_eq!(d[i][j], fd, epsilon = 1e-8);
    }
}

// graphons

#[test]
fn entropy_examples() {
    assert_eq!(neg_entropy(0.0).unwrap(), 0.0);
    assert_eq!(neg_entropy(1.0).unwrap(), 0.0);
    assert_abs_diff_eq!(neg_entropy(0.5).unwrap(), -LN2, epsilon = 1e-15);
    assert_abs_diff_eq!(neg_entropy(0.25).unwrap(), -0.562335, epsilon = 1e-6);
    assert!(neg_entropy(1.5).is_err());
}

#[test]
fn uniform_examples() {
    let u = BlockGraphon::uniform(0.5).unwrap();
    assert_eq!(u.fractions(), &[1.0]);
    assert_eq!(u.values(), vec![vec![0.5]]);
    let u = BlockGraphon::uniform(0.3).unwrap();
    assert_eq!(u.edge_density(), 0.3);
    assert_eq!(u.entropy_integral(), neg_entropy(0.3).unwrap());
}

#[test]
fn clique_and_anticlique_examples() {
    let c = BlockGraphon::clique(0.25).unwrap();
    assert_eq!(c.fractions(), &[0.5, 0.5]);
    assert_eq!(c.values(), vec![vec![1.0, 0.0], vec![0.0, 0.0]]);
    assert_abs_diff_eq!(c.edge_density(), 0.25, epsilon = 1e-15);

    let a = BlockGraphon::anticlique(0.5).unwrap();
    assert_abs_diff_eq!(a.fractions()[0], 1.0 - 0.5f64.sqrt(), epsilon = 1e-15);
    assert_abs_diff_eq!(a.fractions()[1], 0.5f64.sqrt(), epsilon = 1e-15);
    assert_abs_diff_eq!(a.edge_density(), 0.5, epsilon = 1e-15);

    for eps in [0.1, 0.25, 0.7] {
        let c = BlockGraphon::clique(eps).unwrap();
        let t = hom_density_blocks(&triangle(), &c).unwrap();
        assert_abs_diff_eq!(t, eps.powf(1.5), epsilon = 1e-14);
    }
}

#[test]
fn checkerboard_examples() {
    let g = BlockGraphon::checkerboard(0.5, 0.125).unwrap();
    assert!(g.values_flat().iter().all(|&v| (v - 0.5).abs() < 1e-15));

    let g = BlockGraphon::checkerboard(0.5, 0.0).unwrap();
    assert_abs_diff_eq!(g.value(0, 0), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(g.value(1, 1), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(g.value(0, 1), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(hom_density_blocks(&triangle(), &g).unwrap(), 0.0, epsilon = 1e-15);

    let g = BlockGraphon::checkerboard(0.5, 0.1).unwrap();
    let r = 0.025f64.cbrt();
    assert_abs_diff_eq!(r, 0.29240, epsilon = 1e-5);
    let mut vals: Vec<f64> = g.values_flat().to_vec();
    vals.sort_by(f64::total_cmp);
    assert_abs_diff_eq!(vals[0], 0.5 - r, epsilon = 1e-14);
    assert_abs_diff_eq!(vals[3], 0.5 + r, epsilon = 1e-14);
    assert_abs_diff_eq!(hom_density_blocks(&triangle(), &g).unwrap(), 0.1, epsilon = 1e-14);
}

#[test]
fn density_and_entropy_examples() {
    let u = BlockGraphon::uniform(0.37).unwrap();
    assert_eq!(u.edge_density(), 0.37);
    assert_eq!(u.entropy_integral(), neg_entropy(0.37).unwrap());
    let c = BlockGraphon::clique(0.25).unwrap();
    assert_abs_diff_eq!(c.edge_density(), 0.25, epsilon = 1e-15);
    assert_eq!(c.entropy_integral(), 0.0);
    let k = BlockGraphon::checkerboard(0.5, 0.0).unwrap();
    assert_abs_diff_eq!(k.edge_density(), 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(k.entropy_integral(), 0.0, epsilon = 1e-15);
}

#[test]
fn objective_examples() {
    let u = BlockGraphon::uniform(0.5).unwrap();
    let v = u.objective(&two_star(), 1.0).unwrap();
    assert_abs_diff_eq!(v, 0.25 + 0.5 * LN2, epsilon = 1e-15);
    assert_abs_diff_eq!(v, 0.596574, epsilon = 1e-6);

    let g = BlockGraphon::new(vec![0.2, 0.8], vec![vec![0.9, 0.1], vec![0.1, 0.4]]).unwrap();
    assert_eq!(g.objective(&triangle(), 0.0).unwrap(), -0.5 * g.entropy_integral());

    let c = BlockGraphon::clique(0.25).unwrap();
    assert_abs_diff_eq!(c.objective(&triangle(), 1.0).unwrap(), 0.125, epsilon = 1e-15);
}

#[test]
fn degree_profile_examples() {
    assert_eq!(BlockGraphon::uniform(0.3).unwrap().degree_profile(), vec![0.3]);
    let sp = stationary_graphon(3.0).unwrap();
    let g = sp.graphon.degree_profile();
    assert_abs_diff_eq!(g[0], 0.5 + sp.delta / 2.0, epsilon = 1e-15);
    assert_abs_diff_eq!(g[1], 0.5 - sp.delta / 2.0, epsilon = 1e-15);
    let g = BlockGraphon::clique(0.36).unwrap().degree_profile();
    assert_abs_diff_eq!(g[0], 0.6, epsilon = 1e-15);
    assert_eq!(g[1], 0.0);
}

#[test]
fn maximal_density_examples() {
    assert_abs_diff_eq!(max_two_star_density(0.5).unwrap(), 0.5f64.powf(1.5), epsilon = 1e-15);
    assert_abs_diff_eq!(max_two_star_density(0.5).unwrap(), 0.353553, epsilon = 1e-6);
    // both branches meet at one half
    let below = 2.0 * 0.5 + 0.5f64.powf(1.5) - 1.0;
    assert_abs_diff_eq!(below, 0.5f64.powf(1.5), epsilon = 1e-15);
    assert_abs_diff_eq!(max_two_star_density(0.3).unwrap(), 0.185662, epsilon = 1e-6);
    assert_abs_diff_eq!(max_triangle_density(0.25).unwrap(), 0.125, epsilon = 1e-15);
}

#[test]
fn complement_examples() {
    let u = BlockGraphon::uniform(0.5).unwrap();
    assert_eq!(u.complement(), u);
    let c = BlockGraphon::clique(0.3).unwrap();
    assert_abs_diff_eq!(c.complement().edge_density(), 0.7, epsilon = 1e-15);
    let g = BlockGraphon::new(vec![0.4, 0.6], vec![vec![0.8, 0.3], vec![0.3, 0.5]]).unwrap();
    let g = BlockGraphon::new(g.fractions().to_vec(), {
        // shift to density one half
        let shift = 0.5 - g.edge_density();
        g.values().iter().map(|r| r.iter().map(|v| v + shift).collect()).collect()
    })
    .unwrap();
    assert_abs_diff_eq!(g.edge_density(), 0.5, epsilon = 1e-15);
    let a = g.objective(&two_star(), 2.7).unwrap();
    let b = g.complement().objective(&two_star(), 2.7).unwrap();
    assert_abs_diff_eq!(a, b, epsilon = 1e-12);
}

#[test]
fn block_distance_examples() {
    let g = BlockGraphon::new(vec![0.3, 0.7], vec![vec![0.2, 0.6], vec![0.6, 0.9]]).unwrap();
    assert_eq!(g.block_distance(&g), 0.0);
    let a = BlockGraphon::uniform(0.4).unwrap();
    let b = BlockGraphon::uniform(0.5).unwrap();
    assert_abs_diff_eq!(a.block_distance(&b), 0.1, epsilon = 1e-15);
    for eps in [0.2, 0.5, 0.8] {
        let c = BlockGraphon::clique(eps).unwrap();
        let d = BlockGraphon::anticlique(1.0 - eps).unwrap().complement();
        assert!(c.block_distance(&d) < 1e-12);
    }
}

// scalar problem

#[test]
fn ell_examples() {
    let m = ScalarModel::new(2, 0.0, 0.0).unwrap();
    assert_abs_diff_eq!(m.ell(0.5).unwrap(), LN2, epsilon = 1e-15);
    let m = ScalarModel::new(2, 0.0, 2.0).unwrap();
    assert_abs_diff_eq!(m.ell_deriv(0.5).unwrap(), 2.0, epsilon = 1e-15);
    let m = ScalarModel::new(2, -2.0, 2.0).unwrap();
    assert_abs_diff_eq!(m.ell_deriv(0.5).unwrap(), 0.0, epsilon = 1e-15);
}

#[test]
fn global_maximizer_examples() {
    let m = ScalarModel::new(2, -2.0, 2.0).unwrap().global_maximizers();
    assert_eq!(m.points.len(), 1);
    assert_abs_diff_eq!(m.points[0], 0.5, epsilon = 1e-6);

    let m = ScalarModel::new(2, 0.0, -5.0).unwrap().global_maximizers();
    assert_eq!(m.points.len(), 1);
    assert!(m.points[0] > 0.0 && m.points[0] < 0.5);

    let cp = transition_curve(3.0, 2).unwrap();
    let model = ScalarModel::new(2, cp.beta1, 3.0).unwrap();
    let m = model.global_maximizers();
    assert!(m.on_curve);
    assert_eq!(m.points.len(), 2);
    assert_abs_diff_eq!(m.values[0], m.values[1], epsilon = 1e-9);
}

#[test]
fn critical_point_examples() {
    assert_eq!(critical_point(2), (-2.0, 2.0));
    let (b1, b2) = critical_point(3);
    assert_abs_diff_eq!(b1, LN2 - 1.5, epsilon = 1e-12);
    assert_abs_diff_eq!(b1, -0.806853, epsilon = 1e-6);
    assert_abs_diff_eq!(b2, 1.125, epsilon = 1e-12);
    for p in 2..6 {
        let (e, b) = u_region_bottom(p);
        assert_abs_diff_eq!(e, (p as f64 - 1.0) / p as f64, epsilon = 1e-15);
        assert_eq!(b, critical_point(p).1);
    }
}

#[test]
fn transition_curve_examples() {
    for p in [2, 3] {
        let (b1c, b2c) = critical_point(p);
        let near = transition_curve(b2c * (1.0 + 1e-6), p).unwrap();
        assert!((near.beta1 - b1c).abs() < 1e-3, "p = {p}: {}", near.beta1);
    }
    let cp = transition_curve(2.2, 2).unwrap();
    let m = ScalarModel::new(2, cp.beta1, 2.2).unwrap();
    let set = m.global_maximizers();
    assert_eq!(set.points.len(), 2);
    assert_abs_diff_eq!(m.ell(cp.x1).unwrap(), m.ell(cp.x2).unwrap(), epsilon = 1e-9);
    let mut last = f64::INFINITY;
    for b in [2.1, 2.5, 3.0, 4.0, 6.0] {
        let c = transition_curve(b, 3).unwrap();
        assert!(c.beta1 < last);
        last = c.beta1;
    }
    assert!(transition_curve(1.9, 2).is_err());
}

#[test]
fn u_region_examples() {
    assert_eq!(u_region(0.5, 1.5, 2).unwrap().status, URegionStatus::Outside);
    for p in [2, 3, 4] {
        let (e, b) = u_region_bottom(p);
        assert_eq!(u_region(e, b, p).unwrap().status, URegionStatus::Boundary);
    }
    let r = u_region(0.5, 3.0, 2).unwrap();
    assert_eq!(r.status, URegionStatus::Inside);
    let (x1, x2) = r.maximizers.unwrap();
    assert!(x1 < 0.5 && 0.5 < x2);
}

#[test]
fn u_region_optimizer_examples() {
    let prof = u_region_optimizer(0.4, 3.5, 2).unwrap();
    assert_abs_diff_eq!(prof.mean(), 0.4, epsilon = 1e-15);
    let prof = u_region_optimizer(0.5, 3.0, 2).unwrap();
    assert_abs_diff_eq!(prof.measures[0], prof.measures[1], epsilon = 1e-9);
    assert_abs_diff_eq!(prof.values[0] + prof.values[1], 1.0, epsilon = 1e-9);
    let (_, x2) = u_region(0.5, 3.0, 2).unwrap().maximizers.unwrap();
    let prof = u_region_optimizer(x2 - 1e-7, 3.0, 2).unwrap();
    assert!(prof.measures[0] < 1e-5);
}

// solver

#[test]
fn solve_canonical_examples() {
    let config = SolverConfig::default();
    let r = solve_canonical(&two_star(), 0.5, 1.0, &config).unwrap();
    assert_eq!(r.classification, Classification::UniformCertified);
    assert_eq!(r.best, BlockGraphon::uniform(0.5).unwrap());
    assert_abs_diff_eq!(r.psi, 0.596574, epsilon = 1e-6);

    let r = solve_canonical(&two_star(), 0.5, 3.0, &config).unwrap();
    assert!(!r.classification.is_uniform());
    assert!(r.psi > 0.75 + 0.5 * LN2);
    assert!(r.psi > 1.096574);

    for h in [two_star(), triangle(), SubgraphSpec::star(4).unwrap()] {
        let r = solve_canonical(&h, 0.22, 0.0, &config).unwrap();
        assert_eq!(r.best, BlockGraphon::uniform(0.22).unwrap());
        assert_eq!(r.psi, -0.5 * neg_entropy(0.22).unwrap());
    }
}

#[test]
fn threshold_ve_examples() {
    let t = threshold_ve(&triangle(), 0.25).unwrap().unwrap();
    assert_abs_diff_eq!(t, 2.570672, epsilon = 1e-5);
    let t = threshold_ve(&two_star(), 0.25).unwrap().unwrap();
    assert_abs_diff_eq!(t, 4.498684, epsilon = 1e-5);
    assert_eq!(threshold_ve(&SubgraphSpec::edge(), 0.25).unwrap(), None);
}

#[test]
fn threshold_twostar_examples() {
    assert_eq!(threshold_twostar(0.5).unwrap(), 2.0);
    assert_abs_diff_eq!(threshold_twostar(0.25).unwrap(), 8.0 / 3.0, epsilon = 1e-15);
    let mid = threshold_twostar(0.5).unwrap();
    for e in [0.1, 0.3, 0.49, 0.51, 0.8] {
        assert!(threshold_twostar(e).unwrap() > mid);
    }
}

#[test]
fn fixed_point_examples() {
    let opts = FixedPointOptions::default();
    let r = el_fixed_point_star(2, 0.5, 1.0, &opts).unwrap();
    assert!(r.degrees.iter().all(|&g| (g - 0.5).abs() < 1e-12));
    // logistic(2β₂(½ + ½) − 2β₁) = ½
    assert_abs_diff_eq!(r.beta1, 1.0, epsilon = 1e-10);

    for beta2 in [0.5, 1.5, 1.9] {
        for split in [0.2, 0.5] {
            let o = FixedPointOptions { split, ..opts.clone() };
            let r = el_fixed_point_star(2, 0.5, beta2, &o).unwrap();
            assert!(r.converged);
            assert_eq!(r.graphon.num_blocks(), 1, "beta2 {beta2}");
        }
    }
    // at the boundary the iteration is only sublinear, but still heads to ½
    let o = FixedPointOptions { split: 0.2, ..opts.clone() };
    let r = el_fixed_point_star(2, 0.5, 2.0, &o).unwrap();
    let spread = r.degrees.iter().fold(0.0f64, |m, g| m.max((g - 0.5).abs()));
    assert!(spread < 1e-2, "{spread}");

    let r = el_fixed_point_star(2, 0.5, 3.0, &opts).unwrap();
    assert_eq!(r.graphon.num_blocks(), 2);
    let u = BlockGraphon::uniform(0.5).unwrap().objective(&two_star(), 3.0).unwrap();
    assert!(r.graphon.objective(&two_star(), 3.0).unwrap() > u);
}

#[test]
fn stationary_delta_examples() {
    assert_eq!(stationary_delta(2.0), 0.0);
    let d = stationary_delta(3.0);
    assert_abs_diff_eq!(d, 0.4293, epsilon = 1e-4);
    assert_abs_diff_eq!(d, stationary_delta_newton(3.0).unwrap(), epsilon = 1e-10);
    let mut last = 0.0;
    for b in [2.5, 3.0, 5.0, 10.0, 50.0] {
        let d = stationary_delta(b);
        assert!(d > last);
        last = d;
    }
    assert!(stationary_delta(10.0) > 0.4999);
    assert_abs_diff_eq!(stationary_delta(50.0), 0.5, epsilon = 1e-15);
}

#[test]
fn stationary_graphon_examples() {
    for b in [0.0, 1.0, 2.0] {
        let sp = stationary_graphon(b).unwrap();
        assert_eq!(sp.graphon, BlockGraphon::uniform(0.5).unwrap());
    }
    let sp = stationary_graphon(3.0).unwrap();
    assert_eq!(sp.graphon.edge_density(), 0.5);
    let g = sp.graphon.degree_profile();
    assert_abs_diff_eq!(g[0] - g[1], sp.delta, epsilon = 1e-15);
}

#[test]
fn second_variation_examples() {
    for (delta, e) in [(0.2, 0.1), (0.42927981832005518, 0.05)] {
        let v = second_variation(delta, 3.0, &StepPerturbation::checkerboard(e)).unwrap();
        let expected = -0.5 * (1.0 / (1.0 - 4.0 * delta * delta) + 1.0) * e * e;
        assert_abs_diff_eq!(v, expected, epsilon = 1e-12);
    }
    for beta2 in [3.0, 4.0, 5.0] {
        let e = 0.1;
        let delta = stationary_delta(beta2);
        let v = second_variation(delta, beta2, &StepPerturbation::localized(e)).unwrap();
        assert_abs_diff_eq!(v, beta2 / 2.0 * (e * e / 4.0) - e * e / 2.0, epsilon = 1e-12);
        assert_eq!(v > 1e-15, beta2 > 4.0);
    }
    assert_eq!(second_variation(0.3, 3.0, &StepPerturbation::zero()).unwrap(), 0.0);
}

#[test]
fn saddle_check_examples() {
    assert_eq!(saddle_check(5.0).unwrap().verdict, SaddleVerdict::Saddle);
    let r = saddle_check(3.0).unwrap();
    assert_eq!(r.verdict, SaddleVerdict::MaxCandidate);
    assert_abs_diff_eq!(r.localized, 3.0 / 8.0 - 0.5, epsilon = 1e-12);
    let r = saddle_check(4.0).unwrap();
    assert_abs_diff_eq!(r.localized, 0.0, epsilon = 1e-12);
    assert_eq!(r.verdict, SaddleVerdict::Degenerate);
}

#[test]
fn limit_ratio_examples() {
    let (lo, hi) = limit_ratio(&two_star(), 0.3, 200.0).unwrap();
    assert_abs_diff_eq!(lo, 0.185662, epsilon = 1e-6);
    assert_abs_diff_eq!(hi, 0.187395, epsilon = 1e-6);
    let (lo, hi) = limit_ratio(&triangle(), 0.25, 100.0).unwrap();
    assert_abs_diff_eq!(lo, 0.125, epsilon = 1e-15);
    assert_abs_diff_eq!(hi, 0.128466, epsilon = 1e-6);
    let mut last = f64::INFINITY;
    for b in [10.0, 1e3, 1e5, 1e7] {
        let (lo, hi) = limit_ratio(&triangle(), 0.25, b).unwrap();
        assert!(hi - lo < last);
        last = hi - lo;
    }
    assert!(last < 1e-7);
    assert!(limit_ratio(&SubgraphSpec::star(3).unwrap(), 0.3, 10.0).is_err());
}

#[test]
fn repulsive_scan_examples() {
    let s = repulsive_triangle_scan(0.3, 0.0, 200).unwrap();
    assert!(s.uniform);
    assert_abs_diff_eq!(s.tau_star, 0.027, epsilon = 1e-15);
    let s = repulsive_triangle_scan(0.5, -20.0, 200).unwrap();
    assert!(!s.uniform && s.tau_star < 0.125);
    let s = repulsive_triangle_scan(0.5, -0.3, 200).unwrap();
    assert!(s.uniform && s.tau_star == 0.125);
    assert!(repulsive_triangle_scan(0.5, 1.0, 200).is_err());
}

#[test]
fn monotonicity_audit_examples() {
    let config = SolverConfig::default();
    let r = monotonicity_audit(&two_star(), 0.5, &[1.0, 2.0, 2.5, 3.0, 4.0], &config).unwrap();
    let uniform: Vec<bool> = r.entries.iter().map(|e| e.classification.is_uniform()).collect();
    assert_eq!(uniform, vec![true, true, false, false, false]);
    assert!(r.passed());

    let r = monotonicity_audit(&triangle(), 0.25, &[1.0, 3.0], &config).unwrap();
    assert!(!r.entries[1].classification.is_uniform());
    assert!(r.passed());

    let r = monotonicity_audit(&two_star(), 0.3, &[-0.5, 0.1, 0.5, 1.0], &config).unwrap();
    assert!(r.entries.iter().all(|e| e.classification.is_uniform()));
    assert!(r.passed());
}
