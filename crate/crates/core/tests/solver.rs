use cergm_core::solver::{
    limit_ratio, solve_canonical, solve_numerical, star_fixed_point_residual, Classification,
    SolverConfig, StartKind,
};
use cergm_core::{BlockGraphon, SubgraphSpec};

fn config() -> SolverConfig {
    SolverConfig::default()
}

#[test]
fn half_line_uniform_side() {
    let h = SubgraphSpec::two_star();
    for beta2 in [0.5, 1.0, 1.9] {
        let r = solve_canonical(&h, 0.5, beta2, &config()).unwrap();
        assert_eq!(r.classification, Classification::UniformCertified);
        let expected = beta2 / 4.0 + 0.5 * std::f64::consts::LN_2;
        assert!((r.psi - expected).abs() < 1e-8);
    }
}

#[test]
fn half_line_nonuniform_side() {
    let h = SubgraphSpec::two_star();
    for beta2 in [2.5, 3.0, 4.0] {
        let r = solve_canonical(&h, 0.5, beta2, &config()).unwrap();
        assert!(!r.classification.is_uniform());
        assert!(r.gain_over_uniform() > 1e-5, "beta2 {beta2}: gain {}", r.gain_over_uniform());
        assert!((r.best.edge_density() - 0.5).abs() <= 1e-10);
        let comp = r.best.complement();
        let a = r.best.objective(&h, beta2).unwrap();
        let b = comp.objective(&h, beta2).unwrap();
        assert!((a - b).abs() < 1e-10);
        let res = star_fixed_point_residual(&r.best, 2, beta2).unwrap();
        assert!(res.max_abs <= 1e-6, "residual {}", res.max_abs);
    }
}

#[test]
fn zero_coupling_is_uniform_for_any_subgraph() {
    for h in [SubgraphSpec::triangle(), SubgraphSpec::two_star(), SubgraphSpec::star(3).unwrap()] {
        let r = solve_canonical(&h, 0.37, 0.0, &config()).unwrap();
        assert_eq!(r.classification, Classification::UniformCertified);
        let i = 0.37f64 * 0.37f64.ln() + 0.63 * 0.63f64.ln();
        assert!((r.psi + 0.5 * i).abs() < 1e-15);
    }
}

#[test]
fn large_coupling_limits() {
    let two = SubgraphSpec::two_star();
    let mut cfg = config();
    cfg.starts = vec![StartKind::Clique, StartKind::Anticlique];
    cfg.restarts = 2;
    let r = solve_canonical(&two, 0.3, 200.0, &cfg).unwrap();
    let (lo, hi) = limit_ratio(&two, 0.3, 200.0).unwrap();
    let ratio = r.psi / 200.0;
    assert!((0.185662..=0.187395).contains(&ratio), "{ratio}");
    assert!(ratio >= lo - 1e-12 && ratio <= hi, "{lo} <= {ratio} <= {hi}");

    let tri = SubgraphSpec::triangle();
    let r = solve_canonical(&tri, 0.25, 100.0, &cfg).unwrap();
    let (lo, hi) = limit_ratio(&tri, 0.25, 100.0).unwrap();
    let ratio = r.psi / 100.0;
    assert!((0.125..=0.128466).contains(&ratio), "{ratio}");
    assert!(ratio >= lo - 1e-12 && ratio <= hi, "{lo} <= {ratio} <= {hi}");
}

#[test]
fn clique_start_beats_uniform_above_ve_threshold() {
    let tri = SubgraphSpec::triangle();
    let mut cfg = config();
    cfg.starts = vec![StartKind::Clique];
    cfg.restarts = 1;
    let r = solve_numerical(&tri, 0.25, 3.0, &cfg).unwrap();
    assert_eq!(r.classification, Classification::NonuniformNumerical);
    assert!(r.psi > r.uniform_psi);
}

#[test]
fn certified_uniform_points_survive_audit_mode() {
    let cases = [
        (SubgraphSpec::two_star(), 0.5, 1.5),
        (SubgraphSpec::two_star(), 0.2, 1.0),
        (SubgraphSpec::triangle(), 0.4, -0.2),
        (SubgraphSpec::triangle(), 0.3, 0.5),
        (SubgraphSpec::star(3).unwrap(), 0.5, 0.6),
    ];
    for (h, eps, beta2) in cases {
        let certified = solve_canonical(&h, eps, beta2, &config()).unwrap();
        assert_eq!(certified.classification, Classification::UniformCertified);
        let audit = solve_numerical(&h, eps, beta2, &config()).unwrap();
        assert!(audit.psi <= certified.psi + 1e-7, "{} {eps} {beta2}", h.label());
    }
}

#[test]
fn results_are_reproducible() {
    let h = SubgraphSpec::triangle();
    let a = solve_numerical(&h, 0.3, 4.0, &config()).unwrap();
    let b = solve_numerical(&h, 0.3, 4.0, &config()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn never_below_uniform() {
    let h = SubgraphSpec::triangle();
    for (eps, beta2) in [(0.2, 1.0), (0.6, -2.0), (0.5, 2.0)] {
        let r = solve_canonical(&h, eps, beta2, &config()).unwrap();
        let u = BlockGraphon::uniform(eps).unwrap().objective(&h, beta2).unwrap();
        assert!(r.psi >= u - 1e-12);
        assert!((r.best.edge_density() - eps).abs() <= 1e-10);
    }
}
