use microlub::{
    BearingGeometry, BearingReport, Grids, Initializer, ModelParams, RoughnessProfile, Scheme,
};

fn slider(m: f64, n1: usize, nz: usize) -> Scheme {
    let params = ModelParams::slider_defaults(m).unwrap();
    let geometry = BearingGeometry::inclined(-0.5, RoughnessProfile::Flat).unwrap();
    Scheme::new(params, geometry, Grids::new(n1, nz).unwrap()).unwrap()
}

#[test]
fn resting_wall_gives_the_zero_solution() {
    let params = ModelParams::from_derived(0.1, 0.01, 0.1, 0.01, 0.0, 0.5).unwrap();
    let geometry = BearingGeometry::inclined(-0.5, RoughnessProfile::Flat).unwrap();
    let scheme = Scheme::new(params, geometry, Grids::new(19, 40).unwrap()).unwrap();
    let out = scheme.solve(Initializer::Zero, 1e-12, 50).unwrap();
    assert!(out.converged);
    assert!(out.trace.len() <= 2);
    assert!(out.state.p.iter().all(|&p| p == 0.0));
    assert!(out.state.u1.iter().all(|c| c.values().iter().all(|&v| v == 0.0)));
}

#[test]
fn flux_constraint_holds_every_iteration() {
    for m in [0.0, 0.5, 1.0] {
        let out = slider(m, 49, 100).solve(Initializer::Couette, 1e-10, 500).unwrap();
        for r in &out.trace {
            assert!(r.max_flux_divergence <= 1e-9, "M = {m}, it {}: {:e}", r.iteration, r.max_flux_divergence);
        }
    }
}

#[test]
fn solve_is_deterministic() {
    let s = slider(0.5, 29, 60);
    let a = s.solve(Initializer::Couette, 1e-10, 500).unwrap();
    let b = s.solve(Initializer::Couette, 1e-10, 500).unwrap();
    assert_eq!(a.state.p, b.state.p);
    assert_eq!(a.state.u1, b.state.u1);
    assert_eq!(a.trace.len(), b.trace.len());
}

#[test]
fn converged_state_is_a_fixed_point() {
    let s = slider(0.5, 29, 60);
    let out = s.solve(Initializer::Couette, 1e-12, 500).unwrap();
    let again = s.solve_from(out.state.clone(), 1e-10, 5).unwrap();
    assert!(again.converged);
    assert_eq!(again.trace.len(), 1);
    let dp = again
        .state
        .p
        .iter()
        .zip(&out.state.p)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(dp < 1e-10);
}

#[test]
fn updates_decay_monotonically() {
    for m in [0.0, 1.0] {
        let out = slider(m, 49, 100).solve(Initializer::Couette, 1e-11, 500).unwrap();
        assert!(out.converged);
        for w in out.trace[3..].windows(2) {
            assert!(w[1].update_norm < w[0].update_norm, "M = {m}: {:?}", w);
        }
    }
}

#[test]
fn apriori_bound_holds_along_the_run() {
    for init in [Initializer::Couette, Initializer::Zero] {
        let out = slider(1.0, 49, 100).solve(init, 1e-10, 500).unwrap();
        assert!(out.trace.iter().all(|r| r.within_apriori_bound()));
    }
}

#[test]
fn initializer_does_not_change_the_limit() {
    let s = slider(0.5, 29, 60);
    let a = s.solve(Initializer::Couette, 1e-12, 500).unwrap();
    let b = s.solve(Initializer::Zero, 1e-12, 500).unwrap();
    for (x, y) in a.state.p.iter().zip(&b.state.p) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn roughness_raises_peak_pressure() {
    let report = |m| {
        let s = slider(m, 49, 100);
        let out = s.solve(Initializer::Couette, 1e-10, 500).unwrap();
        BearingReport::from_outcome(&s, &out)
    };
    let smooth = report(0.0);
    let rough = report(1.0);
    assert!(rough.max_pressure() > smooth.max_pressure());
    assert_eq!(smooth.pressure_profile.first().unwrap(), &(0.0, 0.0));
    assert_eq!(smooth.pressure_profile.last().unwrap(), &(1.0, 0.0));
}

#[test]
fn rough_profile_coefficient_feeds_the_solver() {
    let geometry = BearingGeometry::inclined(-0.5, RoughnessProfile::sinusoid(0.1)).unwrap();
    let m = geometry.roughness_coefficient().unwrap();
    assert!((m - 2.0 * std::f64::consts::PI.powi(2) * 0.01).abs() < 1e-10);
    let params = ModelParams::slider_defaults(m).unwrap();
    let s = Scheme::new(params, geometry, Grids::new(19, 40).unwrap()).unwrap();
    assert!(s.solve(Initializer::Couette, 1e-10, 500).unwrap().converged);
}
