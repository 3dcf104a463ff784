use std::sync::OnceLock;

use hopfspike::expansion::{
    curvature_functional, curvature_functional_with, cutoff, expansion_report, expansion_terms, gamma_eps_of_z,
    TestFunctionParams,
};
use hopfspike::ground_state::GroundState;
use hopfspike::{Error, ProblemParams, ReducedGeometry, Side};

fn setup(alpha: f64) -> (ReducedGeometry<f64>, GroundState<f64>) {
    static GROUND: OnceLock<GroundState<f64>> = OnceLock::new();
    let params = ProblemParams::new(1, 1.0, 2.0, alpha, 0.05, 2.0).unwrap();
    let geom = ReducedGeometry::new(&params).unwrap();
    let gs = GROUND
        .get_or_init(|| GroundState::compute(3, 2.0, 1.0).unwrap())
        .clone();
    (geom, gs)
}

#[test]
fn cutoff_examples() {
    let g = 0.3;
    assert_eq!(cutoff(&[g / 2.0, 0.0], g).unwrap(), 1.0);
    assert_eq!(cutoff(&[0.0, 3.0 * g], g).unwrap(), 0.0);
    let mid = cutoff(&[1.5 * g], g).unwrap();
    assert!(mid > 0.0 && mid < 1.0);
    let band: Vec<f64> = (0..=50)
        .map(|k| cutoff(&[g + g * k as f64 / 50.0], g).unwrap())
        .collect();
    assert!(band.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn unit_dilation_is_critical_and_gives_limit_energy() {
    for (alpha, side) in [(0.0, Side::Inner), (3.0, Side::Outer)] {
        let (geom, gs) = setup(alpha);
        let at = |t: f64| {
            let tf = TestFunctionParams::new(&geom, &gs, side, 0.05, t).unwrap();
            expansion_terms(&tf, &geom).unwrap()
        };
        let h = 1e-4;
        let slope = (at(1.0 + h).i1 - at(1.0 - h).i1) / (2.0 * h);
        let matched = gs.with_kappa(geom.kappa(side)).unwrap();
        assert!(slope.abs() < 1e-6 * matched.energy, "dI1/dt = {slope}");
        assert!((at(1.0).i1 - matched.energy).abs() < 1e-10 * matched.energy);
    }
}

#[test]
fn curvature_terms_vanish_without_curvature() {
    let (_, gs) = setup(0.0);
    let (value, closed) = curvature_functional_with(0.0, &gs, 1).unwrap();
    assert_eq!((value, closed), (0.0, 0.0));
}

#[test]
fn curvature_functional_matches_closed_form_and_sign() {
    let (geom, gs) = setup(0.0);
    for side in [Side::Inner, Side::Outer] {
        let matched = gs.with_kappa(geom.kappa(side)).unwrap();
        let (value, closed) = curvature_functional(side, &matched, &geom).unwrap();
        assert!(((value - closed) / closed).abs() < 1e-6);
        // H = −1/s₀ on the inner component, +1/s₀ on the outer one.
        assert_eq!(value < 0.0, side == Side::Inner, "{side}: {value}");
    }
}

#[test]
fn measured_energy_approaches_leading_term() {
    let (geom, gs) = setup(0.0);
    let eps = 0.02;
    let tf = TestFunctionParams::new(&geom, &gs, Side::Inner, eps, 1.0).unwrap();
    let measured = gamma_eps_of_z(&tf, &geom).unwrap() / eps.powi(3);
    let i1 = expansion_terms(&tf, &geom).unwrap().i1;
    assert!(((measured - i1) / i1).abs() < 0.05, "{measured} vs {i1}");
}

#[test]
fn expansion_residual_is_second_order() {
    for (alpha, side) in [(0.0, Side::Inner), (1.0, Side::Inner), (3.0, Side::Outer)] {
        let (geom, gs) = setup(alpha);
        let tf = TestFunctionParams::new(&geom, &gs, side, 0.08, 1.0).unwrap();
        let report = expansion_report(&tf, &geom, &[0.08, 0.04, 0.02]).unwrap();
        for r in &report.ratios {
            assert!((3.2..=4.8).contains(r), "α = {alpha}: ratio {r}");
        }
        assert!((report.argmax_t - 1.0).abs() <= report.t_step);
        assert!(report.negative_beyond > 1.0);
        let last = report.sweep.last().unwrap();
        assert!(last.t <= report.negative_beyond || last.i1 < 0.0);
    }
}

#[test]
fn oversized_support_is_rejected() {
    let (geom, gs) = setup(0.0);
    let err = TestFunctionParams::new(&geom, &gs, Side::Inner, 0.05, 5.0).unwrap_err();
    assert!(matches!(err, Error::Domain(_)));
}
