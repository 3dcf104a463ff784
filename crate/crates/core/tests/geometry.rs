use hopfspike::geometry::{
    energy_direct, energy_reduced, eta_exponent, r_of_s, s_of_r, threshold_alpha, weight_expansion,
    weight_expansion_first_order, Pullback,
};
use hopfspike::profile::FnRadial;
use hopfspike::{Error, ModalProfile, ProblemParams, ReducedGeometry, Side};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn radial_map_round_trip_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let n = rng.gen_range(1..5);
        let r: f64 = rng.gen_range(0.01..50.0);
        let back = r_of_s(s_of_r(r, n).unwrap(), n).unwrap();
        assert!((back - r).abs() <= 1e-12 * r, "N = {n}, r = {r}, back = {back}");
    }
}

#[test]
fn reduced_interval_matches_annulus() {
    let params = ProblemParams::<f64>::new(1, 1.0, 2.0, 0.0, 0.1, 2.0).unwrap();
    let geom = ReducedGeometry::new(&params).unwrap();
    assert!((geom.s_min - 2.0).abs() < 1e-14 && (geom.s_max - 8.0).abs() < 1e-13);
    assert!(matches!(s_of_r(0.0, 1), Err(Error::Domain(_))));
    assert!(matches!(r_of_s(-1.0, 2), Err(Error::Domain(_))));
}

#[test]
fn eta_sign_switches_at_threshold() {
    for n in 1..5u32 {
        let star: f64 = threshold_alpha(n);
        assert!(eta_exponent(n, star).abs() < 1e-14);
        for k in 1..=6 {
            let d = 10f64.powi(-k);
            assert!(eta_exponent(n, star - d) > 0.0);
            assert!(eta_exponent(n, star + d) < 0.0);
        }
    }
}

#[test]
fn weight_expansion_error_is_second_order() {
    let params = ProblemParams::<f64>::new(1, 1.0, 2.0, 0.0, 0.1, 2.0).unwrap();
    let geom = ReducedGeometry::new(&params).unwrap();
    for side in [Side::Inner, Side::Outer] {
        let err = |x: f64| {
            (weight_expansion(side, x, &geom).unwrap() - weight_expansion_first_order(side, x, &geom).unwrap()).abs()
        };
        let mut x = 0.04;
        for _ in 0..4 {
            let ratio = err(x) / err(x / 2.0);
            assert!((ratio - 4.0).abs() < 0.4, "{side}: ratio {ratio} at x = {x}");
            x /= 2.0;
        }
    }
}

#[test]
fn gaussian_layer_reduces_for_n1_alpha1() {
    let (a, eps) = (1.0, 0.1);
    let params = ProblemParams::new(1, a, 2.0, 1.0, eps, 2.0).unwrap();
    let u = FnRadial(move |r: f64| {
        let z = (r - a) / eps;
        ((-z * z).exp(), -2.0 * z / eps * (-z * z).exp())
    });
    let direct = energy_direct(&u, &params).unwrap();
    let reduced = energy_reduced(&Pullback::new(&u, 1), &params).unwrap();
    assert!(((direct - reduced) / direct).abs() < 1e-8, "{direct} vs {reduced}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduction_preserves_energy(
        draws in prop::array::uniform8(0.0..1.0f64),
        n in 1u32..3,
        alpha in 0.0..3.0f64,
        eps in 0.05..0.5f64,
    ) {
        let p = if n == 1 { 2.0 } else { 1.5 };
        let params = ProblemParams::new(n, 1.0, 2.0, alpha, eps, p).unwrap();
        let u = ModalProfile::from_draws(1.0, 2.0, eps, draws).unwrap();
        let direct = energy_direct(&u, &params).unwrap();
        let reduced = energy_reduced(&Pullback::new(&u, n), &params).unwrap();
        prop_assert!(((direct - reduced) / direct).abs() < 1e-6, "{} vs {}", direct, reduced);
    }

    #[test]
    fn eta_sign_matches_threshold(n in 1u32..6, alpha in -2.0..6.0f64) {
        let eta: f64 = eta_exponent(n, alpha);
        let star: f64 = threshold_alpha(n);
        prop_assert_eq!(eta > 0.0, alpha < star);
    }
}
