use hopfspike::ground_state::{
    decay_fit, half_space_energy, half_space_moment, rescale_to_kappa, shoot_ground_state, verify_identities,
    GroundState, Integrand,
};

/// Independent oracle: fixed-step RK4 shooting with plain bisection.
fn oracle_peak(d: usize, p: f64) -> f64 {
    let classify = |v0: f64| -> bool {
        // true when V(0) is too large (V crosses zero)
        let h = 1e-3;
        let c = (v0 - v0.powf(p)) / (2.0 * d as f64);
        let (mut r, mut v, mut w) = (h, v0 + c * h * h, 2.0 * c * h);
        let f =
            |r: f64, v: f64, w: f64| -> (f64, f64) { (w, v - v.abs().powf(p) * v.signum() - (d as f64 - 1.0) / r * w) };
        loop {
            let (a1, b1) = f(r, v, w);
            let (a2, b2) = f(r + h / 2.0, v + h / 2.0 * a1, w + h / 2.0 * b1);
            let (a3, b3) = f(r + h / 2.0, v + h / 2.0 * a2, w + h / 2.0 * b2);
            let (a4, b4) = f(r + h, v + h * a3, w + h * b3);
            v += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            w += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
            r += h;
            if v < 0.0 {
                return true;
            }
            if w > 0.0 || r > 40.0 {
                return false;
            }
        }
    };
    let (mut lo, mut hi) = (1.0, 10.0);
    for _ in 0..45 {
        let mid = 0.5 * (lo + hi);
        if classify(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

// Frozen from `oracle_peak(3, 3.0)`.
const PEAK_D3_P3: f64 = 4.337387679976;

#[test]
fn oracle_pins_three_dimensional_peak() {
    let oracle = oracle_peak(3, 3.0);
    assert!((oracle - PEAK_D3_P3).abs() < 1e-8, "oracle {oracle}");
    let v = shoot_ground_state(3, 3.0, 1e-6).unwrap();
    assert!((v.peak() - PEAK_D3_P3).abs() < 1e-9, "shooting {}", v.peak());
}

#[test]
fn profiles_are_monotone_and_decayed() {
    for (d, p) in [(1, 3.0), (2, 3.0), (3, 2.0), (3, 3.0), (5, 2.0)] {
        let v = shoot_ground_state(d, p, 1e-6).unwrap();
        assert!(v.peak() > 1.0);
        assert_eq!(v.derivs[0], 0.0);
        assert!(v.derivs[1..].iter().all(|&x| x < 0.0), "d={d} p={p}");
        assert!(v.values.windows(2).all(|w| w[1] < w[0]));
        assert!(*v.values.last().unwrap() < 1e-12 && v.r_end() >= 25.0);
    }
}

#[test]
fn rescaled_profile_solves_kappa_equation() {
    let (d, p, kappa) = (3u32, 3.0, 2.0);
    let v = shoot_ground_state(d, p, 1e-6).unwrap();
    let u = rescale_to_kappa(&v, kappa).unwrap();
    assert_eq!(u.peak(), v.peak());
    let h = 1e-3;
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let r = 0.1 + 0.12 * k as f64;
        // fourth-order central stencils
        let f = |x: f64| u.eval(x).0;
        let (u2m, um, u0, up, u2p) = (f(r - 2.0 * h), f(r - h), f(r), f(r + h), f(r + 2.0 * h));
        let d2 = (-u2p + 16.0 * up - 30.0 * u0 + 16.0 * um - u2m) / (12.0 * h * h);
        let d1 = (-u2p + 8.0 * up - 8.0 * um + u2m) / (12.0 * h);
        let lap = d2 + (d as f64 - 1.0) / r * d1;
        let res = (lap - u0 / kappa + u0.powf(p) / kappa).abs();
        worst = worst.max(res);
    }
    assert!(worst < 1e-6, "{worst}");
    assert!(rescale_to_kappa(&v, 0.0).is_err());
    assert_eq!(rescale_to_kappa(&v, 1.0).unwrap(), v);
}

#[test]
fn energy_scales_with_kappa() {
    let gs = GroundState::compute(3, 2.0f64, 1.0).unwrap();
    let mut last = 0.0;
    for kappa in [0.5f64, 2.0, 5.0] {
        let scaled = gs.with_kappa(kappa).unwrap();
        let ratio = scaled.energy / gs.energy;
        // (2N−1)/2 = (d−2)/2 with d = 2N+1
        assert!((ratio - kappa.powf(0.5)).abs() < 1e-6 * ratio, "{kappa}: {ratio}");
        assert!(scaled.energy > last);
        last = scaled.energy;
    }
}

#[test]
fn moment_matches_half_of_full_space() {
    let v = shoot_ground_state(3, 3.0f64, 1e-6).unwrap();
    let m = half_space_moment(&v, 3, 0, Integrand::Square).unwrap();
    let rule = hopfspike::quadrature::GaussLegendre::new(8);
    let full = hopfspike::quadrature::composite(&rule, |r| v.eval(r).0.powi(2) * r * r, &v.grid);
    assert!((m - 2.0 * std::f64::consts::PI * full).abs() < 1e-12 * m);
}

#[test]
fn identities_hold_and_printed_form_does_not() {
    for (d, p) in [(1, 3.0), (3, 3.0)] {
        for kappa in [1.0, 2.0] {
            let gs = GroundState::compute(d, p, kappa).unwrap();
            let report = verify_identities(&gs).unwrap();
            assert!(report.max_residual() < 1e-8, "d={d} κ={kappa}: {report:?}");
            assert!(report.pohozaev_printed.abs() > 0.1);
        }
    }
}

#[test]
fn soliton_energy_closed_form() {
    // Γ(√2 sech) over the half line: ∫_0^∞ ½V'² + ½V² − V⁴/4 = 2/3.
    let v = shoot_ground_state(1, 3.0f64, 1e-6).unwrap();
    let e = half_space_energy(&v, 1, 3.0f64, 1.0).unwrap();
    assert!((e - 2.0 / 3.0).abs() < 1e-10, "{e}");
}

#[test]
fn decay_rates() {
    let (c1, rate1) = decay_fit(&shoot_ground_state(1, 3.0f64, 1e-6).unwrap()).unwrap();
    assert!(c1 > 0.0 && (rate1 - 1.0).abs() < 0.05, "{rate1}");
    let (c3, rate3) = decay_fit(&shoot_ground_state(3, 3.0f64, 1e-6).unwrap()).unwrap();
    assert!(c3 > 0.0 && (0.8..=1.1).contains(&rate3), "{rate3}");
}
