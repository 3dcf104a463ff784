//! Boundary-bump test functions on the reduced manifold and the small-`ε`
//! expansion of their energy.
//!
//! Around a boundary point `P₀` with Fermi coordinates `x = (x', x_d)`,
//! `Z(p) = φ_γ(|x|/t) U(|x|/(εt))`, where `U` is the ground state for
//! `κ = |s(P₀)|^η`. Then
//! `ε^{−d} Γ_ε(Z) = I₁(t) − ε I₂(t) − ε I₃(t) + O(ε²)` with `d = 2N+1`.
//!
//! Two versions of `I₂, I₃` are reported. The *derived* one follows from the
//! Fermi expansions `g^{ij} = δ_ij + 2h_ij x_d`, `√|g| = 1 − 2NHx_d` and
//! `|s|^{−η} = s₀^{−η} − σ η s₀^{−η−1} x_d` (`σ = ±1` on the inner/outer
//! boundary), with `h_ij = H δ_ij`, `H = −1/s_min` (inner) and `+1/s_max`
//! (outer):
//!
//! * `I₂ = σ η s₀^{−η−1} t^{d+1} ∫(U²/2 − F(U)) y_d`
//! * `I₃ = 2NH[t^{d−1}/2 ∫|∇U|² y_d + t^{d+1} ∫(U²/2 − F(U))/κ y_d] − t^{d−1} H Σ_j ∫(∂_jU)² y_d`
//!
//! The *printed* one drops `σ η` from `I₂`, adds the `h` term in `I₃`, and
//! uses `H = h = −1/s₀` on both components.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ReducedGeometry, Side};
use crate::ground_state::{half_space_moment, GroundState, Integrand};
use crate::nonlinear::primitive;
use crate::quadrature::{Adaptive, GaussLegendre};
use crate::scalar::Real;

/// Smooth step used by the cutoff: `1` below `γ`, `0` above `2γ`.
/// Returns `(φ_γ(r), φ_γ'(r))`.
pub fn cutoff_radial<T: Real>(r: T, gamma: T) -> (T, T) {
    let r = r.abs();
    if r <= gamma {
        return (T::one(), T::zero());
    }
    if r >= gamma + gamma {
        return (T::zero(), T::zero());
    }
    // u runs from 1 at r = γ to 0 at r = 2γ
    let u = (gamma + gamma - r) / gamma;
    let v = T::one() - u;
    let a = (-u.recip()).exp();
    let b = (-v.recip()).exp();
    let value = a / (a + b);
    let du = a * b * (u.powi(-2) + v.powi(-2)) / ((a + b) * (a + b));
    (value, -du / gamma)
}

/// `φ_γ(|x|)`.
pub fn cutoff<T: Real>(x: &[T], gamma: T) -> Result<T> {
    if !(gamma > T::zero()) {
        return Err(Error::domain(format!("cutoff radius {gamma} must be positive")));
    }
    let r = x.iter().map(|&v| v * v).sum::<T>().sqrt();
    Ok(cutoff_radial(r, gamma).0)
}

/// Data of a test function `Z^γ_{ε,t}` centred on a boundary component.
#[derive(Debug, Clone)]
pub struct TestFunctionParams<T> {
    pub gamma: T,
    pub t: T,
    pub side: Side,
    pub eps: T,
    pub ground: GroundState<T>,
}

impl<T: Real> TestFunctionParams<T> {
    /// Test function with the default cutoff radius `|I'|/8`, built on the
    /// ground state rescaled to the weight of the chosen boundary.
    pub fn new(geom: &ReducedGeometry<T>, ground: &GroundState<T>, side: Side, eps: T, t: T) -> Result<Self> {
        let ground = matched_ground(ground, geom, side)?;
        let tf = Self {
            gamma: geom.length() / T::lit(8.0),
            t,
            side,
            eps,
            ground,
        };
        tf.check(geom)?;
        Ok(tf)
    }

    /// Verifies that the support `|x| ≤ 2tγ` stays inside the Fermi chart.
    pub fn check(&self, geom: &ReducedGeometry<T>) -> Result<()> {
        if !(self.gamma > T::zero() && self.t > T::zero() && self.eps > T::zero()) {
            return Err(Error::domain("γ, t and ε must be positive"));
        }
        let reach = T::lit(2.0) * self.t * self.gamma;
        let f0 = geom.warp(geom.boundary_s(self.side));
        if reach >= geom.length() * T::lit(0.5) || reach / f0 >= T::FRAC_PI_2() {
            return Err(Error::domain(format!(
                "test function support 2tγ = {reach} leaves the Fermi chart"
            )));
        }
        if self.ground.dim != 2 * geom.n + 1 {
            return Err(Error::domain("ground state dimension must be 2N + 1"));
        }
        Ok(())
    }

    fn with_t(&self, t: T) -> Self {
        Self { t, ..self.clone() }
    }

    fn with_eps(&self, eps: T) -> Self {
        Self { eps, ..self.clone() }
    }
}

fn matched_ground<T: Real>(gs: &GroundState<T>, geom: &ReducedGeometry<T>, side: Side) -> Result<GroundState<T>> {
    let kappa = geom.kappa(side);
    if (gs.kappa - kappa).abs() <= T::lit(1e-14) * kappa {
        Ok(gs.clone())
    } else {
        gs.with_kappa(kappa)
    }
}

/// Half-space moments of `U` entering the expansion.
#[derive(Debug, Clone, Copy)]
struct Moments<T> {
    grad0: T,
    pot0: T,
    grad1: T,
    pot1: T,
    tang1: T,
}

fn moments<T: Real>(gs: &GroundState<T>) -> Result<Moments<T>> {
    let (u, d, p) = (&gs.profile, gs.dim, gs.p);
    let half = T::lit(0.5);
    let pot =
        |m| -> Result<T> {
            Ok(half * half_space_moment(u, d, m, Integrand::Square)?
                - half_space_moment(u, d, m, Integrand::Primitive(p))?)
        };
    Ok(Moments {
        grad0: half_space_moment(u, d, 0, Integrand::GradSq)?,
        pot0: pot(0)?,
        grad1: half_space_moment(u, d, 1, Integrand::GradSq)?,
        pot1: pot(1)?,
        tang1: half_space_moment(u, d, 1, Integrand::Tangential)?,
    })
}

/// `I₁, I₂, I₃` at one dilation `t`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExpansionTerms {
    pub t: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i2_printed: f64,
    pub i3_printed: f64,
}

fn terms_from<T: Real>(m: &Moments<T>, geom: &ReducedGeometry<T>, side: Side, kappa: T, t: T) -> ExpansionTerms {
    let n = geom.n as i32;
    let two_n = T::from_count(2 * geom.n as usize);
    let half = T::lit(0.5);
    let s0 = geom.boundary_s(side);
    let eta = geom.eta;
    let sigma = geom.depth_orientation(side);
    let h = geom.boundary_mean_curvature(side);
    let h_printed = -s0.recip();
    let (t_lo, t_mid, t_hi) = (t.powi(2 * n - 1), t.powi(2 * n), t.powi(2 * n + 2));
    let i1 = t_lo * half * m.grad0 + t * t_mid * m.pot0 / kappa;
    let weight_slope = s0.powf(-eta - T::one()) * t_hi * m.pot1;
    let i2 = sigma * eta * weight_slope;
    let bulk = |hc: T| two_n * hc * (t_mid * half * m.grad1 + t_hi * m.pot1 / kappa);
    let tangential = t_mid * two_n * m.tang1;
    ExpansionTerms {
        t: t.as_f64(),
        i1: i1.as_f64(),
        i2: i2.as_f64(),
        i3: (bulk(h) - h * tangential).as_f64(),
        i2_printed: weight_slope.as_f64(),
        i3_printed: (bulk(h_printed) + h_printed * tangential).as_f64(),
    }
}

/// Expansion terms at the test function's dilation.
pub fn expansion_terms<T: Real>(tf: &TestFunctionParams<T>, geom: &ReducedGeometry<T>) -> Result<ExpansionTerms> {
    tf.check(geom)?;
    let gs = matched_ground(&tf.ground, geom, tf.side)?;
    Ok(terms_from(&moments(&gs)?, geom, tf.side, gs.kappa, tf.t))
}

/// `H(p, U) = −Σ h_ij ∫∂_iU ∂_jU x_d + 2NH ∫(½|∇U|² + U²/(2κ) − F(U)/κ) x_d`
/// at a point of the given boundary component, together with the closed form
/// `N/(N+1) H ∫|∇U|² x_d`.
pub fn curvature_functional<T: Real>(side: Side, gs: &GroundState<T>, geom: &ReducedGeometry<T>) -> Result<(T, T)> {
    let h = geom.boundary_mean_curvature(side);
    curvature_functional_with(h, gs, geom.n)
}

/// [`curvature_functional`] for an arbitrary scalar curvature `H` (`h_ij = Hδ_ij`).
pub fn curvature_functional_with<T: Real>(h: T, gs: &GroundState<T>, n: u32) -> Result<(T, T)> {
    let m = moments(gs)?;
    let nf = T::from_count(n as usize);
    let two_n = nf + nf;
    let value = -h * two_n * m.tang1 + two_n * h * (T::lit(0.5) * m.grad1 + m.pot1 / gs.kappa);
    let closed = nf / (nf + T::one()) * h * m.grad1;
    Ok((value, closed))
}

/// `Z(s, t)` at a point of `M`, with `ρ² = (s − s₀)² + (f(s₀)t)²` the
/// Fermi radius about the pole of the chosen boundary component.
pub fn test_function_value<T: Real>(tf: &TestFunctionParams<T>, geom: &ReducedGeometry<T>, s: T, t: T) -> T {
    let s0 = geom.boundary_s(tf.side);
    let x_t = geom.warp(s0) * t;
    let rho = ((s - s0) * (s - s0) + x_t * x_t).sqrt();
    bump(tf, &tf.ground, rho).0
}

/// Value and radial derivative of `Z` as a function of the Fermi radius `ρ`.
fn bump<T: Real>(tf: &TestFunctionParams<T>, gs: &GroundState<T>, rho: T) -> (T, T) {
    let (phi, dphi) = cutoff_radial(rho / tf.t, tf.gamma);
    let scale = tf.eps * tf.t;
    let (u, du, _) = gs.profile.eval(rho / scale);
    (phi * u, dphi / tf.t * u + phi * du / scale)
}

/// `Γ_ε(Z) = ∫_M ε²/2 |∇_g Z|² + (Z²/2 − F(Z)) |s|^{−η} dv_g` by quadrature in
/// polar coordinates about `P₀` in the `(x_d, f(s₀) t)` plane, with the exact
/// metric and weight.
pub fn gamma_eps_of_z<T: Real>(tf: &TestFunctionParams<T>, geom: &ReducedGeometry<T>) -> Result<T> {
    tf.check(geom)?;
    let gs = matched_ground(&tf.ground, geom, tf.side)?;
    let side = tf.side;
    let s0 = geom.boundary_s(side);
    let f0 = geom.warp(s0);
    let orient = geom.depth_orientation(side);
    let half = T::lit(0.5);
    let p = gs.p;
    let eps2 = tf.eps * tf.eps;
    let angular = GaussLegendre::<T>::new(32);
    let ring = |rho: T| -> T {
        if rho == T::zero() {
            return T::zero();
        }
        let (z, dz) = bump(tf, &gs, rho);
        angular.integrate(
            |theta| {
                let (x_d, x_t) = (rho * theta.cos(), rho * theta.sin());
                let s = s0 + orient * x_d;
                let t = x_t / f0;
                let f = geom.warp(s);
                // ρ² = x_d² + (f₀ t)², so ∂_s ρ = σ x_d/ρ and ∂_t ρ = f₀² t/ρ.
                let ds = dz * x_d / rho;
                let dt = dz * f0 * x_t / rho;
                let grad2 = ds * ds + dt * dt / (f * f);
                let density = half * eps2 * grad2 + geom.weight(s) * (half * z * z - primitive(z, p));
                density * geom.volume_density(s, t) * rho / f0
            },
            T::zero(),
            T::FRAC_PI_2(),
        )
    };
    let outer = T::lit(2.0) * tf.gamma * tf.t;
    let scale = tf.eps * tf.t * gs.kappa.sqrt();
    let mut breaks = vec![T::zero()];
    let mut b = scale;
    while b < outer {
        breaks.push(b);
        b = b * T::lit(2.0);
    }
    if tf.gamma * tf.t > T::zero() && !breaks.contains(&(tf.gamma * tf.t)) {
        breaks.push(tf.gamma * tf.t);
    }
    breaks.push(outer);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    Adaptive::new(T::lit(1e-11))
        .with_panels(2)
        .integrate_breaks(ring, &breaks)
}

/// Measured versus predicted energies for one `ε`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrderRow {
    pub eps: f64,
    pub measured: f64,
    pub predicted: f64,
    pub predicted_printed: f64,
    pub residual: f64,
    pub residual_printed: f64,
}

/// Full report: a `t`-sweep of the expansion terms and an `ε`-sweep at the
/// test function's dilation.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionReport {
    pub n: u32,
    pub side: Side,
    pub gamma: f64,
    pub t: f64,
    pub kappa: f64,
    pub ground_energy: f64,
    pub sweep: Vec<ExpansionTerms>,
    pub argmax_t: f64,
    pub t_step: f64,
    /// `t₀` with `I₁(t) < 0` for `t > t₀`.
    pub negative_beyond: f64,
    pub orders: Vec<OrderRow>,
    /// `R(ε_k)/R(ε_{k+1})` for consecutive rows.
    pub ratios: Vec<f64>,
    pub ratios_printed: Vec<f64>,
    pub curvature: f64,
    pub curvature_closed_form: f64,
    pub curvature_residual: f64,
}

/// `t`-grid used for the `I₁` sweep: 64 points on `(0, 2]`.
pub fn t_grid<T: Real>() -> Vec<T> {
    (1..=64).map(|k| T::from_count(k) * T::lit(2.0 / 64.0)).collect()
}

/// Builds the report for the given `ε` values (dilation and side from `tf`).
pub fn expansion_report<T: Real>(
    tf: &TestFunctionParams<T>,
    geom: &ReducedGeometry<T>,
    eps_list: &[T],
) -> Result<ExpansionReport> {
    tf.check(geom)?;
    let gs = matched_ground(&tf.ground, geom, tf.side)?;
    let m = moments(&gs)?;
    let grid = t_grid::<T>();
    let sweep: Vec<ExpansionTerms> = grid
        .iter()
        .map(|&t| terms_from(&m, geom, tf.side, gs.kappa, t))
        .collect();
    let argmax_t = sweep
        .iter()
        .fold((f64::NEG_INFINITY, 0.0), |best, row| {
            if row.i1 > best.0 {
                (row.i1, row.t)
            } else {
                best
            }
        })
        .1;
    let negative_beyond = (-gs.kappa * m.grad0 / (T::lit(2.0) * m.pot0)).sqrt();
    let here = terms_from(&m, geom, tf.side, gs.kappa, tf.t);
    let mut orders = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let probe = tf.with_eps(eps).with_t(tf.t);
        let measured = gamma_eps_of_z(&probe, geom)? / eps.powi(2 * geom.n as i32 + 1);
        let e = eps.as_f64();
        let measured = measured.as_f64();
        let predicted = here.i1 - e * (here.i2 + here.i3);
        let predicted_printed = here.i1 - e * (here.i2_printed + here.i3_printed);
        orders.push(OrderRow {
            eps: e,
            measured,
            predicted,
            predicted_printed,
            residual: (measured - predicted).abs(),
            residual_printed: (measured - predicted_printed).abs(),
        });
    }
    let ratios = orders.windows(2).map(|w| w[0].residual / w[1].residual).collect();
    let ratios_printed = orders
        .windows(2)
        .map(|w| w[0].residual_printed / w[1].residual_printed)
        .collect();
    let (curv, closed) = curvature_functional(tf.side, &gs, geom)?;
    Ok(ExpansionReport {
        n: geom.n,
        side: tf.side,
        gamma: tf.gamma.as_f64(),
        t: tf.t.as_f64(),
        kappa: gs.kappa.as_f64(),
        ground_energy: gs.energy.as_f64(),
        sweep,
        argmax_t,
        t_step: 2.0 / 64.0,
        negative_beyond: negative_beyond.as_f64(),
        orders,
        ratios,
        ratios_printed,
        curvature: curv.as_f64(),
        curvature_closed_form: closed.as_f64(),
        curvature_residual: ((curv - closed).abs() / closed.abs()).as_f64(),
    })
}

impl ExpansionReport {
    /// `t,I1,I2,I3,I2_printed,I3_printed`
    pub fn write_sweep_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,I1,I2,I3,I2_printed,I3_printed")?;
        for r in &self.sweep {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.t, r.i1, r.i2, r.i3, r.i2_printed, r.i3_printed
            )?;
        }
        Ok(())
    }

    /// `eps,measured,predicted,residual,predicted_printed,residual_printed`
    pub fn write_orders_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "eps,measured,predicted,residual,predicted_printed,residual_printed"
        )?;
        for r in &self.orders {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.eps, r.measured, r.predicted, r.residual, r.predicted_printed, r.residual_printed
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_plateaus_and_band() {
        let g = 0.4;
        assert_eq!(cutoff(&[0.2, 0.0], g).unwrap(), 1.0);
        assert_eq!(cutoff(&[0.0, 1.2], g).unwrap(), 0.0);
        let mid = cutoff_radial(0.6, g).0;
        assert!(mid > 0.0 && mid < 1.0);
        let vals: Vec<f64> = (0..=100)
            .map(|k| cutoff_radial(g + g * k as f64 / 100.0, g).0)
            .collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
        assert!(cutoff(&[1.0], 0.0).is_err());
    }

    #[test]
    fn cutoff_derivative_matches_difference_quotient() {
        let g = 0.5;
        for k in 1..20 {
            let r = g + g * k as f64 / 20.0;
            let h = 1e-6;
            let fd = (cutoff_radial(r + h, g).0 - cutoff_radial(r - h, g).0) / (2.0 * h);
            assert!((fd - cutoff_radial(r, g).1).abs() < 1e-7);
        }
    }
}
