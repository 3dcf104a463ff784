//! Radial ground state of `ΔV − V + V^p = 0` in `R^d`, its half-space
//! integrals, and the moment identities satisfied by the limit profiles.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::critical_exponent;
use crate::nonlinear::{primitive, source};
use crate::ode::{Control, Dopri5};
use crate::profile::RadialProfile;
use crate::quadrature::GaussLegendre;
use crate::scalar::{gamma_half, sphere_area, Real};

/// Knobs of the shooting solver. The defaults reproduce the 1D soliton to
/// better than `1e-10` in sup-norm.
#[derive(Debug, Clone, Copy)]
pub struct ShootOptions<T> {
    /// Maximum tolerated far-field matching residual.
    pub tol: T,
    /// Relative separation of the bracketing trajectories at the matching point.
    pub divergence: T,
    /// The profile is continued at least to this radius.
    pub r_end_min: T,
    /// ... and until it drops below this value.
    pub tail_floor: T,
    /// Largest radial step of the stored grid.
    pub max_step: T,
    pub ode_rtol: T,
    pub ode_atol: T,
}

impl<T: Real> Default for ShootOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-6),
            divergence: T::lit(1e-7),
            r_end_min: T::lit(25.0),
            tail_floor: T::lit(1e-13),
            max_step: T::lit(0.02),
            ode_rtol: T::lit(1e-13),
            ode_atol: T::lit(1e-16),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shot {
    /// `V` crosses zero: `V(0)` too large.
    Over,
    /// `V` turns back up while positive: `V(0)` too small.
    Under,
    Unresolved,
}

struct Trajectory<T> {
    shot: Shot,
    r: Vec<T>,
    v: Vec<T>,
    dv: Vec<T>,
}

fn check_exponent<T: Real>(d: u32, p: T) -> Result<()> {
    if d < 1 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    if !(p > T::one()) {
        return Err(Error::domain(format!("exponent p = {p} must exceed 1")));
    }
    let pc = critical_exponent::<T>(d);
    if p >= pc {
        return Err(Error::domain(format!(
            "exponent p = {p} is not subcritical in dimension {d} (p < {pc})"
        )));
    }
    Ok(())
}

fn rhs<T: Real>(d: u32, p: T, r: T, v: T, dv: T) -> T {
    let drift = if d > 1 {
        T::from_count(d as usize - 1) / r * dv
    } else {
        T::zero()
    };
    v - source(v, p) - drift
}

fn shoot<T: Real>(d: u32, p: T, v0: T, opts: &ShootOptions<T>, r_max: T) -> Result<Trajectory<T>> {
    // Series start: V = V0 + A r² + B r⁴ removes the (d−1)/r singularity.
    let df = T::from_count(d as usize);
    let g0 = v0 - source(v0, p);
    let dg0 = T::one() - p * v0.powf(p - T::one());
    let a2 = g0 / (T::lit(2.0) * df);
    let a4 = dg0 * a2 / (T::lit(4.0) * df + T::lit(8.0));
    let r0 = T::lit(1e-3);
    let y0 = [
        v0 + a2 * r0 * r0 + a4 * r0.powi(4),
        T::lit(2.0) * a2 * r0 + T::lit(4.0) * a4 * r0.powi(3),
    ];
    let mut traj = Trajectory {
        shot: Shot::Unresolved,
        r: vec![T::zero(), r0],
        v: vec![v0, y0[0]],
        dv: vec![T::zero(), y0[1]],
    };
    let ode = Dopri5::new(opts.ode_rtol, opts.ode_atol, opts.max_step);
    let mut shot = Shot::Unresolved;
    ode.integrate(
        |r, y: &[T; 2]| [y[1], rhs(d, p, r, y[0], y[1])],
        r0,
        y0,
        r_max,
        |r, y| {
            traj.r.push(r);
            traj.v.push(y[0]);
            traj.dv.push(y[1]);
            if y[0] < T::zero() {
                shot = Shot::Over;
                Control::Stop
            } else if y[1] > T::zero() {
                shot = Shot::Under;
                Control::Stop
            } else {
                Control::Continue
            }
        },
    )?;
    traj.shot = shot;
    Ok(traj)
}

impl<T: Real> Trajectory<T> {
    fn profile(&self, d: u32, p: T) -> Result<RadialProfile<T>> {
        let second = self
            .r
            .iter()
            .zip(self.v.iter().zip(&self.dv))
            .map(|(&r, (&v, &dv))| {
                if r == T::zero() {
                    (v - source(v, p)) / T::from_count(d as usize)
                } else {
                    rhs(d, p, r, v, dv)
                }
            })
            .collect();
        RadialProfile::new(self.r.clone(), self.v.clone(), self.dv.clone(), second)
    }
}

/// Log-derivative `φ'/φ` of the decaying solution of the linearized far-field
/// equation `φ'' + (d−1)/r φ' − φ = 0`, i.e. `r^{−(d−2)/2} K_ν(r)`, from the
/// Hankel asymptotic series (exact for odd `d`).
fn tail_log_derivative<T: Real>(d: u32, r: T) -> T {
    let nu = (T::from_count(d as usize) - T::lit(2.0)).abs() * T::lit(0.5);
    let mu = T::lit(4.0) * nu * nu;
    let (mut s, mut ds) = (T::one(), T::zero());
    let mut a = T::one();
    let mut last = T::infinity();
    for k in 1..60usize {
        let kf = T::from_count(k);
        let odd = T::lit(2.0) * kf - T::one();
        a = a * (mu - odd * odd) / (T::lit(8.0) * kf);
        let term = a / r.powi(k as i32);
        if term.abs() >= last || term == T::zero() {
            break;
        }
        last = term.abs();
        s = s + term;
        ds = ds - kf * term / r;
        if term.abs() < T::epsilon() * T::lit(0.01) {
            break;
        }
    }
    -(T::from_count(d as usize) - T::one()) / (T::lit(2.0) * r) - T::one() + ds / s
}

struct Tail<T> {
    r: Vec<T>,
    log_v: Vec<T>,
    log_deriv: Vec<T>,
}

/// Decaying continuation of the profile from `(r_m, V_m)`.
///
/// The log-derivative `w = V'/V` obeys `w' = 1 − w² − (d−1)w/r − V^{p−1}`,
/// which is stable when integrated inwards along the decaying branch. Starting
/// from the linear tail, a few sweeps of inward Riccati / outward `log V`
/// integration restore the nonlinear term.
fn decaying_tail<T: Real>(d: u32, p: T, rm: T, vm: T, opts: &ShootOptions<T>) -> Tail<T> {
    let h = opts.max_step;
    let drift = T::from_count(d as usize) - T::one();
    let quad = GaussLegendre::<T>::new(6);
    let mut r = vec![rm];
    let mut log_v = vec![vm.ln()];
    while *r.last().unwrap() < opts.r_end_min || log_v.last().unwrap().exp() > opts.tail_floor {
        let x = *r.last().unwrap();
        let next = x + h;
        log_v.push(*log_v.last().unwrap() + quad.integrate(|y| tail_log_derivative(d, y), x, next));
        r.push(next);
    }
    let n = r.len();
    let mut log_deriv: Vec<T> = r.iter().map(|&x| tail_log_derivative(d, x)).collect();
    let pm1 = p - T::one();
    for _ in 0..4 {
        let nonlinear = |x: T, lv: &[T]| {
            let k = ((x - rm) / h).floor().to_usize().unwrap_or(0).min(n - 2);
            let u = (x - r[k]) / h;
            ((lv[k] + u * (lv[k + 1] - lv[k])) * pm1).exp()
        };
        let riccati = |x: T, w: T, lv: &[T]| T::one() - w * w - drift * w / x - nonlinear(x, lv);
        let mut mid = vec![T::zero(); n - 1];
        let mut w = log_deriv[n - 1];
        for k in (0..n - 1).rev() {
            // RK4 from r[k+1] down to r[k] in two half steps, keeping the midpoint.
            let mut x = r[k + 1];
            for half in 0..2 {
                let dh = -h * T::lit(0.5);
                let k1 = riccati(x, w, &log_v);
                let k2 = riccati(x + dh * T::lit(0.5), w + dh * T::lit(0.5) * k1, &log_v);
                let k3 = riccati(x + dh * T::lit(0.5), w + dh * T::lit(0.5) * k2, &log_v);
                let k4 = riccati(x + dh, w + dh * k3, &log_v);
                w = w + dh / T::lit(6.0) * (k1 + T::lit(2.0) * (k2 + k3) + k4);
                x = x + dh;
                if half == 0 {
                    mid[k] = w;
                }
            }
            log_deriv[k] = w;
        }
        for k in 0..n - 1 {
            let step = h / T::lit(6.0) * (log_deriv[k] + T::lit(4.0) * mid[k] + log_deriv[k + 1]);
            log_v[k + 1] = log_v[k] + step;
        }
    }
    Tail { r, log_v, log_deriv }
}

/// Shoots for the radial ground state with default options.
pub fn shoot_ground_state<T: Real>(d: u32, p: T, tol: T) -> Result<RadialProfile<T>> {
    let opts = ShootOptions {
        tol,
        ..ShootOptions::default()
    };
    shoot_ground_state_with(d, p, &opts)
}

/// Bisects on `V(0)` between the sign-crossing and turn-back regimes, keeps
/// the trajectory up to the point where the two bracketing shots separate,
/// and continues it with the exponentially decaying linear tail.
pub fn shoot_ground_state_with<T: Real>(d: u32, p: T, opts: &ShootOptions<T>) -> Result<RadialProfile<T>> {
    check_exponent(d, p)?;
    let r_max = T::lit(80.0);
    let mut lo = T::lit(0.999);
    if shoot(d, p, lo, opts, r_max)?.shot != Shot::Under {
        return Err(Error::solver(
            format!("lower shooting bracket V(0) = {lo} does not turn back"),
            vec![lo.as_f64()],
        ));
    }
    let mut hi = T::lit(2.0);
    let mut tried = Vec::new();
    loop {
        tried.push(hi.as_f64());
        match shoot(d, p, hi, opts, r_max)?.shot {
            Shot::Over => break,
            _ if hi > T::lit(1e6) => {
                return Err(Error::solver("no sign-crossing shot found for V(0) up to 1e6", tried));
            }
            _ => {
                lo = hi;
                hi = hi * T::lit(2.0);
            }
        }
    }
    loop {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi || hi - lo <= T::lit(1e-15) * hi {
            break;
        }
        match shoot(d, p, mid, opts, r_max)?.shot {
            Shot::Over => hi = mid,
            Shot::Under => lo = mid,
            Shot::Unresolved => {
                lo = mid;
                hi = mid;
                break;
            }
        }
    }

    let upper = shoot(d, p, hi, opts, r_max)?;
    let lower = shoot(d, p, lo, opts, r_max)?;
    let lower_profile = lower.profile(d, p)?;

    // Keep the bracketed trajectory up to the point of separation.
    let mut keep = 0;
    let mut mean_v = Vec::with_capacity(upper.r.len());
    let mut mean_dv = Vec::with_capacity(upper.r.len());
    for i in 0..upper.r.len() {
        let (vl, dvl, _) = lower_profile.eval(upper.r[i]);
        let vu = upper.v[i];
        if upper.r[i] >= lower_profile.r_end()
            || vu <= T::zero()
            || upper.dv[i] >= T::zero() && i > 0
            || (vu - vl).abs() > opts.divergence * vu
        {
            break;
        }
        mean_v.push((vu + vl) * T::lit(0.5));
        mean_dv.push(if i == 0 {
            T::zero()
        } else {
            (upper.dv[i] + dvl) * T::lit(0.5)
        });
        keep = i + 1;
    }
    if keep < 3 {
        return Err(Error::solver(
            "bracketing shots separate immediately",
            vec![lo.as_f64(), hi.as_f64()],
        ));
    }
    let mut r: Vec<T> = upper.r[..keep].to_vec();
    let (rm, vm, dvm) = (r[keep - 1], mean_v[keep - 1], mean_dv[keep - 1]);
    let tail = decaying_tail(d, p, rm, vm, opts);
    let slope = tail.log_deriv[0];
    let mismatch = ((dvm / vm) - slope).abs() / slope.abs();
    if !(mismatch <= opts.tol) {
        return Err(Error::Accuracy(format!(
            "far-field matching residual {mismatch:e} at r = {rm} exceeds {}",
            opts.tol
        )));
    }
    let mut v = mean_v;
    let mut dv = mean_dv;
    for k in 1..tail.r.len() {
        let val = tail.log_v[k].exp();
        r.push(tail.r[k]);
        v.push(val);
        dv.push(val * tail.log_deriv[k]);
    }
    let second = r
        .iter()
        .zip(v.iter().zip(&dv))
        .map(|(&x, (&y, &dy))| {
            if x == T::zero() {
                (y - source(y, p)) / T::from_count(d as usize)
            } else {
                rhs(d, p, x, y, dy)
            }
        })
        .collect();
    RadialProfile::new(r, v, dv, second)
}

/// `U(x) = V(x / √κ)`, which solves `ΔU − U/κ + f(U)/κ = 0`.
pub fn rescale_to_kappa<T: Real>(v: &RadialProfile<T>, kappa: T) -> Result<RadialProfile<T>> {
    if !(kappa > T::zero()) || !kappa.is_finite() {
        return Err(Error::domain(format!("kappa = {kappa} must be positive")));
    }
    if kappa == T::one() {
        return Ok(v.clone());
    }
    Ok(v.stretched(kappa.sqrt()))
}

/// Radial integrands accepted by [`half_space_moment`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrand<T> {
    /// `|∇V|²`
    GradSq,
    /// `V²`
    Square,
    /// `F(V)` for the power nonlinearity with exponent `p`.
    Primitive(T),
    /// `(∂_j V)²` for a tangential direction `j < d`.
    Tangential,
    /// `(∂_d V)²`, the direction normal to the half-space boundary.
    Normal,
}

/// `∫_{S^{d−1}_+} ω_d^m dσ`, the angular factor of a radial `x_d^m` moment.
pub fn angular_constant<T: Real>(d: u32, m: u32) -> T {
    if d == 1 {
        return T::one();
    }
    sphere_area::<T>(d - 2) * T::lit(0.5) * gamma_half::<T>(m + 1) * gamma_half::<T>(d - 1) / gamma_half::<T>(m + d)
}

/// `∫_{S^{d−1}_+} ω_j² ω_d^m dσ` for a tangential index `j`.
pub fn tangential_constant<T: Real>(d: u32, m: u32) -> Result<T> {
    if d < 2 {
        return Err(Error::domain("no tangential direction in dimension 1"));
    }
    Ok(sphere_area::<T>(d - 2) / T::from_count(d as usize - 1)
        * T::lit(0.5)
        * gamma_half::<T>(m + 1)
        * gamma_half::<T>(d + 1)
        / gamma_half::<T>(m + d + 2))
}

/// Angular factors by direct quadrature over the polar angle from `e_d`:
/// `(∫ω_d^m, ∫ω_j²ω_d^m)` over the upper half-sphere.
pub fn angular_constants_by_quadrature<T: Real>(d: u32, m: u32) -> (T, Option<T>) {
    if d == 1 {
        return (T::one(), None);
    }
    let rule = GaussLegendre::<T>::new(48);
    let area = sphere_area::<T>(d - 2);
    let half_pi = T::FRAC_PI_2();
    let base = rule.integrate(
        |phi| phi.cos().powi(m as i32) * phi.sin().powi(d as i32 - 2),
        T::zero(),
        half_pi,
    );
    let tang = rule.integrate(
        |phi| phi.cos().powi(m as i32) * phi.sin().powi(d as i32),
        T::zero(),
        half_pi,
    ) / T::from_count(d as usize - 1);
    (area * base, Some(area * tang))
}

/// `∫_0^{r_end} g(r) r^q dr` by 8-point Gauss–Legendre on every grid cell.
pub fn radial_integral<T: Real, G: Fn(T, T) -> T>(v: &RadialProfile<T>, q: u32, g: G) -> T {
    let rule = GaussLegendre::<T>::new(8);
    let mut acc = T::zero();
    for w in v.grid.windows(2) {
        acc = acc
            + rule.integrate(
                |r| {
                    let (u, du, _) = v.eval(r);
                    g(u, du) * r.powi(q as i32)
                },
                w[0],
                w[1],
            );
    }
    acc
}

/// `∫_{R^d_+} g(|x|) x_d^m dx` for a radial profile centred on the boundary.
pub fn half_space_moment<T: Real>(v: &RadialProfile<T>, d: u32, m: u32, integrand: Integrand<T>) -> Result<T> {
    let last = *v.values.last().unwrap();
    if last.abs() > T::lit(1e-12) {
        return Err(Error::Accuracy(format!(
            "profile has not decayed at r = {} (V = {last:e})",
            v.r_end()
        )));
    }
    let q = d - 1 + m;
    let (angle, radial): (T, T) = match integrand {
        Integrand::GradSq => (angular_constant(d, m), radial_integral(v, q, |_, du| du * du)),
        Integrand::Square => (angular_constant(d, m), radial_integral(v, q, |u, _| u * u)),
        Integrand::Primitive(p) => (angular_constant(d, m), radial_integral(v, q, |u, _| primitive(u, p))),
        Integrand::Tangential => (tangential_constant(d, m)?, radial_integral(v, q, |_, du| du * du)),
        Integrand::Normal => (angular_constant(d, m + 2), radial_integral(v, q, |_, du| du * du)),
    };
    Ok(angle * radial)
}

/// Radial ground state of `ΔU − U/κ + f(U)/κ = 0` in `R^d` with its energy
/// over the half-space and fitted exponential decay.
#[derive(Debug, Clone)]
pub struct GroundState<T> {
    /// Profile `U` for the requested `κ`.
    pub profile: RadialProfile<T>,
    /// Profile `V` of the normalized problem (`κ = 1`).
    pub base: RadialProfile<T>,
    pub dim: u32,
    pub p: T,
    pub kappa: T,
    /// Half-space energy `Γ(U; κ)`.
    pub energy: T,
    /// Decay fit `(C, c)` of `V + |V'| ≤ C e^{−c r}` on the normalized profile.
    pub decay: (T, T),
}

impl<T: Real> GroundState<T> {
    pub fn compute(d: u32, p: T, kappa: T) -> Result<Self> {
        let base = shoot_ground_state_with(d, p, &ShootOptions::default())?;
        Self::from_base(base, d, p, kappa)
    }

    /// Builds the state for another `κ` from an already computed base profile.
    pub fn from_base(base: RadialProfile<T>, d: u32, p: T, kappa: T) -> Result<Self> {
        let profile = rescale_to_kappa(&base, kappa)?;
        let energy = half_space_energy(&profile, d, p, kappa)?;
        let decay = decay_fit(&base)?;
        Ok(Self {
            profile,
            base,
            dim: d,
            p,
            kappa,
            energy,
            decay,
        })
    }

    pub fn with_kappa(&self, kappa: T) -> Result<Self> {
        Self::from_base(self.base.clone(), self.dim, self.p, kappa)
    }
}

/// `Γ(U; κ) = ∫_{R^d_+} ½|∇U|² + U²/(2κ) − F(U)/κ`.
pub fn half_space_energy<T: Real>(u: &RadialProfile<T>, d: u32, p: T, kappa: T) -> Result<T> {
    let half = T::lit(0.5);
    let grad = half_space_moment(u, d, 0, Integrand::GradSq)?;
    let sq = half_space_moment(u, d, 0, Integrand::Square)?;
    let prim = half_space_moment(u, d, 0, Integrand::Primitive(p))?;
    Ok(half * grad + (half * sq - prim) / kappa)
}

/// Least-squares fit of `log(V + |V'|) ≈ log C − c r` on `[r_end/2, r_end]`.
pub fn decay_fit<T: Real>(v: &RadialProfile<T>) -> Result<(T, T)> {
    let r_half = v.r_end() * T::lit(0.5);
    let mut pts = Vec::new();
    for i in 0..v.len() - 1 {
        let r = v.grid[i];
        if r < r_half {
            continue;
        }
        let y = v.values[i] + v.derivs[i].abs();
        if !(y > T::zero()) {
            return Err(Error::Fit(format!("nonpositive tail value {y:e} at r = {r}")));
        }
        pts.push((r, y.ln()));
    }
    if pts.len() < 2 {
        return Err(Error::Fit("fewer than two points in the decay window".into()));
    }
    let n = T::from_count(pts.len());
    let mx = pts.iter().map(|p| p.0).sum::<T>() / n;
    let my = pts.iter().map(|p| p.1).sum::<T>() / n;
    let sxy: T = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: T = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == T::zero() {
        return Err(Error::Fit("degenerate decay window".into()));
    }
    let slope = sxy / sxx;
    let c = -slope;
    if !(c > T::zero()) {
        return Err(Error::Fit(format!("fitted rate {c} is not positive")));
    }
    Ok(((my - slope * mx).exp(), c))
}

/// One line of an [`IdentityReport`].
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub m: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Residuals of the moment identities of a ground state.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub dim: u32,
    pub p: f64,
    pub kappa: f64,
    pub energy: f64,
    pub peak: f64,
    pub checks: Vec<IdentityCheck>,
    /// `(d−2)/2 ∫|∇U|² + d ∫(U²/(2κ) − F(U)/κ)`, normalized; vanishes.
    pub pohozaev: f64,
    /// The same combination with both potential signs negated; does not vanish.
    pub pohozaev_printed: f64,
    /// `Γ − (1/2 − 1/(p+1)) ∫ U^{p+1}/κ`, normalized.
    pub nehari: f64,
}

impl IdentityReport {
    /// Largest residual among the identities expected to hold.
    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.residual)
            .fold(self.pohozaev.abs().max(self.nehari.abs()), f64::max)
    }
}

fn rel<T: Real>(lhs: T, rhs: T) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == T::zero() {
        0.0
    } else {
        ((lhs - rhs).abs() / scale).as_f64()
    }
}

/// Checks the moment identities for `m ∈ {0, 1, 2}`, the dilation identity
/// in its corrected and sign-flipped forms, and the Nehari relation.
pub fn verify_identities<T: Real>(gs: &GroundState<T>) -> Result<IdentityReport> {
    let (u, d, k, p) = (&gs.profile, gs.dim, gs.kappa, gs.p);
    let half = T::lit(0.5);
    let df = T::from_count(d as usize);
    let mut checks = Vec::new();
    for m in 0..=2u32 {
        let mf = T::from_count(m as usize);
        let grad = half_space_moment(u, d, m, Integrand::GradSq)?;
        let sq = half_space_moment(u, d, m, Integrand::Square)?;
        let prim = half_space_moment(u, d, m, Integrand::Primitive(p))?;
        let lhs = half * grad + (half * sq - prim) / k;
        let rhs = (mf + T::one()) / (df + mf) * grad;
        checks.push(IdentityCheck {
            name: "energy_moment".into(),
            m,
            lhs: lhs.as_f64(),
            rhs: rhs.as_f64(),
            residual: rel(lhs, rhs),
        });
        if d > 1 {
            let tang = half_space_moment(u, d, m, Integrand::Tangential)?;
            let rhs = grad / (df + mf);
            checks.push(IdentityCheck {
                name: "tangential_gradient".into(),
                m,
                lhs: tang.as_f64(),
                rhs: rhs.as_f64(),
                residual: rel(tang, rhs),
            });
        }
        let normal = half_space_moment(u, d, m, Integrand::Normal)?;
        let rhs = (mf + T::one()) / (df + mf) * grad;
        checks.push(IdentityCheck {
            name: "normal_gradient".into(),
            m,
            lhs: normal.as_f64(),
            rhs: rhs.as_f64(),
            residual: rel(normal, rhs),
        });
    }
    let grad = half_space_moment(u, d, 0, Integrand::GradSq)?;
    let sq = half_space_moment(u, d, 0, Integrand::Square)?;
    let prim = half_space_moment(u, d, 0, Integrand::Primitive(p))?;
    let kinetic = (df - T::lit(2.0)) * half * grad;
    let potential = df * (half * sq - prim) / k;
    let norm = kinetic.abs() + df * (half * sq + prim) / k;
    let printed = kinetic - df * (half * sq + prim) / k;
    let nonlinear = prim * (p + T::one());
    let nehari_rhs = (half - T::one() / (p + T::one())) * nonlinear / k;
    Ok(IdentityReport {
        dim: d,
        p: p.as_f64(),
        kappa: k.as_f64(),
        energy: gs.energy.as_f64(),
        peak: gs.profile.peak().as_f64(),
        checks,
        pohozaev: ((kinetic + potential) / norm).as_f64(),
        pohozaev_printed: (printed / norm).as_f64(),
        nehari: rel(gs.energy, nehari_rhs),
    })
}
