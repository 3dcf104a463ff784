//! Closed-form geometry linking the annulus `a < |x| < b` in `R^{2N+2}` with
//! the reduced warped product `M = I' ×_f CP^N`, `f(s) = 2N/(2N−1)·s`.
//!
//! The radial change of variables is
//! `s = (2N/(2N−1))^{1/(2N−1)} r^{2N/(2N−1)}`; under it the Dirichlet part of
//! the energy keeps its form with weight `s^{2N}` while the potential part
//! picks up the weight `c·s^{−η}` with
//! `c = ((2N−1)/(2N))^{(4N+2+α)/(2N)}` and `η = (α+2−2Nα)/(2N)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlinear::primitive;
use crate::profile::RadialFunction;
use crate::quadrature::Adaptive;
use crate::scalar::{cpn_volume, sphere_area, Real};

/// Problem data: `−ε²Δu + |x|^α u = |x|^α u^p` on `a < |x| < b ⊂ R^{2N+2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams<T> {
    pub n: u32,
    pub a: T,
    pub b: T,
    pub alpha: T,
    pub eps: T,
    pub p: T,
}

impl<T: Real> ProblemParams<T> {
    pub fn new(n: u32, a: T, b: T, alpha: T, eps: T, p: T) -> Result<Self> {
        let params = Self { n, a, b, alpha, eps, p };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::domain("N must be at least 1"));
        }
        if !(self.a > T::zero() && self.b > self.a) {
            return Err(Error::config(format!(
                "annulus radii must satisfy 0 < a < b (a = {}, b = {})",
                self.a, self.b
            )));
        }
        if !(self.eps > T::zero()) {
            return Err(Error::domain("eps must be positive"));
        }
        if !self.alpha.is_finite() {
            return Err(Error::domain("alpha must be finite"));
        }
        let crit = critical_exponent::<T>(2 * self.n + 2);
        if !(self.p > T::one() && self.p < crit) {
            return Err(Error::domain(format!(
                "p = {} outside the subcritical range (1, {})",
                self.p, crit
            )));
        }
        Ok(())
    }

    /// Dimension of the annulus, `2N + 2`.
    pub fn ambient_dim(&self) -> u32 {
        2 * self.n + 2
    }
}

/// `2^* − 1 = (d+2)/(d−2)` for `d ≥ 3`, unbounded otherwise.
pub fn critical_exponent<T: Real>(d: u32) -> T {
    if d <= 2 {
        T::infinity()
    } else {
        T::lit(f64::from(d + 2) / f64::from(d - 2))
    }
}

/// Which boundary component of the reduced manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Inner,
    Outer,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Inner => "inner",
            Side::Outer => "outer",
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inner" => Ok(Side::Inner),
            "outer" => Ok(Side::Outer),
            other => Err(Error::config(format!("unknown side `{other}`"))),
        }
    }
}

/// `η = (α + 2 − 2Nα) / (2N)`.
pub fn eta_exponent<T: Real>(n: u32, alpha: T) -> T {
    let two_n = T::lit(f64::from(2 * n));
    (alpha + T::lit(2.0) - two_n * alpha) / two_n
}

/// `α* = 2 / (2N − 1)`: inner-boundary concentration below, outer at and above.
pub fn threshold_alpha<T: Real>(n: u32) -> T {
    T::lit(2.0 / f64::from(2 * n - 1))
}

fn warp_coeff<T: Real>(n: u32) -> T {
    T::lit(f64::from(2 * n) / f64::from(2 * n - 1))
}

/// `s(r) = (2N/(2N−1))^{1/(2N−1)} r^{2N/(2N−1)}`.
pub fn s_of_r<T: Real>(r: T, n: u32) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    let k = T::lit(f64::from(2 * n - 1));
    Ok(warp_coeff::<T>(n).powf(k.recip()) * r.powf(T::lit(f64::from(2 * n)) / k))
}

/// Inverse of [`s_of_r`]: `r(s) = ((2N−1)/(2N))^{1/(2N)} s^{(2N−1)/(2N)}`.
pub fn r_of_s<T: Real>(s: T, n: u32) -> Result<T> {
    if !(s > T::zero()) {
        return Err(Error::domain(format!("s must be positive, got {s}")));
    }
    let two_n = T::lit(f64::from(2 * n));
    let k = T::lit(f64::from(2 * n - 1));
    Ok((k / two_n).powf(two_n.recip()) * s.powf(k / two_n))
}

/// `dr/ds` along [`r_of_s`].
pub fn dr_ds<T: Real>(s: T, n: u32) -> Result<T> {
    let r = r_of_s(s, n)?;
    let k = T::lit(f64::from(2 * n - 1) / f64::from(2 * n));
    Ok(k * r / s)
}

/// Mean curvature `H = −1/s` of the slice `{s} × CP^N`, normalised as the
/// trace of the second fundamental form divided by `2N` and oriented by
/// the normal pointing towards increasing `s`.
pub fn mean_curvature<T: Real>(s: T) -> Result<T> {
    if !(s > T::zero()) {
        return Err(Error::domain(format!("s must be positive, got {s}")));
    }
    Ok(-s.recip())
}

/// Density of the Fubini–Study volume of `CP^N` with respect to the geodesic
/// distance `t ∈ [0, π/2]` from a point, `|S^{2N−1}| sin^{2N−1}t cos t`.
pub fn cpn_radial_density<T: Real>(n: u32, t: T) -> T {
    sphere_area::<T>(2 * n - 1) * t.sin().powi(2 * n as i32 - 1) * t.cos()
}

/// Derived quantities of the reduced problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedGeometry<T> {
    pub n: u32,
    pub s_min: T,
    pub s_max: T,
    pub eta: T,
    pub alpha_star: T,
    pub warp_coeff: T,
    pub kappa_inner: T,
    pub kappa_outer: T,
}

impl<T: Real> ReducedGeometry<T> {
    pub fn new(params: &ProblemParams<T>) -> Result<Self> {
        params.validate()?;
        let n = params.n;
        let s_min = s_of_r(params.a, n)?;
        let s_max = s_of_r(params.b, n)?;
        let eta = eta_exponent(n, params.alpha);
        Ok(Self {
            n,
            s_min,
            s_max,
            eta,
            alpha_star: threshold_alpha(n),
            warp_coeff: warp_coeff(n),
            kappa_inner: s_min.powf(eta),
            kappa_outer: s_max.powf(eta),
        })
    }

    pub fn length(&self) -> T {
        self.s_max - self.s_min
    }

    /// Warping function `f(s) = 2N/(2N−1)·s`.
    pub fn warp(&self, s: T) -> T {
        self.warp_coeff * s
    }

    /// Potential weight `|s|^{−η}`.
    pub fn weight(&self, s: T) -> T {
        s.abs().powf(-self.eta)
    }

    pub fn boundary_s(&self, side: Side) -> T {
        match side {
            Side::Inner => self.s_min,
            Side::Outer => self.s_max,
        }
    }

    pub fn kappa(&self, side: Side) -> T {
        match side {
            Side::Inner => self.kappa_inner,
            Side::Outer => self.kappa_outer,
        }
    }

    /// `s` at Fermi depth `x` from the given boundary component.
    pub fn s_at_depth(&self, side: Side, x: T) -> T {
        match side {
            Side::Inner => self.s_min + x,
            Side::Outer => self.s_max - x,
        }
    }

    /// Signed change of `s` per unit of inward Fermi depth.
    pub fn depth_orientation(&self, side: Side) -> T {
        match side {
            Side::Inner => T::one(),
            Side::Outer => -T::one(),
        }
    }

    /// Mean curvature of a boundary component in the convention of the
    /// Fermi expansion `√|g| = 1 − 2N·H·x + O(x²)` with `x` the inward depth:
    /// `−1/s_min` on the inner component and `+1/s_max` on the outer one.
    pub fn boundary_mean_curvature(&self, side: Side) -> T {
        let s0 = self.boundary_s(side);
        -self.depth_orientation(side) / s0
    }

    /// Riemannian volume density of `M` in the coordinates `(s, t)`, with
    /// `t` the geodesic distance on `CP^N` from a fixed point and the
    /// remaining `CP^N` directions integrated out.
    pub fn volume_density(&self, s: T, t: T) -> T {
        self.warp(s).powi(2 * self.n as i32) * cpn_radial_density(self.n, t)
    }

    /// Potential coefficient `((2N−1)/(2N))^{(4N+2+α)/(2N)}` of the reduced energy.
    pub fn reduction_constant(n: u32, alpha: T) -> T {
        let two_n = f64::from(2 * n);
        let k = T::lit((two_n - 1.0) / two_n);
        k.powf((T::lit(2.0 * two_n + 2.0) + alpha) / T::lit(two_n))
    }

    /// The reduced problem's perturbation parameter for a given annulus `ε`.
    pub fn reduced_eps(params: &ProblemParams<T>) -> T {
        params.eps / Self::reduction_constant(params.n, params.alpha).sqrt()
    }

    /// Inverse of [`ReducedGeometry::reduced_eps`].
    pub fn annulus_eps(n: u32, alpha: T, reduced_eps: T) -> T {
        reduced_eps * Self::reduction_constant(n, alpha).sqrt()
    }
}

/// Exact weight `|s(q)|^{−η}` at Fermi depth `x` from a boundary component.
pub fn weight_expansion<T: Real>(side: Side, x: T, geom: &ReducedGeometry<T>) -> Result<T> {
    check_depth(x, geom)?;
    Ok(geom.weight(geom.s_at_depth(side, x)))
}

/// First-order Fermi expansion `|s₀|^{−η} ∓ η|s₀|^{−η−1}x` of the weight.
pub fn weight_expansion_first_order<T: Real>(side: Side, x: T, geom: &ReducedGeometry<T>) -> Result<T> {
    check_depth(x, geom)?;
    let s0 = geom.boundary_s(side);
    let slope = -geom.eta * s0.powf(-geom.eta - T::one()) * geom.depth_orientation(side);
    Ok(s0.powf(-geom.eta) + slope * x)
}

fn check_depth<T: Real>(x: T, geom: &ReducedGeometry<T>) -> Result<()> {
    if !(x >= T::zero()) || x > geom.length() {
        return Err(Error::domain(format!("Fermi depth {x} outside [0, {}]", geom.length())));
    }
    Ok(())
}

fn check_support<T: Real, U: RadialFunction<T> + ?Sized>(u: &U, lo: T, hi: T) -> Result<()> {
    if let Some((a, b)) = u.support() {
        let tol = T::lit(1e-12) * hi.abs().max(T::one());
        if a > lo + tol || b < hi - tol {
            return Err(Error::config(format!(
                "profile defined on [{a}, {b}] does not cover [{lo}, {hi}]"
            )));
        }
    }
    Ok(())
}

/// Energy of a radial function on the annulus,
/// `|S^{2N+1}| ∫_a^b [ε²/2 u'² + r^α(u²/2 − F(u))] r^{2N+1} dr`.
pub fn energy_direct<T: Real, U: RadialFunction<T> + ?Sized>(u: &U, params: &ProblemParams<T>) -> Result<T> {
    params.validate()?;
    check_support(u, params.a, params.b)?;
    let n = params.n;
    let half = T::lit(0.5);
    let eps2 = params.eps * params.eps;
    let q = Adaptive::new(T::lit(1e-13)).with_panels(16);
    let integral = q.integrate(
        |r| {
            let v = u.value(r);
            let dv = u.derivative(r);
            let bulk = half * eps2 * dv * dv + r.powf(params.alpha) * (half * v * v - primitive(v, params.p));
            bulk * r.powi(2 * n as i32 + 1)
        },
        params.a,
        params.b,
    )?;
    Ok(sphere_area::<T>(2 * n + 1) * integral)
}

/// Energy of a function of `s` on the reduced interval,
/// `2π·vol(CP^N) ∫_{I'} [ε²/2 v'² + c s^{−η}(v²/2 − F(v))] s^{2N} ds`.
pub fn energy_reduced<T: Real, V: RadialFunction<T> + ?Sized>(v: &V, params: &ProblemParams<T>) -> Result<T> {
    let geom = ReducedGeometry::new(params)?;
    check_support(v, geom.s_min, geom.s_max)?;
    let n = params.n;
    let half = T::lit(0.5);
    let eps2 = params.eps * params.eps;
    let c = ReducedGeometry::reduction_constant(n, params.alpha);
    let q = Adaptive::new(T::lit(1e-13)).with_panels(16);
    let integral = q.integrate(
        |s| {
            let w = v.value(s);
            let dw = v.derivative(s);
            let bulk = half * eps2 * dw * dw + c * geom.weight(s) * (half * w * w - primitive(w, params.p));
            bulk * s.powi(2 * n as i32)
        },
        geom.s_min,
        geom.s_max,
    )?;
    Ok(T::lit(2.0) * T::PI() * cpn_volume::<T>(n) * integral)
}

/// `v(s) = u(r(s))` with chain-rule derivative.
pub struct Pullback<'a, T, U: ?Sized> {
    inner: &'a U,
    n: u32,
    _marker: std::marker::PhantomData<T>,
}

impl<'a, T: Real, U: RadialFunction<T> + ?Sized> Pullback<'a, T, U> {
    pub fn new(inner: &'a U, n: u32) -> Self {
        Self {
            inner,
            n,
            _marker: std::marker::PhantomData,
        }
    }
}

impl<T: Real, U: RadialFunction<T> + ?Sized> RadialFunction<T> for Pullback<'_, T, U> {
    fn value(&self, s: T) -> T {
        self.inner.value(r_of_s(s, self.n).expect("positive s"))
    }
    fn derivative(&self, s: T) -> T {
        let r = r_of_s(s, self.n).expect("positive s");
        self.inner.derivative(r) * dr_ds(s, self.n).expect("positive s")
    }
    fn support(&self) -> Option<(T, T)> {
        self.inner.support().map(|(a, b)| {
            let lo = if a > T::zero() {
                s_of_r(a, self.n).unwrap()
            } else {
                T::zero()
            };
            (lo, s_of_r(b, self.n).unwrap())
        })
    }
}
