//! Coordinates on `S^{2N+1}` adapted to the Hopf action, the quotient map to
//! `CP^N`, and the lift of reduced fields back to the annulus.
//!
//! A point is `z = r (ρ_1 e^{iθ_1}, …, ρ_{N+1} e^{iθ_{N+1}})` with nested
//! factors `ρ_1 = cos t_1`, `ρ_2 = sin t_1 cos t_2`, …,
//! `ρ_{N+1} = sin t_1 ⋯ sin t_N`. The circle acts by `θ_i ↦ θ_i + τ`.

use crate::error::{Error, Result};
use crate::geometry::{r_of_s, s_of_r, ProblemParams, ReducedGeometry};
use crate::nonlinear::source;
use crate::scalar::Real;

/// A field on the reduced manifold depending on `(s, t_1)` only.
pub trait ReducedField<T: Real> {
    fn value(&self, s: T, t: T) -> T;
}

/// Adapter for closures `(s, t) -> v`.
#[derive(Clone, Copy)]
pub struct FnField<F>(pub F);

impl<T: Real, F: Fn(T, T) -> T> ReducedField<T> for FnField<F> {
    fn value(&self, s: T, t: T) -> T {
        (self.0)(s, t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint<T> {
    pub r: T,
    pub t: Vec<T>,
    pub theta: Vec<T>,
}

impl<T: Real> SpherePoint<T> {
    pub fn new(r: T, t: Vec<T>, theta: Vec<T>) -> Result<Self> {
        let pt = Self { r, t, theta };
        pt.validate()?;
        Ok(pt)
    }

    /// `N`, the complex dimension of the quotient.
    pub fn n(&self) -> usize {
        self.t.len()
    }

    fn validate(&self) -> Result<()> {
        if self.t.is_empty() || self.theta.len() != self.t.len() + 1 {
            return Err(Error::domain(format!(
                "expected N ≥ 1 polar angles and N+1 phases, got {} and {}",
                self.t.len(),
                self.theta.len()
            )));
        }
        if !(self.r >= T::zero()) {
            return Err(Error::domain(format!("radius {} must be nonnegative", self.r)));
        }
        if let Some(t) = self.t.iter().find(|&&t| !(t >= T::zero() && t <= T::FRAC_PI_2())) {
            return Err(Error::domain(format!("polar angle {t} outside [0, π/2]")));
        }
        let two_pi = T::PI() + T::PI();
        if let Some(th) = self.theta.iter().find(|&&th| !(th >= T::zero() && th < two_pi)) {
            return Err(Error::domain(format!("phase {th} outside [0, 2π)")));
        }
        Ok(())
    }
}

/// Moduli `ρ_i` of the coordinate pairs on the unit sphere.
pub fn planar_factors<T: Real>(t: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(t.len() + 1);
    let mut carry = T::one();
    for &ti in t {
        out.push(carry * ti.cos());
        carry = carry * ti.sin();
    }
    out.push(carry);
    out
}

/// Cartesian coordinates `(x_1, …, x_{2N+2})`.
pub fn embed<T: Real>(pt: &SpherePoint<T>) -> Result<Vec<T>> {
    pt.validate()?;
    let rho = planar_factors(&pt.t);
    Ok(rho
        .iter()
        .zip(&pt.theta)
        .flat_map(|(&rho, &th)| [pt.r * rho * th.cos(), pt.r * rho * th.sin()])
        .collect())
}

fn wrap<T: Real>(angle: T) -> T {
    let two_pi = T::PI() + T::PI();
    let w = angle % two_pi;
    let w = if w < T::zero() { w + two_pi } else { w };
    // `w` can round up to 2π for tiny negative inputs.
    if w >= two_pi {
        T::zero()
    } else {
        w
    }
}

/// The circle action `T_τ`.
pub fn act<T: Real>(pt: &SpherePoint<T>, tau: T) -> SpherePoint<T> {
    SpherePoint {
        r: pt.r,
        t: pt.t.clone(),
        theta: pt.theta.iter().map(|&th| wrap(th + tau)).collect(),
    }
}

/// Orbit coordinates `(r, t, ψ)` with `ψ_i = θ_i − θ_{N+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientCoords<T> {
    pub r: T,
    pub t: Vec<T>,
    pub psi: Vec<T>,
}

pub fn quotient_coords<T: Real>(pt: &SpherePoint<T>) -> QuotientCoords<T> {
    let last = *pt.theta.last().unwrap();
    QuotientCoords {
        r: pt.r,
        t: pt.t.clone(),
        psi: pt.theta[..pt.theta.len() - 1]
            .iter()
            .map(|&th| wrap(th - last))
            .collect(),
    }
}

/// Geodesic distance on `CP^N` from the point `[1 : 0 : ⋯ : 0]`, which is the
/// radial coordinate used by the axisymmetric solver: `arccos |z_1| = t_1`.
pub fn cp_radial<T: Real>(q: &QuotientCoords<T>) -> T {
    q.t[0]
}

fn reduced_s<T: Real>(r: T, geom: &ReducedGeometry<T>) -> Result<T> {
    let s = s_of_r(r, geom.n)?;
    let slack = T::lit(1e-12) * geom.s_max;
    if s < geom.s_min - slack || s > geom.s_max + slack {
        return Err(Error::domain(format!("radius {r} lies outside the annulus")));
    }
    Ok(s.max(geom.s_min).min(geom.s_max))
}

/// `u(z) = v(s(r), t_1)`, constant on circle orbits by construction.
pub fn lift<T: Real, F: ReducedField<T> + ?Sized>(
    field: &F,
    pt: &SpherePoint<T>,
    geom: &ReducedGeometry<T>,
) -> Result<T> {
    let n = pt.n();
    if n != geom.n as usize {
        return Err(Error::domain(format!("point has N = {n}, geometry has N = {}", geom.n)));
    }
    let s = reduced_s(pt.r, geom)?;
    Ok(field.value(s, cp_radial(&quotient_coords(pt))))
}

/// Lifted value at a Cartesian point of `R^{2N+2}`.
pub fn lift_cartesian<T: Real, F: ReducedField<T> + ?Sized>(
    field: &F,
    x: &[T],
    geom: &ReducedGeometry<T>,
) -> Result<T> {
    if x.len() != 2 * geom.n as usize + 2 {
        return Err(Error::domain("point dimension does not match 2N + 2"));
    }
    let r = x.iter().map(|&v| v * v).sum::<T>().sqrt();
    let s = reduced_s(r, geom)?;
    let first = x[0].hypot(x[1]);
    let t = (first / r).min(T::one()).acos();
    Ok(field.value(s, t))
}

/// Residual of the annulus equation at `x`, divided by `|x|^α`:
/// `−ε²Δu/|x|^α + u − f(u)`, with `Δ` by fourth-order central differences of step `h`.
pub fn annulus_residual<T: Real, F: ReducedField<T> + ?Sized>(
    field: &F,
    params: &ProblemParams<T>,
    geom: &ReducedGeometry<T>,
    x: &[T],
    h: T,
) -> Result<T> {
    let eps = ReducedGeometry::annulus_eps(params.n, params.alpha, params.eps);
    let u0 = lift_cartesian(field, x, geom)?;
    let mut lap = T::zero();
    let mut y = x.to_vec();
    for k in 0..x.len() {
        let mut at = |off: T| {
            y[k] = x[k] + off;
            lift_cartesian(field, &y, geom)
        };
        let (m2, m1, p1, p2) = (at(-h - h)?, at(-h)?, at(h)?, at(h + h)?);
        y[k] = x[k];
        lap = lap + (-(m2 + p2) + T::lit(16.0) * (m1 + p1) - T::lit(30.0) * u0) / (T::lit(12.0) * h * h);
    }
    let r = x.iter().map(|&v| v * v).sum::<T>().sqrt();
    Ok(-eps * eps * lap / r.powf(params.alpha) + u0 - source(u0, params.p))
}

/// Residual of the reduced equation at `(s, t)` scaled by `s^η`:
/// `−ε²s^η Δ_g v + v − f(v)`, with the warped-product Laplacian evaluated by
/// fourth-order central differences.
pub fn reduced_residual<T: Real, F: ReducedField<T> + ?Sized>(
    field: &F,
    params: &ProblemParams<T>,
    geom: &ReducedGeometry<T>,
    s: T,
    t: T,
    h: T,
) -> T {
    let two_n = T::from_count(2 * geom.n as usize);
    let v = |a: T, b: T| field.value(a, b);
    let d2 = |f: &dyn Fn(T) -> T| {
        (-(f(-h - h) + f(h + h)) + T::lit(16.0) * (f(-h) + f(h)) - T::lit(30.0) * f(T::zero())) / (T::lit(12.0) * h * h)
    };
    let d1 = |f: &dyn Fn(T) -> T| (f(-h - h) - f(h + h) + T::lit(8.0) * (f(h) - f(-h))) / (T::lit(12.0) * h);
    let along_s = |o: T| v(s + o, t);
    let along_t = |o: T| v(s, t + o);
    let radial = d2(&along_s) + two_n / s * d1(&along_s);
    let fiber = d2(&along_t) + ((two_n - T::one()) / t.tan() - t.tan()) * d1(&along_t);
    let warp = geom.warp(s);
    let lap = radial + fiber / (warp * warp);
    let v0 = v(s, t);
    -params.eps * params.eps * s.powf(geom.eta) * lap + v0 - source(v0, params.p)
}

/// Inverse of the polar parametrization of the annulus used by [`lift`]:
/// the Cartesian point at reduced coordinate `(s, t_1)` with all other
/// angles zero.
pub fn point_at<T: Real>(s: T, t: T, n: u32) -> Result<Vec<T>> {
    let r = r_of_s(s, n)?;
    let mut angles = vec![T::zero(); n as usize];
    angles[0] = t;
    embed(&SpherePoint::new(r, angles, vec![T::zero(); n as usize + 1])?)
}
