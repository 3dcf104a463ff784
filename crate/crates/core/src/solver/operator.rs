//! Conservative finite-volume discretization of `Δ_g` and of the energy
//! `Γ_ε(v) = ∫ ε²/2 |∇_g v|² + (v²/2 − F(v)) |s|^{−η} dv_g`.
//!
//! Control volumes are the dual cells `[s_{i−½}, s_{i+½}] × [t_{j−½}, t_{j+½}]`
//! (clipped at the ends). Edge couplings integrate the metric weight exactly
//! along each grid edge, so `vᵀKv` is a quadrature of `∫|∇_g v|² dv_g` and the
//! Neumann and pole closures are the natural zero-flux ones.

use crate::error::{Error, Result};
use crate::geometry::{cpn_radial_density, ReducedGeometry};
use crate::nonlinear::{primitive, source};
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;

use super::banded::BandedCholesky;
use super::grid::SolutionField;

/// Mass, weight and stiffness data of one grid.
#[derive(Debug, Clone)]
pub struct Discretization<T> {
    pub n_s: usize,
    pub n_t: usize,
    /// `∫_cv dv_g` per node.
    pub mass: Vec<T>,
    /// `∫_cv |s|^{−η} dv_g` per node.
    pub weighted_mass: Vec<T>,
    /// Coupling of `(i, j)` and `(i+1, j)`, indexed `i * n_t + j`.
    pub edge_s: Vec<T>,
    /// Coupling of `(i, j)` and `(i, j+1)`, indexed `i * (n_t − 1) + j`.
    pub edge_t: Vec<T>,
}

fn dual_bounds<T: Real>(x: &[T], i: usize) -> (T, T) {
    let half = T::lit(0.5);
    let lo = if i == 0 { x[0] } else { (x[i - 1] + x[i]) * half };
    let hi = if i + 1 == x.len() {
        x[i]
    } else {
        (x[i] + x[i + 1]) * half
    };
    (lo, hi)
}

impl<T: Real> Discretization<T> {
    pub fn new(s: &[T], t: &[T], geom: &ReducedGeometry<T>) -> Result<Self> {
        let (n_s, n_t) = (s.len(), t.len());
        if n_s < 3 || n_t < 3 {
            return Err(Error::config("grid needs at least three points per axis"));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("grid nodes must be strictly increasing"));
        }
        let gl = GaussLegendre::<T>::new(8);
        let int = |f: &dyn Fn(T) -> T, a: T, b: T| gl.mapped(a, b).map(|(x, w)| w * f(x)).sum::<T>();
        let two_n = 2 * geom.n as i32;
        let radial = |x: T| geom.warp(x).powi(two_n);
        let radial_weighted = |x: T| radial(x) * geom.weight(x);
        let radial_tangential = |x: T| geom.warp(x).powi(two_n - 2);
        let polar = |x: T| cpn_radial_density(geom.n, x);

        let mut ms = Vec::with_capacity(n_s);
        let mut ws = Vec::with_capacity(n_s);
        let mut cs = Vec::with_capacity(n_s);
        for i in 0..n_s {
            let (a, b) = dual_bounds(s, i);
            ms.push(int(&radial, a, b));
            ws.push(int(&radial_weighted, a, b));
            cs.push(int(&radial_tangential, a, b));
        }
        let es: Vec<T> = s
            .windows(2)
            .map(|w| {
                let h = w[1] - w[0];
                int(&radial, w[0], w[1]) / (h * h)
            })
            .collect();
        let mt: Vec<T> = (0..n_t)
            .map(|j| {
                let (a, b) = dual_bounds(t, j);
                int(&polar, a, b)
            })
            .collect();
        let et: Vec<T> = t
            .windows(2)
            .map(|w| {
                let k = w[1] - w[0];
                int(&polar, w[0], w[1]) / (k * k)
            })
            .collect();

        let mut mass = Vec::with_capacity(n_s * n_t);
        let mut weighted_mass = Vec::with_capacity(n_s * n_t);
        for i in 0..n_s {
            for &m in &mt {
                mass.push(ms[i] * m);
                weighted_mass.push(ws[i] * m);
            }
        }
        let mut edge_s = Vec::with_capacity((n_s - 1) * n_t);
        for &e in &es {
            for &m in &mt {
                edge_s.push(e * m);
            }
        }
        let mut edge_t = Vec::with_capacity(n_s * (n_t - 1));
        for &c in &cs {
            for &e in &et {
                edge_t.push(c * e);
            }
        }
        Ok(Self {
            n_s,
            n_t,
            mass,
            weighted_mass,
            edge_s,
            edge_t,
        })
    }

    pub fn for_field(field: &SolutionField<T>, geom: &ReducedGeometry<T>) -> Result<Self> {
        Self::new(&field.s, &field.t, geom)
    }

    pub fn len(&self) -> usize {
        self.n_s * self.n_t
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Kv`, the stiffness matrix applied to `v`.
    pub fn stiffness_apply(&self, v: &[T]) -> Vec<T> {
        let (n_s, n_t) = (self.n_s, self.n_t);
        let mut out = vec![T::zero(); v.len()];
        for i in 0..n_s {
            for j in 0..n_t {
                let k = i * n_t + j;
                if i + 1 < n_s {
                    let flux = self.edge_s[k] * (v[k] - v[k + n_t]);
                    out[k] = out[k] + flux;
                    out[k + n_t] = out[k + n_t] - flux;
                }
                if j + 1 < n_t {
                    let flux = self.edge_t[i * (n_t - 1) + j] * (v[k] - v[k + 1]);
                    out[k] = out[k] + flux;
                    out[k + 1] = out[k + 1] - flux;
                }
            }
        }
        out
    }

    /// `uᵀKv`, the discrete Dirichlet form `∫ ∇_g u · ∇_g v dv_g`.
    pub fn dirichlet_form(&self, u: &[T], v: &[T]) -> T {
        let (n_s, n_t) = (self.n_s, self.n_t);
        let mut acc = T::zero();
        for i in 0..n_s {
            for j in 0..n_t {
                let k = i * n_t + j;
                if i + 1 < n_s {
                    acc = acc + self.edge_s[k] * (u[k] - u[k + n_t]) * (v[k] - v[k + n_t]);
                }
                if j + 1 < n_t {
                    acc = acc + self.edge_t[i * (n_t - 1) + j] * (u[k] - u[k + 1]) * (v[k] - v[k + 1]);
                }
            }
        }
        acc
    }

    /// Nodewise `Δ_g v = −(Kv)/M`.
    pub fn laplacian(&self, v: &[T]) -> Vec<T> {
        self.stiffness_apply(v)
            .into_iter()
            .zip(&self.mass)
            .map(|(kv, m)| -kv / *m)
            .collect()
    }

    /// `‖v‖²_ε = ε² vᵀKv + Σ W v²`.
    pub fn eps_norm_sq(&self, v: &[T], eps: T) -> T {
        let pot: T = v.iter().zip(&self.weighted_mass).map(|(x, w)| *w * *x * *x).sum();
        eps * eps * self.dirichlet_form(v, v) + pot
    }

    /// `Σ W v_+^{p+1}`.
    pub fn power_moment(&self, v: &[T], p: T) -> T {
        v.iter()
            .zip(&self.weighted_mass)
            .map(|(x, w)| *w * source(*x, p) * x.max(T::zero()))
            .sum()
    }

    /// Discrete energy `Γ_ε(v)`.
    pub fn energy(&self, v: &[T], eps: T, p: T) -> T {
        let half = T::lit(0.5);
        let pot: T = v
            .iter()
            .zip(&self.weighted_mass)
            .map(|(x, w)| *w * (half * *x * *x - primitive(*x, p)))
            .sum();
        half * eps * eps * self.dirichlet_form(v, v) + pot
    }

    /// Nodewise residual `(ε²Kv + W(v − f(v)))/W` of the discrete equation.
    pub fn residual(&self, v: &[T], eps: T, p: T) -> Vec<T> {
        let kv = self.stiffness_apply(v);
        kv.iter()
            .zip(v)
            .zip(&self.weighted_mass)
            .map(|((kv, x), w)| (eps * eps * *kv + *w * (*x - source(*x, p))) / *w)
            .collect()
    }

    /// Banded Cholesky factor of `ε²K + W`.
    pub fn factor_shifted(&self, eps: T) -> Result<BandedCholesky<T>> {
        let (n_s, n_t) = (self.n_s, self.n_t);
        let eps2 = eps * eps;
        let mut diag = self.weighted_mass.clone();
        for i in 0..n_s {
            for j in 0..n_t {
                let k = i * n_t + j;
                if i + 1 < n_s {
                    let a = eps2 * self.edge_s[k];
                    diag[k] = diag[k] + a;
                    diag[k + n_t] = diag[k + n_t] + a;
                }
                if j + 1 < n_t {
                    let a = eps2 * self.edge_t[i * (n_t - 1) + j];
                    diag[k] = diag[k] + a;
                    diag[k + 1] = diag[k + 1] + a;
                }
            }
        }
        BandedCholesky::factor(n_s * n_t, n_t, |r, c| {
            if r == c {
                diag[r]
            } else if r == c + 1 && r % n_t != 0 {
                -eps2 * self.edge_t[(c / n_t) * (n_t - 1) + c % n_t]
            } else if r == c + n_t {
                -eps2 * self.edge_s[c]
            } else {
                T::zero()
            }
        })
    }
}

/// Nodewise `Δ_g v` of a field.
pub fn laplace_beltrami<T: Real>(field: &SolutionField<T>, geom: &ReducedGeometry<T>) -> Result<SolutionField<T>> {
    let disc = Discretization::for_field(field, geom)?;
    Ok(field.with_values(disc.laplacian(&field.values)))
}

/// Factor `t*` with `t*·v` on the Nehari set, `t* = (‖v‖²_ε / Σ W v^{p+1})^{1/(p−1)}`.
pub fn nehari_scale_with<T: Real>(disc: &Discretization<T>, v: &[T], eps: T, p: T) -> Result<T> {
    if v.iter().any(|x| *x < T::zero() || !x.is_finite()) {
        return Err(Error::domain("Nehari scaling needs a finite nonnegative field"));
    }
    let moment = disc.power_moment(v, p);
    if !(moment > T::zero()) {
        return Err(Error::domain("Nehari scaling of the zero field"));
    }
    Ok((disc.eps_norm_sq(v, eps) / moment).powf(T::one() / (p - T::one())))
}
