//! Radial functions sampled on graded grids.

use std::io::Write;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A function of one radial variable with its first derivative.
pub trait RadialFunction<T: Real> {
    fn value(&self, r: T) -> T;
    fn derivative(&self, r: T) -> T;
    /// Interval on which the function is defined, if it is not global.
    fn support(&self) -> Option<(T, T)> {
        None
    }
}

/// Adapter turning a closure `r -> (u(r), u'(r))` into a [`RadialFunction`].
#[derive(Clone, Copy)]
pub struct FnRadial<F>(pub F);

impl<T: Real, F: Fn(T) -> (T, T)> RadialFunction<T> for FnRadial<F> {
    fn value(&self, r: T) -> T {
        (self.0)(r).0
    }
    fn derivative(&self, r: T) -> T {
        (self.0)(r).1
    }
}

/// Positive smooth test profile on `[a, b]`: a constant, three cosine modes
/// and a Gaussian layer of width `w`,
/// `u(r) = c₀ + Σ A_k cos(k π x + φ_k) + B exp(−((r − r_c)/w)²)`, `x = (r − a)/(b − a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalProfile<T> {
    pub a: T,
    pub b: T,
    pub base: T,
    pub modes: Vec<(T, T)>,
    pub bump: T,
    pub center: T,
    pub width: T,
}

impl<T: Real> ModalProfile<T> {
    /// Builds a profile from eight numbers in `[0, 1)`, e.g. uniform draws.
    pub fn from_draws(a: T, b: T, width: T, draws: [T; 8]) -> Result<Self> {
        if !(b > a) || !(width > T::zero()) {
            return Err(Error::config("profile needs a < b and a positive layer width"));
        }
        if draws.iter().any(|d| !(*d >= T::zero() && *d < T::one())) {
            return Err(Error::config("profile draws must lie in [0, 1)"));
        }
        let two = T::lit(2.0);
        let modes: Vec<(T, T)> = (0..3)
            .map(|k| (two * draws[2 * k] - T::one(), two * T::PI() * draws[2 * k + 1]))
            .collect();
        let base = T::lit(0.2) + modes.iter().map(|m| m.0.abs()).sum::<T>();
        Ok(Self {
            a,
            b,
            base,
            modes,
            bump: T::lit(3.0) * draws[6],
            center: a + (b - a) * draws[7],
            width,
        })
    }

    fn eval(&self, r: T) -> (T, T) {
        let scale = T::PI() / (self.b - self.a);
        let x = r - self.a;
        let mut v = self.base;
        let mut dv = T::zero();
        for (k, &(amp, phase)) in self.modes.iter().enumerate() {
            let w = T::from_count(k + 1) * scale;
            v = v + amp * (w * x + phase).cos();
            dv = dv - amp * w * (w * x + phase).sin();
        }
        let z = (r - self.center) / self.width;
        let g = self.bump * (-z * z).exp();
        (v + g, dv - T::lit(2.0) * z / self.width * g)
    }
}

impl<T: Real> RadialFunction<T> for ModalProfile<T> {
    fn value(&self, r: T) -> T {
        self.eval(r).0
    }
    fn derivative(&self, r: T) -> T {
        self.eval(r).1
    }
    fn support(&self) -> Option<(T, T)> {
        Some((self.a, self.b))
    }
}

/// Radial samples `(r_i, V_i, V'_i, V''_i)` on a strictly increasing grid
/// starting at `r = 0`, evaluated between nodes by quintic Hermite
/// interpolation. Beyond the last node the profile is taken to vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile<T> {
    pub grid: Vec<T>,
    pub values: Vec<T>,
    pub derivs: Vec<T>,
    pub second: Vec<T>,
}

impl<T: Real> RadialProfile<T> {
    pub fn new(grid: Vec<T>, values: Vec<T>, derivs: Vec<T>, second: Vec<T>) -> Result<Self> {
        let n = grid.len();
        if n < 2 || values.len() != n || derivs.len() != n || second.len() != n {
            return Err(Error::config("profile arrays must share a length of at least 2"));
        }
        if grid[0] != T::zero() {
            return Err(Error::config("profile grid must start at r = 0"));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("profile grid must be strictly increasing"));
        }
        Ok(Self {
            grid,
            values,
            derivs,
            second,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn r_end(&self) -> T {
        *self.grid.last().unwrap()
    }

    pub fn peak(&self) -> T {
        self.values[0]
    }

    /// Value, first and second derivative at `r` (even extension for `r < 0`).
    pub fn eval(&self, r: T) -> (T, T, T) {
        let sign = if r < T::zero() { -T::one() } else { T::one() };
        let r = r.abs();
        if r >= self.r_end() {
            return (T::zero(), T::zero(), T::zero());
        }
        let i = self
            .grid
            .partition_point(|&x| x <= r)
            .saturating_sub(1)
            .min(self.len() - 2);
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let u = (r - x0) / h;
        let (f0, f1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.derivs[i] * h, self.derivs[i + 1] * h);
        let (s0, s1) = (self.second[i] * h * h, self.second[i + 1] * h * h);
        let half = T::lit(0.5);
        let c0 = f0;
        let c1 = d0;
        let c2 = half * s0;
        let c3 = T::lit(10.0) * (f1 - f0) - T::lit(6.0) * d0 - T::lit(4.0) * d1 - T::lit(1.5) * s0 + half * s1;
        let c4 = T::lit(15.0) * (f0 - f1) + T::lit(8.0) * d0 + T::lit(7.0) * d1 + T::lit(1.5) * s0 - s1;
        let c5 = T::lit(6.0) * (f1 - f0) - T::lit(3.0) * (d0 + d1) - half * s0 + half * s1;
        let v = c0 + u * (c1 + u * (c2 + u * (c3 + u * (c4 + u * c5))));
        let dv = c1 + u * (T::lit(2.0) * c2 + u * (T::lit(3.0) * c3 + u * (T::lit(4.0) * c4 + u * T::lit(5.0) * c5)));
        let d2v = T::lit(2.0) * c2 + u * (T::lit(6.0) * c3 + u * (T::lit(12.0) * c4 + u * T::lit(20.0) * c5));
        (v, sign * dv / h, d2v / (h * h))
    }

    /// Profile `U(x) = V(x / λ)` on the stretched grid `λ r_i`.
    pub fn stretched(&self, lambda: T) -> Self {
        Self {
            grid: self.grid.iter().map(|&r| r * lambda).collect(),
            values: self.values.clone(),
            derivs: self.derivs.iter().map(|&d| d / lambda).collect(),
            second: self.second.iter().map(|&d| d / (lambda * lambda)).collect(),
        }
    }

    /// Two-column `r,V` CSV with round-trip precision.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "r,V")?;
        for (r, v) in self.grid.iter().zip(&self.values) {
            writeln!(out, "{:.16e},{:.16e}", r.as_f64(), v.as_f64())?;
        }
        Ok(())
    }
}

impl<T: Real> RadialFunction<T> for RadialProfile<T> {
    fn value(&self, r: T) -> T {
        self.eval(r).0
    }
    fn derivative(&self, r: T) -> T {
        self.eval(r).1
    }
    fn support(&self) -> Option<(T, T)> {
        Some((T::zero(), self.r_end()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_profile(h: f64) -> RadialProfile<f64> {
        let n = (6.0 / h) as usize + 1;
        let grid: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        let values = grid.iter().map(|r| (-r * r).exp()).collect();
        let derivs = grid.iter().map(|r| -2.0 * r * (-r * r).exp()).collect();
        let second = grid.iter().map(|r| (4.0 * r * r - 2.0) * (-r * r).exp()).collect();
        RadialProfile::new(grid, values, derivs, second).unwrap()
    }

    #[test]
    fn modal_profile_is_positive_with_consistent_derivative() {
        let draws = [0.9, 0.1, 0.05, 0.7, 0.5, 0.3, 0.8, 0.25];
        let u = ModalProfile::from_draws(1.0, 2.0, 0.05, draws).unwrap();
        for k in 1..200 {
            let r = 1.0 + k as f64 / 200.0;
            assert!(u.value(r) > 0.0);
            let h = 1e-6;
            let fd = (u.value(r + h) - u.value(r - h)) / (2.0 * h);
            assert!((fd - u.derivative(r)).abs() < 1e-5 * (1.0 + fd.abs()));
        }
        assert!(ModalProfile::from_draws(1.0, 2.0, 0.05, [1.0; 8]).is_err());
        assert!(ModalProfile::from_draws(2.0, 1.0, 0.05, draws).is_err());
    }

    #[test]
    fn quintic_interpolation_is_sixth_order() {
        let err = |h: f64| {
            let p = gaussian_profile(h);
            (0..997)
                .map(|k| 0.0037 + k as f64 * 0.005)
                .map(|r| (p.value(r) - (-r * r).exp()).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(0.1), err(0.05));
        assert!(e1 < 1e-6, "{e1}");
        assert!(e1 / e2 > 40.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn reproduces_nodes_and_derivatives() {
        let p = gaussian_profile(0.1);
        let (v, d, s) = p.eval(0.3);
        assert!((v - (-0.09f64).exp()).abs() < 1e-14);
        assert!((d + 0.6 * (-0.09f64).exp()).abs() < 1e-12);
        assert!((s - (0.36 - 2.0) * (-0.09f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn stretching_rescales_derivatives() {
        let p = gaussian_profile(0.05);
        let q = p.stretched(2.0);
        let (v, d, _) = q.eval(1.0);
        let (v0, d0, _) = p.eval(0.5);
        assert!((v - v0).abs() < 1e-14);
        assert!((d - d0 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_grid() {
        let err = RadialProfile::new(vec![0.1, 0.2], vec![1.0; 2], vec![0.0; 2], vec![0.0; 2]);
        assert!(matches!(err, Err(Error::Config(_))));
    }
}
