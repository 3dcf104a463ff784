//! Cubic splines with zero end slopes, in one and two variables.

use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_knots<T: Real>(x: &[T]) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::config("spline needs at least two knots"));
    }
    if x.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("spline knots must be strictly increasing"));
    }
    Ok(())
}

/// Second derivatives of the clamped (`S' = 0` at both ends) cubic spline.
fn clamped_moments<T: Real>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    let six = T::lit(6.0);
    let two = T::lit(2.0);
    let mut diag = vec![T::zero(); n];
    let mut upper = vec![T::zero(); n];
    let mut lower = vec![T::zero(); n];
    let mut rhs = vec![T::zero(); n];
    for i in 0..n {
        if i > 0 {
            let h = x[i] - x[i - 1];
            lower[i] = h;
            diag[i] = diag[i] + two * h;
            rhs[i] = rhs[i] - six * (y[i] - y[i - 1]) / h;
        }
        if i + 1 < n {
            let h = x[i + 1] - x[i];
            upper[i] = h;
            diag[i] = diag[i] + two * h;
            rhs[i] = rhs[i] + six * (y[i + 1] - y[i]) / h;
        }
    }
    // Thomas algorithm
    for i in 1..n {
        let m = lower[i] / diag[i - 1];
        diag[i] = diag[i] - m * upper[i - 1];
        rhs[i] = rhs[i] - m * rhs[i - 1];
    }
    let mut out = vec![T::zero(); n];
    out[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = (rhs[i] - upper[i] * out[i + 1]) / diag[i];
    }
    out
}

fn eval_piece<T: Real>(x: &[T], y: &[T], m: &[T], at: T) -> T {
    let n = x.len();
    let at = at.max(x[0]).min(x[n - 1]);
    let i = x.partition_point(|&k| k <= at).saturating_sub(1).min(n - 2);
    let h = x[i + 1] - x[i];
    let (a, b) = (x[i + 1] - at, at - x[i]);
    let six = T::lit(6.0);
    m[i] * a * a * a / (six * h)
        + m[i + 1] * b * b * b / (six * h)
        + (y[i] / h - m[i] * h / six) * a
        + (y[i + 1] / h - m[i + 1] * h / six) * b
}

/// One-dimensional cubic spline with vanishing end slopes.
#[derive(Debug, Clone)]
pub struct CubicSpline<T> {
    x: Vec<T>,
    y: Vec<T>,
    m: Vec<T>,
}

impl<T: Real> CubicSpline<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        check_knots(&x)?;
        if x.len() != y.len() {
            return Err(Error::config("spline knots and values differ in length"));
        }
        let m = clamped_moments(&x, &y);
        Ok(Self { x, y, m })
    }

    /// Value at `at`, clamped to the knot range.
    pub fn eval(&self, at: T) -> T {
        eval_piece(&self.x, &self.y, &self.m, at)
    }
}

/// Tensor-product spline on a rectangular grid, values stored row-major
/// (`values[i * n_y + j]` at `(x_i, y_j)`).
#[derive(Debug, Clone)]
pub struct TensorSpline<T> {
    x: Vec<T>,
    y: Vec<T>,
    values: Vec<T>,
    row_moments: Vec<T>,
}

impl<T: Real> TensorSpline<T> {
    pub fn new(x: Vec<T>, y: Vec<T>, values: Vec<T>) -> Result<Self> {
        check_knots(&x)?;
        check_knots(&y)?;
        if values.len() != x.len() * y.len() {
            return Err(Error::config("tensor spline value count does not match the grid"));
        }
        let ny = y.len();
        let mut row_moments = Vec::with_capacity(values.len());
        for row in values.chunks(ny) {
            row_moments.extend(clamped_moments(&y, row));
        }
        Ok(Self {
            x,
            y,
            values,
            row_moments,
        })
    }

    pub fn eval(&self, x: T, y: T) -> T {
        let ny = self.y.len();
        let column: Vec<T> = self
            .values
            .chunks(ny)
            .zip(self.row_moments.chunks(ny))
            .map(|(row, m)| eval_piece(&self.y, row, m, y))
            .collect();
        let m = clamped_moments(&self.x, &column);
        eval_piece(&self.x, &column, &m, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_even_cosine() {
        let n = 81;
        let x: Vec<f64> = (0..n)
            .map(|i| std::f64::consts::PI * i as f64 / (n - 1) as f64)
            .collect();
        let y = x.iter().map(|v| v.cos()).collect();
        let s = CubicSpline::new(x, y).unwrap();
        for k in 0..50 {
            let at = 0.06 * k as f64 + 0.01;
            assert!((s.eval(at) - at.cos()).abs() < 1e-6);
        }
    }

    #[test]
    fn tensor_matches_separable_function() {
        let x: Vec<f64> = (0..41).map(|i| 1.0 + i as f64 * 0.05).collect();
        let y: Vec<f64> = (0..41).map(|j| j as f64 * std::f64::consts::FRAC_PI_2 / 40.0).collect();
        let f = |a: f64, b: f64| (std::f64::consts::PI * (a - 1.0)).cos() * (2.0 * b).cos();
        let values = x.iter().flat_map(|&a| y.iter().map(move |&b| f(a, b))).collect();
        let s = TensorSpline::new(x, y, values).unwrap();
        let err = (0..20)
            .map(|k| (1.03 + 0.09 * k as f64, 0.07 * k as f64 + 0.02))
            .map(|(a, b)| (s.eval(a, b) - f(a, b)).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-5, "{err}");
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(CubicSpline::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(TensorSpline::new(vec![0.0, 1.0], vec![0.0, 1.0], vec![1.0; 3]).is_err());
    }
}
