//! Gauss–Legendre rules and adaptive composite integration.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = T::from_count(n);
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev-like initial guess, then Newton on P_n.
            let mut x = (T::PI() * (T::from_count(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Applies the rule on `[a, b]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F, a: T, b: T) -> T {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + *w * f(mid + half * *x);
        }
        acc * half
    }

    /// Applies the rule on `[a, b]`, returning the estimate and the estimate of `∫|f|`.
    fn integrate_with_abs<F: FnMut(T) -> T>(&self, f: &mut F, a: T, b: T) -> (T, T) {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        let (mut acc, mut abs) = (T::zero(), T::zero());
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * *x);
            acc = acc + *w * v;
            abs = abs + *w * v.abs();
        }
        (acc * half, abs * half.abs())
    }

    /// Maps the rule onto `[a, b]`, returning physical nodes and scaled weights.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * *x, *w * half))
    }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_count(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = T::from_count(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Composite fixed-order Gauss–Legendre over consecutive breakpoints.
pub fn composite<T: Real, F: FnMut(T) -> T>(rule: &GaussLegendre<T>, mut f: F, breaks: &[T]) -> T {
    breaks
        .windows(2)
        .map(|w| rule.integrate(&mut f, w[0], w[1]))
        .fold(T::zero(), |a, b| a + b)
}

/// Adaptive composite Gauss–Legendre integrator.
///
/// Each panel is estimated with a 10-point and a 20-point rule; panels are
/// bisected until the two agree to `rel_tol` times the running estimate of
/// `∫|f|`.
#[derive(Debug, Clone)]
pub struct Adaptive<T> {
    low: GaussLegendre<T>,
    high: GaussLegendre<T>,
    pub rel_tol: T,
    pub initial_panels: usize,
    pub max_depth: u32,
}

impl<T: Real> Default for Adaptive<T> {
    fn default() -> Self {
        Self::new(T::lit(1e-12))
    }
}

impl<T: Real> Adaptive<T> {
    pub fn new(rel_tol: T) -> Self {
        Self {
            low: GaussLegendre::new(10),
            high: GaussLegendre::new(20),
            rel_tol,
            initial_panels: 8,
            max_depth: 40,
        }
    }

    pub fn with_panels(mut self, panels: usize) -> Self {
        self.initial_panels = panels.max(1);
        self
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F, a: T, b: T) -> Result<T> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::domain("integration bounds must be finite"));
        }
        if a == b {
            return Ok(T::zero());
        }
        let n = self.initial_panels;
        let h = (b - a) / T::from_count(n);
        let mut panels: Vec<(T, T, T, u32)> = Vec::with_capacity(4 * n);
        let mut scale = T::zero();
        for i in 0..n {
            let lo = a + h * T::from_count(i);
            let hi = if i + 1 == n { b } else { a + h * T::from_count(i + 1) };
            let (est, abs) = self.high.integrate_with_abs(&mut f, lo, hi);
            scale = scale + abs;
            panels.push((lo, hi, est, 0));
        }
        let mut total = T::zero();
        let mut stack = panels;
        stack.reverse();
        while let Some((lo, hi, high_est, depth)) = stack.pop() {
            let low_est = self.low.integrate(&mut f, lo, hi);
            let width_share = ((hi - lo) / (b - a)).abs();
            let tol = self.rel_tol * scale.max(T::min_positive_value()) * width_share.max(T::lit(1e-3));
            if (high_est - low_est).abs() <= tol || depth >= self.max_depth {
                total = total + high_est;
                continue;
            }
            let mid = (lo + hi) * T::lit(0.5);
            let (right, _) = self.high.integrate_with_abs(&mut f, mid, hi);
            let (left, _) = self.high.integrate_with_abs(&mut f, lo, mid);
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
        Ok(total)
    }

    /// Integrates over consecutive breakpoints, one adaptive pass per segment.
    pub fn integrate_breaks<F: FnMut(T) -> T>(&self, mut f: F, breaks: &[T]) -> Result<T> {
        let mut acc = T::zero();
        for w in breaks.windows(2) {
            acc = acc + self.integrate(&mut f, w[0], w[1])?;
        }
        Ok(acc)
    }
}
