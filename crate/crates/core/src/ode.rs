//! Dormand–Prince 5(4) embedded Runge–Kutta integrator with step control.

use crate::error::{Error, Result};
use crate::scalar::Real;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Step-size controlled Dormand–Prince integrator for `y' = f(x, y)`, `y ∈ R^D`.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5<T> {
    pub rtol: T,
    pub atol: T,
    pub max_step: T,
    pub min_step: T,
}

/// Outcome of the step callback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

impl<T: Real> Dopri5<T> {
    pub fn new(rtol: T, atol: T, max_step: T) -> Self {
        Self {
            rtol,
            atol,
            max_step,
            min_step: T::lit(1e-14),
        }
    }

    /// Integrates from `(x0, y0)` towards `x_end`; `on_step` sees every
    /// accepted `(x, y)` and may stop the integration early.
    pub fn integrate<const D: usize, F, S>(
        &self,
        f: F,
        x0: T,
        y0: [T; D],
        x_end: T,
        mut on_step: S,
    ) -> Result<(T, [T; D])>
    where
        F: Fn(T, &[T; D]) -> [T; D],
        S: FnMut(T, &[T; D]) -> Control,
    {
        let mut x = x0;
        let mut y = y0;
        let mut h = self.max_step.min((x_end - x0) * T::lit(0.01));
        let mut k: [[T; D]; 7] = [[T::zero(); D]; 7];
        k[0] = f(x, &y);
        let lit = |v: f64| T::lit(v);
        while x < x_end {
            if x + h > x_end {
                h = x_end - x;
            }
            for s in 1..7 {
                let mut ys = y;
                for (i, yi) in ys.iter_mut().enumerate() {
                    let mut acc = T::zero();
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc = acc + lit(A[s][j]) * kj[i];
                    }
                    *yi = *yi + h * acc;
                }
                k[s] = f(x + lit(C[s]) * h, &ys);
            }
            let mut y5 = y;
            let mut err = T::zero();
            for i in 0..D {
                let mut d5 = T::zero();
                let mut d4 = T::zero();
                for s in 0..7 {
                    d5 = d5 + lit(B5[s]) * k[s][i];
                    d4 = d4 + lit(B4[s]) * k[s][i];
                }
                y5[i] = y[i] + h * d5;
                let sc = self.atol + self.rtol * y[i].abs().max(y5[i].abs());
                let e = h * (d5 - d4) / sc;
                err = err + e * e;
            }
            err = (err / T::from_count(D)).sqrt();
            if err <= T::one() || h <= self.min_step {
                x = x + h;
                y = y5;
                k[0] = k[6];
                if on_step(x, &y) == Control::Stop {
                    return Ok((x, y));
                }
                let grow = if err > T::zero() {
                    (T::lit(0.9) * err.powf(T::lit(-0.2))).min(T::lit(5.0))
                } else {
                    T::lit(5.0)
                };
                h = (h * grow).min(self.max_step);
            } else {
                h = h * (T::lit(0.9) * err.powf(T::lit(-0.25))).max(T::lit(0.1));
                if !h.is_finite() {
                    return Err(Error::solver("non-finite step size", Vec::new()));
                }
            }
        }
        Ok((x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_to_high_accuracy() {
        let ode = Dopri5::new(1e-12, 1e-14, 0.1);
        let (x, y) = ode
            .integrate(
                |_x, y: &[f64; 2]| [y[1], -y[0]],
                0.0,
                [0.0, 1.0],
                10.0,
                |_, _| Control::Continue,
            )
            .unwrap();
        assert_eq!(x, 10.0);
        assert!((y[0] - 10f64.sin()).abs() < 1e-10);
        assert!((y[1] - 10f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn callback_can_stop() {
        let ode = Dopri5::new(1e-10, 1e-12, 0.05);
        let (x, y) = ode
            .integrate(
                |_x, y: &[f64; 1]| [-y[0]],
                0.0,
                [1.0],
                50.0,
                |_, y| if y[0] < 0.5 { Control::Stop } else { Control::Continue },
            )
            .unwrap();
        assert!(y[0] < 0.5 && x < 0.8);
    }
}
