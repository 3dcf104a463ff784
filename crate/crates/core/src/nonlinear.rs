//! The power nonlinearity `f(t) = t^p` (zero for `t ≤ 0`) and its primitive.

use crate::scalar::Real;

#[inline]
pub fn source<T: Real>(t: T, p: T) -> T {
    if t > T::zero() {
        t.powf(p)
    } else {
        T::zero()
    }
}

#[inline]
pub fn source_derivative<T: Real>(t: T, p: T) -> T {
    if t > T::zero() {
        p * t.powf(p - T::one())
    } else {
        T::zero()
    }
}

/// `F(t) = t^{p+1}/(p+1)` for `t ≥ 0`, zero otherwise.
#[inline]
pub fn primitive<T: Real>(t: T, p: T) -> T {
    if t > T::zero() {
        t.powf(p + T::one()) / (p + T::one())
    } else {
        T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_matches_source() {
        let p = 2.5_f64;
        for &t in &[0.3, 1.0, 2.7] {
            let h = 1e-6;
            let fd = (primitive(t + h, p) - primitive(t - h, p)) / (2.0 * h);
            assert!((fd - source(t, p)).abs() < 1e-8);
        }
        assert_eq!(primitive(-1.0, p), 0.0);
        assert_eq!(source(-1.0, p), 0.0);
    }
}
