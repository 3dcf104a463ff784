//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar used throughout the crate (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts an integer count into the scalar type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Gamma function at half-integer arguments, `Γ(k/2)` for `k ≥ 1`.
pub fn gamma_half<T: Real>(k: u32) -> T {
    assert!(k >= 1, "Γ(k/2) requires k ≥ 1");
    let (mut acc, mut x) = if k.is_multiple_of(2) {
        (T::one(), T::one())
    } else {
        (T::PI().sqrt(), T::lit(0.5))
    };
    let target = T::lit(f64::from(k) / 2.0);
    while x < target {
        acc = acc * x;
        x = x + T::one();
    }
    acc
}

/// Surface measure of the unit sphere `S^k ⊂ R^{k+1}`.
pub fn sphere_area<T: Real>(k: u32) -> T {
    let half = T::lit(f64::from(k + 1) / 2.0);
    T::lit(2.0) * T::PI().powf(half) / gamma_half::<T>(k + 1)
}

/// Fubini–Study volume of `CP^n`, `π^n / n!`.
pub fn cpn_volume<T: Real>(n: u32) -> T {
    let mut fact = T::one();
    for k in 2..=n {
        fact = fact * T::lit(f64::from(k));
    }
    T::PI().powi(n as i32) / fact
}
