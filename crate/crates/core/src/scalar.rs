//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    fn of(x: f64) -> Self;

    fn of_usize(n: usize) -> Self {
        Self::of(n as f64)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }
}

impl Real for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }
}

/// `|t|^s` with the conventions `0^s = 0` for `s > 0` and `0^0 = 1`.
#[inline]
pub fn abs_pow<T: Real>(t: T, s: T) -> T {
    let a = t.abs();
    if a.is_zero() {
        if s.is_zero() {
            T::one()
        } else {
            T::zero()
        }
    } else {
        a.powf(s)
    }
}

/// `t·|t|^s`, zero at `t = 0` for every `s ≥ 0`.
#[inline]
pub fn signed_pow<T: Real>(t: T, s: T) -> T {
    if t.is_zero() {
        T::zero()
    } else {
        t * abs_pow(t, s)
    }
}

/// Euclidean norm.
pub fn norm2<T: Real>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// `Σ |v_i|^p`.
pub fn lp_pow_sum<T: Real>(v: &[T], p: T) -> T {
    v.iter().map(|&x| abs_pow(x, p)).sum()
}

pub fn max_abs<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}
