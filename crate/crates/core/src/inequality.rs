//! The integral inequality `∫_0^1 |a + τb|^s dτ ≥ |b|^s / (2^s (s + 1))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{abs_pow, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LemmaInput<T> {
    pub a: T,
    pub b: T,
    pub s: T,
}

impl<T: Real> LemmaInput<T> {
    pub fn new(a: T, b: T, s: T) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && s.is_finite()) {
            return Err(Error::NonFinite("lemma input"));
        }
        if s < T::zero() {
            return Err(Error::InvalidArgument(format!("s must be ≥ 0, got {s}")));
        }
        Ok(Self { a, b, s })
    }

    /// Sign change `τ* = −a/b` of `a + τb`, if it lies strictly inside `(0, 1)`.
    pub fn interior_crossing(&self) -> Option<T> {
        if self.b.is_zero() {
            return None;
        }
        let t = -self.a / self.b;
        (t > T::zero() && t < T::one()).then_some(t)
    }
}

/// Closed-form `∫_0^1 |a + τb|^s dτ`.
pub fn lemma_integral_exact<T: Real>(input: &LemmaInput<T>) -> T {
    let LemmaInput { a, b, s } = *input;
    if b.is_zero() {
        return abs_pow(a, s);
    }
    let s1 = s + T::one();
    let denom = b.abs() * s1;
    if input.interior_crossing().is_some() {
        return (abs_pow(a, s1) + abs_pow(a + b, s1)) / denom;
    }
    if a.is_zero() {
        return abs_pow(b, s) / s1;
    }
    // a and a + b share a sign: |a+b|^{s+1} − |a|^{s+1} = |a|^{s+1}·expm1((s+1)·ln(1 + b/a))
    let ratio = b / a;
    let diff = abs_pow(a, s1) * (s1 * ratio.ln_1p()).exp_m1();
    diff.abs() / denom
}

/// `|b|^s / (2^s (s + 1))`.
pub fn lemma_lower_bound<T: Real>(input: &LemmaInput<T>) -> T {
    let LemmaInput { b, s, .. } = *input;
    abs_pow(b, s) / (T::of(2.0).powf(s) * (s + T::one()))
}

/// Composite three-point Gauss–Legendre rule for `∫_0^1 |a + τb|^s dτ`.
///
/// The interval is split at an interior zero of `a + τb`, and panels are
/// graded quadratically towards any endpoint where the integrand vanishes.
pub fn lemma_integral_quadrature<T: Real>(input: &LemmaInput<T>, panels: usize) -> Result<T> {
    if panels == 0 {
        return Err(Error::InvalidArgument("panels must be ≥ 1".into()));
    }
    let LemmaInput { a, b, s } = *input;
    let f = |t: T| abs_pow(a + t * b, s);
    let zero_at = |t: T| (a + t * b).is_zero();
    let total = match input.interior_crossing() {
        Some(tc) => {
            let left = ((T::of_usize(panels) * tc).round().to_usize().unwrap_or(1)).clamp(1, panels.max(2) - 1);
            let right = panels.saturating_sub(left).max(1);
            composite(&f, T::zero(), tc, left, false, true)
                + composite(&f, tc, T::one(), right, true, false)
        }
        None => composite(&f, T::zero(), T::one(), panels, zero_at(T::zero()), zero_at(T::one())),
    };
    Ok(total)
}

fn composite<T: Real, F: Fn(T) -> T>(
    f: &F,
    lo: T,
    hi: T,
    panels: usize,
    grade_lo: bool,
    grade_hi: bool,
) -> T {
    let len = hi - lo;
    let nodes: Vec<T> = (0..=panels)
        .map(|i| {
            let u = T::of_usize(i) / T::of_usize(panels);
            let g = match (grade_lo, grade_hi) {
                (true, false) => u * u,
                (false, true) => T::one() - (T::one() - u) * (T::one() - u),
                _ => u,
            };
            lo + len * g
        })
        .collect();
    let off = T::of(0.6_f64.sqrt());
    let (w_end, w_mid) = (T::of(5.0 / 18.0), T::of(8.0 / 18.0));
    nodes
        .windows(2)
        .map(|w| {
            let (mid, half) = (T::of(0.5) * (w[0] + w[1]), T::of(0.5) * (w[1] - w[0]));
            let edge = f(mid - half * off) + f(mid + half * off);
            (w[1] - w[0]) * (w_end * edge + w_mid * f(mid))
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(a: f64, b: f64, s: f64) -> LemmaInput<f64> {
        LemmaInput::new(a, b, s).unwrap()
    }

    #[test]
    fn reference_values() {
        assert_eq!(lemma_integral_exact(&input(0.0, 1.0, 0.0)), 1.0);
        assert!((lemma_integral_exact(&input(-0.5, 1.0, 2.0)) - 1.0 / 12.0).abs() < 1e-16);
        // ∫_0^1 (1 + τ) dτ = 3/2
        assert!((lemma_integral_exact(&input(1.0, 1.0, 1.0)) - 1.5).abs() < 1e-15);
        assert_eq!(lemma_integral_exact(&input(-3.0, 0.0, 2.0)), 9.0);
    }

    #[test]
    fn bound_values() {
        assert_eq!(lemma_lower_bound(&input(7.0, 1.0, 0.0)), 1.0);
        assert!((lemma_lower_bound(&input(0.0, 1.0, 2.0)) - 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(lemma_lower_bound(&input(0.0, 2.0, 1.0)), 0.5);
    }

    #[test]
    fn quadrature_reference_values() {
        for panels in [1, 7, 100] {
            assert_eq!(lemma_integral_quadrature(&input(0.0, 0.0, 5.0), panels).unwrap(), 0.0);
        }
        let q = lemma_integral_quadrature(&input(1.0, 1.0, 1.0), 1000).unwrap();
        assert!((q - 1.5).abs() < 1e-6);
        let q = lemma_integral_quadrature(&input(-0.5, 1.0, 2.0), 1000).unwrap();
        assert!((q - 1.0 / 12.0).abs() < 1e-6);
    }

    #[test]
    fn invalid_inputs() {
        assert!(LemmaInput::new(0.0, 1.0, -0.1).is_err());
        assert!(LemmaInput::new(f64::INFINITY, 1.0, 1.0).is_err());
        assert!(lemma_integral_quadrature(&input(1.0, 1.0, 1.0), 0).is_err());
    }

    #[test]
    fn small_b_relative_to_a_keeps_precision() {
        // ∫_0^1 (10 + τ·1e−9)^6 dτ ≈ 10^6 (1 + 3e−10)
        let v = lemma_integral_exact(&input(10.0, 1e-9, 6.0));
        let expect = 1e6 * (1.0 + 3e-10);
        assert!((v - expect).abs() / expect < 1e-14, "{v}");
    }
}
