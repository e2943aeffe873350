//! Coefficient families `a_i: ℝ^{n+1} → ℝ` and their Jacobians.
//!
//! A point `ξ = (ξ_0, ξ_1, …, ξ_n)` stands for `(u, D_1u, …, D_nu)`. Every
//! family is independent of the space variable.

mod bump;
mod eval;

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use bump::{bump_gradient, bump_value, default_alpha_grid};
pub use eval::fd_jacobian;

/// Safety factor applied to grid maxima when estimating the Example 5 constant.
pub const ALPHA_SAFETY_FACTOR: f64 = 1.05;

/// Tolerance on `Σα_j = p − 1` for the Example 3 exponents.
pub const EXPONENT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `a_i = ξ_i|ξ_i|^{p−2}`.
    Example1,
    /// p-Laplacian in the gradient block plus `ξ_0|ξ_0|^{p−2}`.
    Example2,
    /// `a_i = ξ_i|ξ|^{p−2} + g(ξ)` with the product-form perturbation `g`.
    Example3,
    /// Block system, `2 ≤ p ≤ 4`: rows `i ≤ k` use `|ξ|`, rows `i > k` use `|ζ|`.
    Example4,
    /// Block system for `p > 4` with a secondary exponent `r ∈ [2, 4]`.
    Example4HighP,
    /// Diagonal power law perturbed by compactly supported bumps.
    Example5,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Example1,
        Variant::Example2,
        Variant::Example3,
        Variant::Example4,
        Variant::Example4HighP,
        Variant::Example5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Example1 => "example1",
            Variant::Example2 => "example2",
            Variant::Example3 => "example3",
            Variant::Example4 => "example4",
            Variant::Example4HighP => "example4highp",
            Variant::Example5 => "example5",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == key)
            .ok_or_else(|| {
                Error::InvalidSpec(format!(
                    "unknown family `{s}` (expected one of example1, example2, example3, example4, example4highp, example5)"
                ))
            })
    }
}

/// A point `ξ ∈ ℝ^{n+1}` with finite components.
#[derive(Debug, Clone, PartialEq)]
pub struct PointXi<T>(Vec<T>);

impl<T: Real> PointXi<T> {
    pub fn new(components: Vec<T>) -> Result<Self> {
        if components.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("point component"));
        }
        Ok(Self(components))
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl<T> Deref for PointXi<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

/// Serialized form. Absent keys mean "not used by this variant".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Real")]
pub struct RawFamilySpec<T> {
    pub variant: Variant,
    pub p: T,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bump_radius: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bump_scales: Option<Vec<T>>,
}

impl<T: Real> RawFamilySpec<T> {
    pub fn new(variant: Variant, p: T, n: usize) -> Self {
        Self {
            variant,
            p,
            n,
            k: None,
            r: None,
            epsilon: None,
            exponents: None,
            bump_radius: None,
            bump_scales: None,
        }
    }
}

/// A validated coefficient family. Construct through the named constructors
/// or by deserializing; both run the same validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFamilySpec<T>", into = "RawFamilySpec<T>", bound = "T: Real")]
pub struct FamilySpec<T> {
    variant: Variant,
    p: T,
    n: usize,
    k: usize,
    r: T,
    epsilon: T,
    exponents: Vec<T>,
    bump_radius: T,
    bump_scales: Vec<T>,
    alpha: T,
}

impl<T: Real> FamilySpec<T> {
    pub fn example1(p: T, n: usize) -> Result<Self> {
        Self::from_raw(RawFamilySpec::new(Variant::Example1, p, n))
    }

    pub fn example2(p: T, n: usize) -> Result<Self> {
        Self::from_raw(RawFamilySpec::new(Variant::Example2, p, n))
    }

    /// Example 3 with explicit margin `ε` and exponents `α_j` (`Σα_j = p − 1`).
    pub fn example3(p: T, n: usize, epsilon: T, exponents: Vec<T>) -> Result<Self> {
        let mut raw = RawFamilySpec::new(Variant::Example3, p, n);
        raw.epsilon = Some(epsilon);
        raw.exponents = Some(exponents);
        Self::from_raw(raw)
    }

    /// Example 3 with the default exponent split (see [`default_exponents`]).
    pub fn example3_default(p: T, n: usize, epsilon: T) -> Result<Self> {
        let mut raw = RawFamilySpec::new(Variant::Example3, p, n);
        raw.epsilon = Some(epsilon);
        Self::from_raw(raw)
    }

    pub fn example4(p: T, n: usize, k: usize) -> Result<Self> {
        let mut raw = RawFamilySpec::new(Variant::Example4, p, n);
        raw.k = Some(k);
        Self::from_raw(raw)
    }

    pub fn example4_high_p(p: T, n: usize, k: usize, r: T) -> Result<Self> {
        let mut raw = RawFamilySpec::new(Variant::Example4HighP, p, n);
        raw.k = Some(k);
        raw.r = Some(r);
        Self::from_raw(raw)
    }

    pub fn example5(p: T, n: usize, bump_radius: T, bump_scales: Vec<T>) -> Result<Self> {
        let mut raw = RawFamilySpec::new(Variant::Example5, p, n);
        raw.bump_radius = Some(bump_radius);
        raw.bump_scales = Some(bump_scales);
        Self::from_raw(raw)
    }

    /// Example 5 with equal bump amplitudes chosen so that the estimated
    /// `α ≤ (p − 1)/(2(2n + 1))`, i.e. a margin `p − 1 − (2n+1)α ≥ (p − 1)/2`.
    pub fn example5_calibrated(p: T, n: usize, bump_radius: T) -> Result<Self> {
        let unit = Self::example5(p, n, bump_radius, vec![T::zero(); n + 1])?;
        let grid = default_alpha_grid(n);
        let per_unit = bump::alpha_for_scales(&unit, &vec![T::one(); n + 1], grid)?;
        let target = calibration_target(p, n);
        let beta = if per_unit > T::zero() {
            target / per_unit * T::of(1.0 - 1e-9)
        } else {
            T::zero()
        };
        Self::example5(p, n, bump_radius, vec![beta; n + 1])
    }

    pub fn from_raw(raw: RawFamilySpec<T>) -> Result<Self> {
        validate(raw)
    }

    pub fn to_raw(&self) -> RawFamilySpec<T> {
        let mut raw = RawFamilySpec::new(self.variant, self.p, self.n);
        match self.variant {
            Variant::Example1 | Variant::Example2 => {}
            Variant::Example3 => {
                raw.epsilon = Some(self.epsilon);
                raw.exponents = Some(self.exponents.clone());
            }
            Variant::Example4 => raw.k = Some(self.k),
            Variant::Example4HighP => {
                raw.k = Some(self.k);
                raw.r = Some(self.r);
            }
            Variant::Example5 => {
                raw.bump_radius = Some(self.bump_radius);
                raw.bump_scales = Some(self.bump_scales.clone());
            }
        }
        raw
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Length of `ξ`, i.e. `n + 1`.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn exponents(&self) -> &[T] {
        &self.exponents
    }

    pub fn bump_radius(&self) -> T {
        self.bump_radius
    }

    pub fn bump_scales(&self) -> &[T] {
        &self.bump_scales
    }

    /// Cached Example 5 constant `α` (zero for other variants).
    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Prefactor `1/((n + 1 + ε)·max α_j)` of the Example 3 perturbation.
    pub fn example3_gain(&self) -> T {
        let max_alpha = self.exponents.iter().fold(T::zero(), |m, &a| m.max(a));
        T::one() / ((T::of_usize(self.n + 1) + self.epsilon) * max_alpha)
    }

    /// Lower bound on the pointwise modulus that the analysis guarantees,
    /// where one is known in closed form.
    pub fn guaranteed_delta(&self) -> Option<T> {
        match self.variant {
            Variant::Example1 => Some(self.p - T::one()),
            Variant::Example2 | Variant::Example4 => Some(T::one()),
            Variant::Example3 => {
                Some(self.epsilon / (T::of_usize(self.n + 1) + self.epsilon))
            }
            Variant::Example4HighP => None,
            Variant::Example5 => {
                Some(self.p - T::one() - T::of_usize(2 * self.n + 1) * self.alpha)
            }
        }
    }

    /// Growth constant `c` with `|a_i(ξ)| ≤ c·|ξ|^{p−1}`, where one holds globally.
    pub fn documented_growth_constant(&self) -> Option<T> {
        match self.variant {
            Variant::Example1 | Variant::Example2 | Variant::Example4 => Some(T::one()),
            Variant::Example3 => Some(T::one() + self.example3_gain()),
            Variant::Example4HighP | Variant::Example5 => None,
        }
    }

    /// Recomputes `α` on a regular grid with `grid_per_axis` points per axis,
    /// stores it, and returns it.
    pub fn estimate_alpha(&mut self, grid_per_axis: usize) -> Result<T> {
        if self.variant != Variant::Example5 {
            return Err(Error::InvalidArgument(format!(
                "estimate_alpha requires example5, got {}",
                self.variant
            )));
        }
        let alpha = bump::alpha_for_scales(self, &self.bump_scales, grid_per_axis)?;
        check_example5_margin(self.p, self.n, alpha)?;
        self.alpha = alpha;
        Ok(alpha)
    }

    pub(crate) fn check_dim(&self, xi: &[T]) -> Result<()> {
        if xi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: xi.len(),
            });
        }
        if xi.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("point component"));
        }
        Ok(())
    }
}

impl<T: Real> TryFrom<RawFamilySpec<T>> for FamilySpec<T> {
    type Error = Error;
    fn try_from(raw: RawFamilySpec<T>) -> Result<Self> {
        validate(raw)
    }
}

impl<T: Real> From<FamilySpec<T>> for RawFamilySpec<T> {
    fn from(spec: FamilySpec<T>) -> Self {
        spec.to_raw()
    }
}

/// `(p − 1)/(2(2n + 1))`, the calibrated upper bound on the Example 5 `α`.
pub fn calibration_target<T: Real>(p: T, n: usize) -> T {
    (p - T::one()) / T::of_usize(2 * (2 * n + 1))
}

/// Default Example 3 exponents: an even split when every share is at least 1,
/// otherwise all of `p − 1` on `α_0`. Both choices keep
/// `|D_j g| ≤ |ξ|^{p−2}/(n+1+ε)` valid away from the coordinate planes.
pub fn default_exponents<T: Real>(p: T, n: usize) -> Vec<T> {
    let share = (p - T::one()) / T::of_usize(n + 1);
    if share >= T::one() {
        vec![share; n + 1]
    } else {
        let mut e = vec![T::zero(); n + 1];
        e[0] = p - T::one();
        e
    }
}

fn check_example5_margin<T: Real>(p: T, n: usize, alpha: T) -> Result<()> {
    let margin = p - T::one() - T::of_usize(2 * n + 1) * alpha;
    if margin > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "example5 requires p − 1 − (2n+1)·α > 0, got α = {alpha} (margin {margin}); reduce bump_scales"
        )))
    }
}

fn reject_key(variant: Variant, key: &str, present: bool) -> Result<()> {
    if present {
        Err(Error::InvalidSpec(format!(
            "key `{key}` is not used by {variant}"
        )))
    } else {
        Ok(())
    }
}

fn validate<T: Real>(raw: RawFamilySpec<T>) -> Result<FamilySpec<T>> {
    let RawFamilySpec {
        variant,
        p,
        n,
        k,
        r,
        epsilon,
        exponents,
        bump_radius,
        bump_scales,
    } = raw;
    if !p.is_finite() || p < T::of(2.0) {
        return Err(Error::InvalidSpec(format!("p must satisfy p ≥ 2, got {p}")));
    }
    if n < 1 {
        return Err(Error::InvalidSpec("n must satisfy n ≥ 1".into()));
    }
    let uses = |key: &str| -> bool {
        matches!(
            (variant, key),
            (Variant::Example3, "epsilon" | "exponents")
                | (Variant::Example4, "k")
                | (Variant::Example4HighP, "k" | "r")
                | (Variant::Example5, "bump_radius" | "bump_scales")
        )
    };
    for (key, present) in [
        ("k", k.is_some()),
        ("r", r.is_some()),
        ("epsilon", epsilon.is_some()),
        ("exponents", exponents.is_some()),
        ("bump_radius", bump_radius.is_some()),
        ("bump_scales", bump_scales.is_some()),
    ] {
        if !uses(key) {
            reject_key(variant, key, present)?;
        }
    }

    let mut spec = FamilySpec {
        variant,
        p,
        n,
        k: 0,
        r: T::zero(),
        epsilon: T::zero(),
        exponents: Vec::new(),
        bump_radius: T::zero(),
        bump_scales: Vec::new(),
        alpha: T::zero(),
    };

    match variant {
        Variant::Example1 | Variant::Example2 => {}
        Variant::Example3 => {
            let eps = epsilon.unwrap_or_else(T::one);
            if !(eps.is_finite() && eps > T::zero()) {
                return Err(Error::InvalidSpec(format!(
                    "example3 requires epsilon > 0, got {eps}"
                )));
            }
            let exps = exponents.unwrap_or_else(|| default_exponents(p, n));
            if exps.len() != n + 1 {
                return Err(Error::InvalidSpec(format!(
                    "example3 requires n + 1 = {} exponents, got {}",
                    n + 1,
                    exps.len()
                )));
            }
            if exps.iter().any(|&a| !a.is_finite() || a < T::zero()) {
                return Err(Error::InvalidSpec(
                    "example3 exponents must satisfy α_j ≥ 0".into(),
                ));
            }
            let sum: T = exps.iter().copied().sum();
            if (sum - (p - T::one())).abs() > T::of(EXPONENT_SUM_TOL) {
                return Err(Error::InvalidSpec(format!(
                    "example3 exponents must satisfy Σα_j = p − 1 = {} within {EXPONENT_SUM_TOL:e}, got {sum}",
                    p - T::one()
                )));
            }
            spec.epsilon = eps;
            spec.exponents = exps;
        }
        Variant::Example4 => {
            if p > T::of(4.0) {
                return Err(Error::InvalidSpec(format!(
                    "example4 requires 2 ≤ p ≤ 4, got p = {p}; use example4highp for p > 4"
                )));
            }
            let k = k.unwrap_or(0);
            if k > n {
                return Err(Error::InvalidSpec(format!(
                    "example4 requires 0 ≤ k ≤ n = {n}, got k = {k}"
                )));
            }
            spec.k = k;
        }
        Variant::Example4HighP => {
            if p <= T::of(4.0) {
                return Err(Error::InvalidSpec(format!(
                    "example4highp requires p > 4, got p = {p}; use example4 for 2 ≤ p ≤ 4"
                )));
            }
            let k = k.unwrap_or(0);
            if k > n {
                return Err(Error::InvalidSpec(format!(
                    "example4highp requires 0 ≤ k ≤ n = {n}, got k = {k}"
                )));
            }
            let r = r.unwrap_or_else(|| T::of(3.0));
            if !(r.is_finite() && r >= T::of(2.0) && r <= T::of(4.0)) {
                return Err(Error::InvalidSpec(format!(
                    "example4highp requires 2 ≤ r ≤ 4, got r = {r}"
                )));
            }
            spec.k = k;
            spec.r = r;
        }
        Variant::Example5 => {
            let radius = bump_radius.unwrap_or_else(T::one);
            if !(radius.is_finite() && radius > T::zero()) {
                return Err(Error::InvalidSpec(format!(
                    "example5 requires bump_radius > 0, got {radius}"
                )));
            }
            spec.bump_radius = radius;
            let scales = match bump_scales {
                Some(s) => s,
                None => {
                    return FamilySpec::example5_calibrated(p, n, radius);
                }
            };
            if scales.len() != n + 1 {
                return Err(Error::InvalidSpec(format!(
                    "example5 requires n + 1 = {} bump_scales, got {}",
                    n + 1,
                    scales.len()
                )));
            }
            if scales.iter().any(|s| !s.is_finite()) {
                return Err(Error::InvalidSpec("example5 bump_scales must be finite".into()));
            }
            spec.bump_scales = scales;
            let alpha = bump::alpha_for_scales(&spec, &spec.bump_scales, default_alpha_grid(n))?;
            check_example5_margin(p, n, alpha)?;
            spec.alpha = alpha;
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example4_rejects_large_p_and_points_to_high_p() {
        let err = FamilySpec::example4(5.0_f64, 2, 0).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("2 ≤ p ≤ 4"), "{msg}");
        assert!(msg.contains("example4highp"), "{msg}");
    }

    #[test]
    fn exponent_sum_is_checked_tightly() {
        let bad = FamilySpec::example3(3.0_f64, 1, 1.0, vec![1.0, 1.0 + 1e-6]);
        assert!(matches!(bad, Err(Error::InvalidSpec(_))));
        let good = FamilySpec::example3(3.0_f64, 1, 1.0, vec![1.0, 1.0]);
        assert!(good.is_ok());
    }

    #[test]
    fn irrelevant_keys_are_rejected() {
        let mut raw = RawFamilySpec::new(Variant::Example1, 3.0_f64, 1);
        raw.r = Some(3.0);
        assert!(FamilySpec::from_raw(raw).is_err());
    }

    #[test]
    fn json_keys_and_round_trip() {
        let spec = FamilySpec::example4_high_p(5.0_f64, 3, 1, 2.5).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"variant":"example4highp","p":5.0,"n":3,"k":1,"r":2.5}"#);
        let back: FamilySpec<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let unknown = serde_json::from_str::<FamilySpec<f64>>(r#"{"variant":"example1","p":3,"n":1,"q":2}"#);
        assert!(unknown.is_err());
    }

    #[test]
    fn example5_with_large_bumps_is_rejected() {
        let err = FamilySpec::example5(2.0_f64, 1, 1.0, vec![100.0, 100.0]).unwrap_err();
        assert!(err.to_string().contains("p − 1 − (2n+1)·α"));
    }

    #[test]
    fn variant_names_parse() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert_eq!("Example4-High-P".parse::<Variant>().unwrap(), Variant::Example4HighP);
        assert!("example9".parse::<Variant>().is_err());
    }

    #[test]
    fn default_exponents_sum_to_p_minus_one() {
        for &(p, n) in &[(2.0_f64, 1), (3.0, 1), (3.0, 2), (7.0, 2)] {
            let e = default_exponents(p, n);
            assert_eq!(e.len(), n + 1);
            assert!((e.iter().sum::<f64>() - (p - 1.0)).abs() < 1e-14);
        }
    }
}
