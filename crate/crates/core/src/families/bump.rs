//! Compactly supported bumps `h_i(ξ) = β_i·exp(−1/(1 − |ξ/R|²))` and the
//! Example 5 smallness constant.

use super::{FamilySpec, ALPHA_SAFETY_FACTOR};
use crate::error::{Error, Result};
use crate::scalar::{abs_pow, Real};

/// Unit bump `exp(−1/(1 − |ξ|²/R²))` inside the ball of radius `R`, zero outside.
pub fn bump_value<T: Real>(xi: &[T], radius: T) -> T {
    let s = xi.iter().map(|&x| x * x).sum::<T>() / (radius * radius);
    if s < T::one() {
        (-T::one() / (T::one() - s)).exp()
    } else {
        T::zero()
    }
}

/// Gradient of the unit bump, written into `out`.
pub fn bump_gradient<T: Real>(xi: &[T], radius: T, out: &mut [T]) {
    let r2 = radius * radius;
    let s = xi.iter().map(|&x| x * x).sum::<T>() / r2;
    if s < T::one() {
        let one_minus = T::one() - s;
        let phi = (-T::one() / one_minus).exp();
        let factor = -T::of(2.0) * phi / (r2 * one_minus * one_minus);
        for (o, &x) in out.iter_mut().zip(xi) {
            *o = factor * x;
        }
    } else {
        out.iter_mut().for_each(|o| *o = T::zero());
    }
}

/// Grid resolution used for `α` during validation: about 2·10⁵ points in
/// total, odd so the origin is a grid point.
pub fn default_alpha_grid(n: usize) -> usize {
    let per_axis = 2.0e5_f64.powf(1.0 / (n as f64 + 1.0)).floor() as usize;
    let g = per_axis.clamp(3, 401);
    if g % 2 == 0 {
        g - 1
    } else {
        g
    }
}

/// Raw grid maxima over the support: `(sup |ξ|^{(n+1)(p−1)}, sup |h|, sup |Dh|)`.
pub(crate) fn grid_suprema<T: Real>(
    spec: &FamilySpec<T>,
    scales: &[T],
    grid_per_axis: usize,
) -> Result<(T, T, T)> {
    if grid_per_axis < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid_per_axis must be ≥ 2, got {grid_per_axis}"
        )));
    }
    let dim = spec.dim();
    let radius = spec.bump_radius();
    let power = T::of_usize(dim) * (spec.p() - T::one());
    let max_scale = scales.iter().fold(T::zero(), |m, &b| m.max(b.abs()));
    let step = T::of(2.0) * radius / T::of_usize(grid_per_axis - 1);

    let mut sup_norm = T::zero();
    let mut sup_h = T::zero();
    let mut sup_dh = T::zero();
    let mut point = vec![T::zero(); dim];
    let mut grad = vec![T::zero(); dim];
    let mut visit = |point: &[T]| {
        let phi = bump_value(point, radius);
        if phi > T::zero() {
            let norm = point.iter().map(|&x| x * x).sum::<T>().sqrt();
            sup_norm = sup_norm.max(abs_pow(norm, power));
            sup_h = sup_h.max(max_scale * phi);
            bump_gradient(point, radius, &mut grad);
            let g = grad.iter().fold(T::zero(), |m, &d| m.max(d.abs()));
            sup_dh = sup_dh.max(max_scale * g);
        }
    };

    // origin first: the bump maximum sits there even on even grids
    visit(&point);
    let mut idx = vec![0usize; dim];
    loop {
        for (x, &i) in point.iter_mut().zip(&idx) {
            *x = -radius + step * T::of_usize(i);
        }
        visit(&point);
        let mut axis = 0;
        loop {
            if axis == dim {
                return Ok((sup_norm, sup_h, sup_dh));
            }
            idx[axis] += 1;
            if idx[axis] < grid_per_axis {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}

/// `α = 1.05 · p · max{sup|ξ|^{(n+1)(p−1)}, 1} · max{sup|h|, sup|Dh|}` from grid maxima.
pub(crate) fn alpha_for_scales<T: Real>(
    spec: &FamilySpec<T>,
    scales: &[T],
    grid_per_axis: usize,
) -> Result<T> {
    let (sup_norm, sup_h, sup_dh) = grid_suprema(spec, scales, grid_per_axis)?;
    let bump_factor = sup_h.max(sup_dh);
    if bump_factor.is_zero() {
        return Ok(T::zero());
    }
    Ok(T::of(ALPHA_SAFETY_FACTOR) * spec.p() * sup_norm.max(T::one()) * bump_factor)
}
