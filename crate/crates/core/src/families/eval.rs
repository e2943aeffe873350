use std::ops::Range;

use super::bump::{bump_gradient, bump_value};
use super::{FamilySpec, Variant};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{abs_pow, signed_pow, Real};

fn block_norm<T: Real>(xi: &[T], set: &Range<usize>) -> T {
    xi[set.clone()].iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// `out[i] += ξ_i·|ξ_set|^{q−2}` for `i ∈ rows`.
fn add_block_coeffs<T: Real>(xi: &[T], rows: Range<usize>, set: Range<usize>, q: T, out: &mut [T]) {
    let w = abs_pow(block_norm(xi, &set), q - T::of(2.0));
    for i in rows {
        out[i] = out[i] + xi[i] * w;
    }
}

/// Jacobian of [`add_block_coeffs`]:
/// `δ_ij|ξ_set|^{q−2} + (q−2)ξ_iξ_j|ξ_set|^{q−4}` for `i ∈ rows`, `j ∈ set`.
fn add_block_jacobian<T: Real>(
    xi: &[T],
    rows: Range<usize>,
    set: Range<usize>,
    q: T,
    floor: Option<T>,
    jac: &mut Matrix<T>,
) -> Result<()> {
    let two = T::of(2.0);
    let four = T::of(4.0);
    if q == two {
        for i in rows {
            jac[(i, i)] = jac[(i, i)] + T::one();
        }
        return Ok(());
    }
    let mut norm = block_norm(xi, &set);
    if q < four {
        if let Some(f) = floor {
            norm = norm.max(f);
        } else if norm.is_zero() {
            return Err(Error::NondifferentiablePoint(format!(
                "|(ξ_{}, …, ξ_{})| = 0 with exponent {q} in (2, 4)",
                set.start,
                set.end - 1
            )));
        }
    }
    let w2 = abs_pow(norm, q - two);
    let w4 = abs_pow(norm, q - four);
    for i in rows {
        jac[(i, i)] = jac[(i, i)] + w2;
        for j in set.clone() {
            jac[(i, j)] = jac[(i, j)] + (q - two) * xi[i] * xi[j] * w4;
        }
    }
    Ok(())
}

impl<T: Real> FamilySpec<T> {
    /// `(a_0(ξ), …, a_n(ξ))`.
    pub fn eval_coefficients(&self, xi: &[T]) -> Result<Vec<T>> {
        self.check_dim(xi)?;
        let mut out = vec![T::zero(); self.dim()];
        self.coefficients_into(xi, &mut out);
        Ok(out)
    }

    /// Unchecked evaluation into `out` (`xi.len() == out.len() == n + 1`).
    pub(crate) fn coefficients_into(&self, xi: &[T], out: &mut [T]) {
        let dim = self.dim();
        let p = self.p;
        let pm2 = p - T::of(2.0);
        out.iter_mut().for_each(|o| *o = T::zero());
        match self.variant {
            Variant::Example1 => {
                for i in 0..dim {
                    out[i] = signed_pow(xi[i], pm2);
                }
            }
            Variant::Example2 => {
                out[0] = signed_pow(xi[0], pm2);
                add_block_coeffs(xi, 1..dim, 1..dim, p, out);
            }
            Variant::Example3 => {
                add_block_coeffs(xi, 0..dim, 0..dim, p, out);
                let g = self.example3_gain()
                    * xi
                        .iter()
                        .zip(&self.exponents)
                        .map(|(&x, &a)| abs_pow(x, a))
                        .fold(T::one(), |acc, v| acc * v);
                for o in out.iter_mut() {
                    *o = *o + g;
                }
            }
            Variant::Example4 => {
                let k = self.k;
                add_block_coeffs(xi, 0..k + 1, 0..dim, p, out);
                add_block_coeffs(xi, k + 1..dim, k + 1..dim, p, out);
            }
            Variant::Example4HighP => {
                let k = self.k;
                add_block_coeffs(xi, 0..k + 1, 0..k + 1, p, out);
                add_block_coeffs(xi, 0..k + 1, 0..dim, self.r, out);
                add_block_coeffs(xi, k + 1..dim, k + 1..dim, p, out);
                add_block_coeffs(xi, k + 1..dim, k + 1..dim, self.r, out);
            }
            Variant::Example5 => {
                let product = xi
                    .iter()
                    .map(|&x| signed_pow(x, pm2))
                    .fold(T::one(), |acc, v| acc * v);
                let phi = bump_value(xi, self.bump_radius);
                for i in 0..dim {
                    out[i] = signed_pow(xi[i], pm2) + product * self.bump_scales[i] * phi;
                }
            }
        }
    }

    /// Analytic Jacobian, entry `(i, j) = D_j a_i(ξ)`.
    ///
    /// Returns [`Error::NondifferentiablePoint`] where a block norm with an
    /// exponent in `(2, 4)` vanishes, or where an Example 3 factor `|ξ_j|^{α_j}`
    /// with `0 < α_j ≤ 1` is evaluated at `ξ_j = 0`.
    pub fn eval_jacobian(&self, xi: &[T]) -> Result<Matrix<T>> {
        self.check_dim(xi)?;
        self.jacobian_impl(xi, None)
    }

    /// Like [`eval_jacobian`](Self::eval_jacobian) but floors vanishing block
    /// norms at `floor` and takes the zero subgradient at Example 3 kinks.
    pub fn eval_jacobian_floored(&self, xi: &[T], floor: T) -> Result<Matrix<T>> {
        self.check_dim(xi)?;
        self.jacobian_impl(xi, Some(floor))
    }

    fn jacobian_impl(&self, xi: &[T], floor: Option<T>) -> Result<Matrix<T>> {
        let dim = self.dim();
        let p = self.p;
        let pm1 = p - T::one();
        let pm2 = p - T::of(2.0);
        let mut jac = Matrix::zeros(dim);
        match self.variant {
            Variant::Example1 => {
                for i in 0..dim {
                    jac[(i, i)] = pm1 * abs_pow(xi[i], pm2);
                }
            }
            Variant::Example2 => {
                jac[(0, 0)] = pm1 * abs_pow(xi[0], pm2);
                add_block_jacobian(xi, 1..dim, 1..dim, p, floor, &mut jac)?;
            }
            Variant::Example3 => {
                add_block_jacobian(xi, 0..dim, 0..dim, p, floor, &mut jac)?;
                let gain = self.example3_gain();
                for j in 0..dim {
                    let alpha_j = self.exponents[j];
                    if alpha_j.is_zero() {
                        continue;
                    }
                    let rest = (0..dim)
                        .filter(|&l| l != j)
                        .map(|l| abs_pow(xi[l], self.exponents[l]))
                        .fold(T::one(), |acc, v| acc * v);
                    if rest.is_zero() {
                        continue;
                    }
                    let dg = if xi[j].is_zero() {
                        if alpha_j > T::one() || floor.is_some() {
                            T::zero()
                        } else {
                            return Err(Error::NondifferentiablePoint(format!(
                                "ξ_{j} = 0 with exponent α_{j} = {alpha_j} ∈ (0, 1]"
                            )));
                        }
                    } else {
                        gain * alpha_j * xi[j].signum() * abs_pow(xi[j], alpha_j - T::one()) * rest
                    };
                    for i in 0..dim {
                        jac[(i, j)] = jac[(i, j)] + dg;
                    }
                }
            }
            Variant::Example4 => {
                let k = self.k;
                add_block_jacobian(xi, 0..k + 1, 0..dim, p, floor, &mut jac)?;
                add_block_jacobian(xi, k + 1..dim, k + 1..dim, p, floor, &mut jac)?;
            }
            Variant::Example4HighP => {
                let k = self.k;
                add_block_jacobian(xi, 0..k + 1, 0..k + 1, p, floor, &mut jac)?;
                add_block_jacobian(xi, 0..k + 1, 0..dim, self.r, floor, &mut jac)?;
                add_block_jacobian(xi, k + 1..dim, k + 1..dim, p, floor, &mut jac)?;
                add_block_jacobian(xi, k + 1..dim, k + 1..dim, self.r, floor, &mut jac)?;
            }
            Variant::Example5 => {
                let powers: Vec<T> = xi.iter().map(|&x| signed_pow(x, pm2)).collect();
                let product = powers.iter().fold(T::one(), |acc, &v| acc * v);
                let phi = bump_value(xi, self.bump_radius);
                let mut dphi = vec![T::zero(); dim];
                bump_gradient(xi, self.bump_radius, &mut dphi);
                for j in 0..dim {
                    let d_power = pm1 * abs_pow(xi[j], pm2);
                    let others = (0..dim)
                        .filter(|&l| l != j)
                        .fold(T::one(), |acc, l| acc * powers[l]);
                    let d_product = d_power * others;
                    for i in 0..dim {
                        let beta = self.bump_scales[i];
                        let mut entry = d_product * beta * phi + product * beta * dphi[j];
                        if i == j {
                            entry = entry + d_power;
                        }
                        jac[(i, j)] = entry;
                    }
                }
            }
        }
        if !jac.is_finite() {
            return Err(Error::NondifferentiablePoint(
                "Jacobian entry is not finite".into(),
            ));
        }
        Ok(jac)
    }
}

/// Central-difference Jacobian `(a_i(ξ + h e_j) − a_i(ξ − h e_j)) / (2h)`.
pub fn fd_jacobian<T: Real>(spec: &FamilySpec<T>, xi: &[T], h: T) -> Result<Matrix<T>> {
    spec.check_dim(xi)?;
    if !(h > T::zero() && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step h must be positive, got {h}")));
    }
    let dim = spec.dim();
    let mut jac = Matrix::zeros(dim);
    let mut shifted = xi.to_vec();
    let mut plus = vec![T::zero(); dim];
    let mut minus = vec![T::zero(); dim];
    for j in 0..dim {
        shifted[j] = xi[j] + h;
        spec.coefficients_into(&shifted, &mut plus);
        shifted[j] = xi[j] - h;
        spec.coefficients_into(&shifted, &mut minus);
        shifted[j] = xi[j];
        for i in 0..dim {
            jac[(i, j)] = (plus[i] - minus[i]) / (h + h);
        }
    }
    Ok(jac)
}
