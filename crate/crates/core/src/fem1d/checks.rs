use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{solve_elliptic, Assembler, DiscreteFunction, LoadSpec, Mesh1D, SolveConfig, DEFAULT_QUADRATURE_ORDER};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::linalg::dot;
use crate::sampling::{stream_rng, Stream};
use crate::scalar::{norm2, Real};

/// Redraws allowed when a pair happens to coincide.
const MAX_REDRAWS: usize = 16;

fn random_nodal<T: Real>(rng: &mut rand_chacha::ChaCha8Rng, len: usize) -> Vec<T> {
    let scale = 10f64.powf(rng.gen_range(-1.0..=1.0));
    (0..len).map(|_| T::of(scale * rng.gen_range(-1.0..=1.0))).collect()
}

/// Pair number `index`: even indices are independent draws, odd ones are
/// near-antithetic, `U₂ = −λU₁ (+ small noise on every other one)` with
/// `λ ∈ [1/2, 1]`. Odd operators attain their smallest quotient near `U₂ = −U₁`,
/// which independent draws almost never visit.
fn random_pair<T: Real>(rng: &mut rand_chacha::ChaCha8Rng, len: usize, index: u64) -> (Vec<T>, Vec<T>) {
    let u1: Vec<T> = random_nodal(rng, len);
    if index % 2 == 0 {
        return (u1, random_nodal(rng, len));
    }
    let lambda = T::of(rng.gen_range(0.5..=1.0));
    let noise = if index % 4 == 3 { 10f64.powf(rng.gen_range(-6.0..=-1.0)) } else { 0.0 };
    let u2 = u1
        .iter()
        .map(|&v| -lambda * v + T::of(noise * rng.gen_range(-1.0..=1.0)))
        .collect();
    (u1, u2)
}

/// Minimum over seeded nodal pairs of `⟨A(U₁) − A(U₂), U₁ − U₂⟩ / ‖U₁ − U₂‖^p`.
///
/// Each function gets its own magnitude scale `10^u`, `u ~ U(−1, 1)`, so the
/// scan covers small and large differences alike.
pub fn discrete_monotonicity_check<T: Real>(
    spec: &FamilySpec<T>,
    mesh: Mesh1D,
    pair_count: usize,
    seed: u64,
) -> Result<T> {
    if pair_count == 0 {
        return Err(Error::InvalidArgument("pair_count must be ≥ 1".into()));
    }
    let asm = Assembler::new(spec, mesh, DEFAULT_QUADRATURE_ORDER)?;
    let len = mesh.interior_count();
    let p = spec.p();
    (0..pair_count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, Stream::Nodal, i);
            for _ in 0..MAX_REDRAWS {
                let (u1, u2) = random_pair::<T>(&mut rng, len, i);
                let w: Vec<T> = u1.iter().zip(&u2).map(|(&a, &b)| a - b).collect();
                let denom = asm.wp_norm_pow(&w, p)?;
                if !(denom > T::zero()) {
                    continue;
                }
                let a1 = asm.apply_operator(&u1)?;
                let a2 = asm.apply_operator(&u2)?;
                let diff: Vec<T> = a1.iter().zip(&a2).map(|(&a, &b)| a - b).collect();
                return Ok(dot(&diff, &w) / denom);
            }
            Err(Error::CoincidentPoints)
        })
        .try_reduce(|| T::infinity(), |a, b| Ok(a.min(b)))
}

/// Both sides of `⟨F₁ − F₂, u₁ − u₂⟩ ≥ C_h‖u₁ − u₂‖^p` for two discrete solves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ContinuousDependence<T> {
    /// `⟨F₁ − F₂, u₁ − u₂⟩`.
    pub lhs: T,
    /// `C_h·‖u₁ − u₂‖^p`.
    pub rhs: T,
    /// `‖u₁ − u₂‖`.
    pub norm_diff: T,
    /// `(lhs / C_h)^{1/p}`.
    pub implied_bound: T,
    /// `(‖r₁‖ + ‖r₂‖)·‖u₁ − u₂‖` (Euclidean): what the solver residuals can shift `lhs` by.
    pub allowance: T,
    pub holds: bool,
}

/// Solves with both loads and compares the pairing of the load difference with
/// the monotonicity bound. `c_h` is normally a [`discrete_monotonicity_check`] minimum.
pub fn continuous_dependence_check<T: Real>(
    spec: &FamilySpec<T>,
    mesh: Mesh1D,
    load1: &LoadSpec<T>,
    load2: &LoadSpec<T>,
    cfg: &SolveConfig<T>,
    c_h: T,
) -> Result<ContinuousDependence<T>> {
    if !(c_h > T::zero()) {
        return Err(Error::InvalidArgument(format!("C_h must be > 0, got {c_h}")));
    }
    let asm = Assembler::new(spec, mesh, cfg.quadrature_order)?;
    let solve = |load: &LoadSpec<T>| -> Result<(DiscreteFunction<T>, Vec<T>, Vec<T>)> {
        let res = solve_elliptic(spec, mesh, load, cfg)?;
        if !res.converged {
            return Err(Error::NotConverged {
                iterations: res.iterations,
                residual: res.final_residual.to_f64_lossy(),
            });
        }
        let f = asm.load_vector(load)?;
        let r = asm.residual(res.solution.values(), &f)?;
        Ok((res.solution, f, r))
    };
    let (u1, f1, r1) = solve(load1)?;
    let (u2, f2, r2) = solve(load2)?;
    let w = u1.sub(&u2)?;
    let df: Vec<T> = f1.iter().zip(&f2).map(|(&a, &b)| a - b).collect();
    let p = spec.p();
    let lhs = dot(&df, w.values());
    let norm_pow = asm.wp_norm_pow(w.values(), p)?;
    let rhs = c_h * norm_pow;
    let allowance = (norm2(&r1) + norm2(&r2)) * norm2(w.values());
    Ok(ContinuousDependence {
        lhs,
        rhs,
        norm_diff: norm_pow.powf(T::one() / p),
        implied_bound: (lhs.max(T::zero()) / c_h).powf(T::one() / p),
        allowance,
        holds: lhs + allowance >= rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_case_has_unit_minimum() {
        let spec = FamilySpec::example1(2.0_f64, 1).unwrap();
        let min = discrete_monotonicity_check(&spec, Mesh1D::new(16).unwrap(), 200, 3).unwrap();
        assert!((min - 1.0).abs() <= 1e-9, "{min}");
    }

    #[test]
    fn p4_minimum_above_quarter() {
        let spec = FamilySpec::example1(4.0_f64, 1).unwrap();
        let min = discrete_monotonicity_check(&spec, Mesh1D::new(16).unwrap(), 1000, 11).unwrap();
        assert!(min >= 0.25 - 1e-8, "{min}");
    }

    #[test]
    fn check_is_seed_deterministic() {
        let spec = FamilySpec::example1(3.0_f64, 1).unwrap();
        let mesh = Mesh1D::new(8).unwrap();
        let a = discrete_monotonicity_check(&spec, mesh, 300, 5).unwrap();
        let b = discrete_monotonicity_check(&spec, mesh, 300, 5).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(discrete_monotonicity_check(&spec, mesh, 0, 5).is_err());
    }

    #[test]
    fn equal_loads_give_zero_sides() {
        let spec = FamilySpec::example1(3.0_f64, 1).unwrap();
        let load = LoadSpec::sine(1.0);
        let cd = continuous_dependence_check(&spec, Mesh1D::new(16).unwrap(), &load, &load, &SolveConfig::default(), 0.5)
            .unwrap();
        assert_eq!(cd.lhs, 0.0);
        assert_eq!(cd.rhs, 0.0);
        assert!(cd.holds);
    }

    #[test]
    fn scaled_sine_loads_hold_with_slack() {
        let spec = FamilySpec::example1(2.0_f64, 1).unwrap();
        let cd = continuous_dependence_check(
            &spec,
            Mesh1D::new(32).unwrap(),
            &LoadSpec::sine(1.0),
            &LoadSpec::sine(1.1),
            &SolveConfig::default(),
            1.0,
        )
        .unwrap();
        assert!(cd.lhs > 0.0 && cd.rhs > 0.0);
        // linear case: both sides are the same quadratic form
        assert!(cd.holds);
        assert!((cd.lhs - cd.rhs).abs() <= 1e-10 * cd.lhs);
        assert!(cd.allowance < 1e-8 * cd.lhs);
    }
}
