use serde::{Deserialize, Serialize};

use super::{Assembler, DiscreteFunction, LoadSpec, Mesh1D, DEFAULT_QUADRATURE_ORDER};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::linalg::Tridiagonal;
use crate::scalar::{max_abs, norm2, Real};

/// Maximum number of regularization escalations per Newton step.
const MAX_REGULARIZATIONS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Real")]
pub struct SolveConfig<T> {
    pub tol_residual: T,
    pub max_iterations: usize,
    pub damping_min: T,
    pub quadrature_order: usize,
    /// Nodal start values; zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_guess: Option<DiscreteFunction<T>>,
}

impl<T: Real> Default for SolveConfig<T> {
    fn default() -> Self {
        Self {
            tol_residual: T::of(1e-10),
            max_iterations: 200,
            damping_min: T::of(1e-4),
            quadrature_order: DEFAULT_QUADRATURE_ORDER,
            initial_guess: None,
        }
    }
}

impl<T: Real> SolveConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_residual > T::zero()) {
            return Err(Error::InvalidArgument("tol_residual must be > 0".into()));
        }
        if !(self.damping_min > T::zero() && self.damping_min <= T::one()) {
            return Err(Error::InvalidArgument("damping_min must lie in (0, 1]".into()));
        }
        if self.quadrature_order < 2 {
            return Err(Error::InvalidArgument("quadrature_order must be ≥ 2".into()));
        }
        Ok(())
    }

    pub fn with_initial_guess(self, guess: DiscreteFunction<T>) -> Self {
        Self {
            initial_guess: Some(guess),
            ..self
        }
    }
}

/// Outcome of a nonlinear solve. `residual_history` holds Euclidean residual
/// norms, the first entry at the initial guess.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SolveResult<T> {
    #[serde(skip_serializing)]
    pub solution: DiscreteFunction<T>,
    pub iterations: usize,
    pub residual_history: Vec<T>,
    pub converged: bool,
    /// Max-norm of the final residual.
    pub final_residual: T,
}

impl<T: Real> SolveResult<T> {
    /// JSON with `iterations`, `residual_history`, `converged`, `final_residual`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solve result serializes")
    }
}

pub(crate) struct NewtonOutcome<T> {
    pub x: Vec<T>,
    pub iterations: usize,
    pub history: Vec<T>,
    pub converged: bool,
    pub final_residual: T,
}

/// Damped Newton iteration on `residual(x) = 0`.
///
/// Each step solves `tangent·s = −residual` and halves the step until the
/// Euclidean residual norm decreases, down to `damping_min`. When no damping
/// factor gives a decrease, `μ·I` is added to the tangent, starting at
/// `1e−12·(1 + ‖K‖_∞)` and growing a hundredfold per retry. A tangent whose
/// elimination fails gets the same treatment.
pub(crate) fn newton<T, R, K>(
    x0: Vec<T>,
    residual: R,
    tangent: K,
    tol: T,
    max_iterations: usize,
    damping_min: T,
) -> Result<NewtonOutcome<T>>
where
    T: Real,
    R: Fn(&[T]) -> Result<Vec<T>>,
    K: Fn(&[T]) -> Result<Tridiagonal<T>>,
{
    let mut x = x0;
    let mut r = residual(&x)?;
    let mut r_norm = norm2(&r);
    let mut history = vec![r_norm];
    let mut iterations = 0;
    let half = T::of(0.5);
    while max_abs(&r) > tol {
        if iterations == max_iterations {
            return Ok(NewtonOutcome {
                final_residual: max_abs(&r),
                x,
                iterations,
                history,
                converged: false,
            });
        }
        let k = tangent(&x)?;
        let neg_r: Vec<T> = r.iter().map(|&v| -v).collect();
        let base_shift = T::of(1e-12) * (T::one() + k.norm_inf());
        let mut shift = T::zero();
        let mut accepted = None;
        for _ in 0..=MAX_REGULARIZATIONS {
            let step = if shift.is_zero() {
                k.solve(&neg_r)
            } else {
                let mut shifted = k.clone();
                shifted.add_to_diagonal(shift);
                shifted.solve(&neg_r)
            };
            if let Ok(step) = step {
                let mut lambda = T::one();
                while lambda >= damping_min {
                    let trial: Vec<T> = x.iter().zip(&step).map(|(&xi, &si)| xi + lambda * si).collect();
                    let r_trial = residual(&trial)?;
                    let n_trial = norm2(&r_trial);
                    if n_trial < r_norm {
                        accepted = Some((trial, r_trial, n_trial));
                        break;
                    }
                    lambda = lambda * half;
                }
            }
            if accepted.is_some() {
                break;
            }
            shift = if shift.is_zero() {
                base_shift
            } else {
                shift * T::of(100.0)
            };
        }
        match accepted {
            Some((trial, r_trial, n_trial)) => {
                x = trial;
                r = r_trial;
                r_norm = n_trial;
                history.push(r_norm);
                iterations += 1;
            }
            None => {
                // stagnated: no damped or regularized step reduces the residual
                return Ok(NewtonOutcome {
                    final_residual: max_abs(&r),
                    x,
                    iterations,
                    history,
                    converged: false,
                });
            }
        }
    }
    Ok(NewtonOutcome {
        final_residual: max_abs(&r),
        x,
        iterations,
        history,
        converged: true,
    })
}

/// Solves the Galerkin system `A(U) = F` by damped Newton iteration.
pub fn solve_elliptic<T: Real>(
    spec: &FamilySpec<T>,
    mesh: Mesh1D,
    load: &LoadSpec<T>,
    cfg: &SolveConfig<T>,
) -> Result<SolveResult<T>> {
    cfg.validate()?;
    let asm = Assembler::new(spec, mesh, cfg.quadrature_order)?;
    let f = asm.load_vector(load)?;
    let x0 = match &cfg.initial_guess {
        Some(g) => {
            if g.mesh() != mesh {
                return Err(Error::DimensionMismatch {
                    expected: mesh.elements(),
                    got: g.mesh().elements(),
                });
            }
            g.values().to_vec()
        }
        None => vec![T::zero(); mesh.interior_count()],
    };
    let out = newton(
        x0,
        |x| asm.residual(x, &f),
        |x| asm.tangent(x),
        cfg.tol_residual,
        cfg.max_iterations,
        cfg.damping_min,
    )?;
    Ok(SolveResult {
        solution: DiscreteFunction::new(mesh, out.x)?,
        iterations: out.iterations,
        residual_history: out.history,
        converged: out.converged,
        final_residual: out.final_residual,
    })
}
