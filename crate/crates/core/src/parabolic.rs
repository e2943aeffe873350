//! Implicit Euler for `D_t u + A(u) = F` on the piecewise-linear space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::fem1d::{mass_matrix, newton, solve_elliptic, wp_norm, Assembler, DiscreteFunction, LoadSpec, SolveConfig};
use crate::scalar::Real;

/// Per-step slack allowed by the monotone-decay verdict.
pub const DECAY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Real")]
pub struct ParabolicConfig<T> {
    /// Final time `T`.
    pub horizon: T,
    /// Number of steps `M`; `τ = T/M`.
    pub steps: usize,
    pub initial_data: DiscreteFunction<T>,
    pub load: LoadSpec<T>,
    #[serde(default)]
    pub solver: SolveConfig<T>,
}

impl<T: Real> ParabolicConfig<T> {
    pub fn tau(&self) -> T {
        self.horizon / T::of_usize(self.steps)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > T::zero() && self.horizon.is_finite()) {
            return Err(Error::InvalidArgument(format!("horizon must be > 0, got {}", self.horizon)));
        }
        if self.steps == 0 {
            return Err(Error::InvalidArgument("steps must be ≥ 1".into()));
        }
        self.load.validate()?;
        self.solver.validate()
    }
}

/// One step: solves `M(U − U_prev)/τ + A(U) = F`, starting Newton from `U_prev`.
pub fn implicit_euler_step<T: Real>(
    spec: &FamilySpec<T>,
    prev: &DiscreteFunction<T>,
    load: &LoadSpec<T>,
    tau: T,
    cfg: &SolveConfig<T>,
) -> Result<DiscreteFunction<T>> {
    if !(tau > T::zero()) {
        return Err(Error::InvalidArgument(format!("time step must be > 0, got {tau}")));
    }
    cfg.validate()?;
    let mesh = prev.mesh();
    let asm = Assembler::new(spec, mesh, cfg.quadrature_order)?;
    let f = asm.load_vector(load)?;
    let mass = mass_matrix::<T>(mesh);
    let inv_tau = T::one() / tau;
    let m_prev = mass.mul_vec(prev.values());
    let out = newton(
        prev.values().to_vec(),
        |u| {
            let mut r = asm.residual(u, &f)?;
            let mu = mass.mul_vec(u);
            for ((ri, &a), &b) in r.iter_mut().zip(&mu).zip(&m_prev) {
                *ri = *ri + (a - b) * inv_tau;
            }
            Ok(r)
        },
        |u| Ok(asm.tangent(u)?.add_scaled(inv_tau, &mass)),
        cfg.tol_residual,
        cfg.max_iterations,
        cfg.damping_min,
    )?;
    if !out.converged {
        return Err(Error::NotConverged {
            iterations: out.iterations,
            residual: out.final_residual.to_f64_lossy(),
        });
    }
    DiscreteFunction::new(mesh, out.x)
}

/// Trajectory distances `d_m = ‖U_m − u_∞‖` for `m = 0..=M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DecaySeries<T> {
    pub tau: T,
    pub distances: Vec<T>,
    /// `d_{m+1} ≤ d_m + 1e−12` for every `m`.
    pub monotone: bool,
    #[serde(skip_serializing)]
    pub stationary: DiscreteFunction<T>,
    #[serde(skip_serializing)]
    pub final_state: DiscreteFunction<T>,
}

impl<T: Real> DecaySeries<T> {
    /// CSV with header `m,t,distance`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,t,distance\n");
        for (m, d) in self.distances.iter().enumerate() {
            let t = self.tau * T::of_usize(m);
            out.push_str(&format!("{m},{t},{d}\n"));
        }
        out
    }

    pub fn first(&self) -> T {
        self.distances[0]
    }

    pub fn last(&self) -> T {
        *self.distances.last().expect("series is never empty")
    }
}

/// Solves the stationary problem, then steps `M` times from the initial data.
pub fn stabilization_run<T: Real>(spec: &FamilySpec<T>, cfg: &ParabolicConfig<T>) -> Result<DecaySeries<T>> {
    cfg.validate()?;
    let mesh = cfg.initial_data.mesh();
    let stationary_cfg = SolveConfig {
        initial_guess: None,
        ..cfg.solver.clone()
    };
    let res = solve_elliptic(spec, mesh, &cfg.load, &stationary_cfg)?;
    if !res.converged {
        return Err(Error::NotConverged {
            iterations: res.iterations,
            residual: res.final_residual.to_f64_lossy(),
        });
    }
    let stationary = res.solution;
    let p = spec.p();
    let tau = cfg.tau();
    let mut u = cfg.initial_data.clone();
    let mut distances = Vec::with_capacity(cfg.steps + 1);
    distances.push(wp_norm(&u.sub(&stationary)?, p)?);
    for step in 1..=cfg.steps {
        u = implicit_euler_step(spec, &u, &cfg.load, tau, &cfg.solver).map_err(|e| Error::TimeStep {
            step,
            source: Box::new(e),
        })?;
        distances.push(wp_norm(&u.sub(&stationary)?, p)?);
    }
    let slack = T::of(DECAY_TOLERANCE);
    let monotone = distances.windows(2).all(|w| w[1] <= w[0] + slack);
    Ok(DecaySeries {
        tau,
        distances,
        monotone,
        stationary,
        final_state: u,
    })
}
