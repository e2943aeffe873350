//! Piecewise-linear Galerkin discretization on `(0, 1)` with zero boundary values.

mod assembly;
mod checks;
mod load;
mod manufactured;
mod quadrature;
mod random;
mod solver;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use assembly::{
    assemble_residual, assemble_tangent, mass_matrix, wp_norm, wp_norm_pow, Assembler,
    DEFAULT_QUADRATURE_ORDER, TANGENT_NORM_FLOOR,
};
pub use checks::{continuous_dependence_check, discrete_monotonicity_check, ContinuousDependence};
pub use load::LoadSpec;
pub use manufactured::{manufactured_rhs, ManufacturedSolution, DEFAULT_TABULATION};
pub use quadrature::GaussLegendre;
pub use random::{random_discrete_function, random_polynomial_load};
pub use solver::{solve_elliptic, SolveConfig, SolveResult};
pub(crate) use solver::newton;

/// Uniform partition of `(0, 1)` into `m ≥ 2` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Mesh1D {
    elements: usize,
}

impl Mesh1D {
    pub fn new(elements: usize) -> Result<Self> {
        if elements < 2 {
            return Err(Error::InvalidArgument(format!(
                "mesh needs at least 2 elements, got {elements}"
            )));
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn interior_count(&self) -> usize {
        self.elements - 1
    }

    pub fn h<T: Real>(&self) -> T {
        T::one() / T::of_usize(self.elements)
    }

    /// `x_j = j/m`, `j = 0..=m`.
    pub fn node<T: Real>(&self, j: usize) -> T {
        T::of_usize(j) / T::of_usize(self.elements)
    }
}

impl TryFrom<usize> for Mesh1D {
    type Error = Error;
    fn try_from(m: usize) -> Result<Self> {
        Mesh1D::new(m)
    }
}

impl From<Mesh1D> for usize {
    fn from(mesh: Mesh1D) -> usize {
        mesh.elements
    }
}

/// Continuous piecewise-linear function given by its interior nodal values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DiscreteFunction<T> {
    mesh: Mesh1D,
    values: Vec<T>,
}

impl<T: Real> DiscreteFunction<T> {
    pub fn new(mesh: Mesh1D, values: Vec<T>) -> Result<Self> {
        if values.len() != mesh.interior_count() {
            return Err(Error::DimensionMismatch {
                expected: mesh.interior_count(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("nodal value"));
        }
        Ok(Self { mesh, values })
    }

    pub fn zero(mesh: Mesh1D) -> Self {
        Self {
            mesh,
            values: vec![T::zero(); mesh.interior_count()],
        }
    }

    /// Nodal interpolant of `f` (boundary values are forced to zero).
    pub fn interpolate(mesh: Mesh1D, f: impl Fn(T) -> T) -> Self {
        let values = (1..mesh.elements()).map(|j| f(mesh.node(j))).collect();
        Self { mesh, values }
    }

    pub fn mesh(&self) -> Mesh1D {
        self.mesh
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// All `m + 1` nodal values including the zero boundary values.
    pub fn nodal_values(&self) -> Vec<T> {
        let mut all = Vec::with_capacity(self.mesh.elements() + 1);
        all.push(T::zero());
        all.extend_from_slice(&self.values);
        all.push(T::zero());
        all
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_mesh(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a - b).collect();
        Ok(Self {
            mesh: self.mesh,
            values,
        })
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            mesh: self.mesh,
            values: self.values.iter().map(|&v| c * v).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.same_mesh(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs())))
    }

    fn same_mesh(&self, other: &Self) -> Result<()> {
        if self.mesh != other.mesh {
            return Err(Error::DimensionMismatch {
                expected: self.mesh.elements(),
                got: other.mesh.elements(),
            });
        }
        Ok(())
    }

    /// CSV with header `x,u` and one row per node.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,u\n");
        for (j, u) in self.nodal_values().iter().enumerate() {
            let x: T = self.mesh.node(j);
            out.push_str(&format!("{x},{u}\n"));
        }
        out
    }
}
