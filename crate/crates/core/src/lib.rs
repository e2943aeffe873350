//! Verification toolkit for uniformly monotone divergence-form operators.
//!
//! The crate is generic over the scalar type ([`Real`], implemented for `f32`
//! and `f64`); the `…F64`/`…F32` aliases below fix the common choices.

pub mod error;
pub mod families;
pub mod fem1d;
pub mod inequality;
pub mod linalg;
pub mod parabolic;
pub mod sampling;
pub mod scalar;
pub mod verifier;

pub use error::{Error, Result};
pub use families::{FamilySpec, PointXi, RawFamilySpec, Variant};
pub use inequality::LemmaInput;
pub use fem1d::{DiscreteFunction, LoadSpec, Mesh1D, SolveConfig, SolveResult};
pub use linalg::{Matrix, Tridiagonal};
pub use parabolic::{DecaySeries, ParabolicConfig};
pub use sampling::SampleConfig;
pub use scalar::Real;
pub use verifier::MonotonicityReport;

pub type FamilySpecF64 = FamilySpec<f64>;
pub type FamilySpecF32 = FamilySpec<f32>;
pub type PointXiF64 = PointXi<f64>;
pub type JacobianMatrixF64 = Matrix<f64>;
pub type LemmaInputF64 = LemmaInput<f64>;
pub type MonotonicityReportF64 = MonotonicityReport<f64>;
pub type DiscreteFunctionF64 = DiscreteFunction<f64>;
pub type LoadSpecF64 = LoadSpec<f64>;
pub type SolveConfigF64 = SolveConfig<f64>;
pub type SolveResultF64 = SolveResult<f64>;
pub type ParabolicConfigF64 = ParabolicConfig<f64>;
pub type DecaySeriesF64 = DecaySeries<f64>;
