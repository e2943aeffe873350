use rand::Rng;

use super::{DiscreteFunction, LoadSpec, Mesh1D};
use crate::sampling::{stream_rng, Stream};
use crate::scalar::Real;

/// Seeded nodal values, uniform in `[−amplitude, amplitude]`.
pub fn random_discrete_function<T: Real>(mesh: Mesh1D, amplitude: f64, seed: u64, index: u64) -> DiscreteFunction<T> {
    let mut rng = stream_rng(seed, Stream::Initial, index);
    let values = (0..mesh.interior_count())
        .map(|_| T::of(amplitude * rng.gen_range(-1.0..=1.0)))
        .collect();
    DiscreteFunction::new(mesh, values).expect("finite draws on the right mesh")
}

/// Seeded cubic load `Σ c_k x^k` with coefficients uniform in `[−amplitude, amplitude]`.
pub fn random_polynomial_load<T: Real>(amplitude: f64, seed: u64, index: u64) -> LoadSpec<T> {
    let mut rng = stream_rng(seed, Stream::Loads, index);
    LoadSpec::Polynomial {
        coefficients: (0..4).map(|_| T::of(amplitude * rng.gen_range(-1.0..=1.0))).collect(),
    }
}
