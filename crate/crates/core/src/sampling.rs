//! Seeded sampling of admissible points.
//!
//! Every sample draws from its own ChaCha stream keyed by `(seed, purpose,
//! index)`, so scans give the same answer under any parallel schedule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DEFAULT_BOX_RADIUS: f64 = 10.0;
pub const DEFAULT_EXCLUSION: f64 = 1e-3;
pub const DEFAULT_DELTA_COUNT: usize = 10_000;
pub const DEFAULT_PAIR_COUNT: usize = 100_000;

/// Samples live in `[−R_box, R_box]^{n+1}` with every `|ξ_i| ≥ η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    #[serde(default = "default_box")]
    pub box_radius: f64,
    #[serde(default = "default_exclusion")]
    pub exclusion: f64,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_box() -> f64 {
    DEFAULT_BOX_RADIUS
}
fn default_exclusion() -> f64 {
    DEFAULT_EXCLUSION
}
fn default_count() -> usize {
    DEFAULT_DELTA_COUNT
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            box_radius: DEFAULT_BOX_RADIUS,
            exclusion: DEFAULT_EXCLUSION,
            count: DEFAULT_DELTA_COUNT,
            seed: 0,
        }
    }
}

impl SampleConfig {
    pub fn new(box_radius: f64, exclusion: f64, count: usize, seed: u64) -> Self {
        Self {
            box_radius,
            exclusion,
            count,
            seed,
        }
    }

    pub fn with_count(self, count: usize) -> Self {
        Self { count, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 1 {
            return Err(Error::InvalidArgument("sample count must be ≥ 1".into()));
        }
        if !(self.box_radius.is_finite() && self.box_radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "box_radius must be > 0, got {}",
                self.box_radius
            )));
        }
        if !(self.exclusion >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "exclusion must be ≥ 0, got {}",
                self.exclusion
            )));
        }
        if self.exclusion >= self.box_radius {
            return Err(Error::NoAdmissibleSamples(format!(
                "exclusion η = {} must be smaller than box_radius = {}",
                self.exclusion, self.box_radius
            )));
        }
        Ok(())
    }

    /// Uniform draw from the admissible set `{η ≤ |ξ_i| ≤ R_box}`.
    pub(crate) fn draw_point<T: Real>(&self, rng: &mut ChaCha8Rng, dim: usize) -> Vec<T> {
        (0..dim)
            .map(|_| {
                let magnitude = rng.gen_range(self.exclusion..=self.box_radius);
                let v = if rng.gen::<bool>() { magnitude } else { -magnitude };
                T::of(v)
            })
            .collect()
    }
}

/// Purpose tags keep the streams of different scans disjoint.
#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub(crate) enum Stream {
    Delta = 1,
    Pairs = 2,
    Growth = 3,
    Nodal = 4,
    Loads = 5,
    Initial = 6,
}

pub(crate) fn stream_rng(seed: u64, purpose: Stream, index: u64) -> ChaCha8Rng {
    let key = seed ^ (purpose as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(index);
    rng
}
