use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Right-hand side `f` of `⟨F, v⟩ = ∫ f v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields, bound = "T: Real")]
pub enum LoadSpec<T> {
    /// `A·sin(kπx)`.
    Sine { amplitude: T, frequency: T },
    Constant { value: T },
    /// `Σ c_i x^i`.
    Polynomial { coefficients: Vec<T> },
    /// Values on a uniform grid over `[0, 1]`, linearly interpolated.
    Tabulated { values: Vec<T> },
}

impl<T: Real> LoadSpec<T> {
    pub fn zero() -> Self {
        LoadSpec::Constant { value: T::zero() }
    }

    pub fn sine(amplitude: T) -> Self {
        LoadSpec::Sine {
            amplitude,
            frequency: T::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[T]| v.iter().all(|x| x.is_finite());
        let ok = match self {
            LoadSpec::Sine {
                amplitude,
                frequency,
            } => amplitude.is_finite() && frequency.is_finite(),
            LoadSpec::Constant { value } => value.is_finite(),
            LoadSpec::Polynomial { coefficients } => finite(coefficients),
            LoadSpec::Tabulated { values } => {
                if values.len() < 2 {
                    return Err(Error::InvalidArgument(
                        "tabulated load needs at least two values".into(),
                    ));
                }
                finite(values)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NonFinite("load parameter"))
        }
    }

    pub fn eval(&self, x: T) -> T {
        match self {
            LoadSpec::Sine {
                amplitude,
                frequency,
            } => *amplitude * (*frequency * T::of(std::f64::consts::PI) * x).sin(),
            LoadSpec::Constant { value } => *value,
            LoadSpec::Polynomial { coefficients } => coefficients
                .iter()
                .rev()
                .fold(T::zero(), |acc, &c| acc * x + c),
            LoadSpec::Tabulated { values } => {
                let intervals = values.len() - 1;
                let pos = (x.max(T::zero()).min(T::one())) * T::of_usize(intervals);
                let i = pos.floor().to_usize().unwrap_or(0).min(intervals - 1);
                let t = pos - T::of_usize(i);
                values[i] * (T::one() - t) + values[i + 1] * t
            }
        }
    }

    /// Pointwise linear combination `self + c·other`, tabulated on `samples + 1` points.
    pub fn combine(&self, c: T, other: &Self, samples: usize) -> Self {
        let values = (0..=samples)
            .map(|i| {
                let x = T::of_usize(i) / T::of_usize(samples);
                self.eval(x) + c * other.eval(x)
            })
            .collect();
        LoadSpec::Tabulated { values }
    }
}
