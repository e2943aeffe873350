use serde::{Deserialize, Serialize};

use crate::families::Variant;
use crate::sampling::SampleConfig;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Holds on every sampled point; not a proof.
    CertifiedOnSample,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::CertifiedOnSample
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::CertifiedOnSample
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::CertifiedOnSample => "certified-on-sample",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    /// `delta_inf > 0`.
    pub delta: Verdict,
    /// `empirical_A3_min ≥ theoretical_C − 1e−10`.
    pub a3: Verdict,
    /// Growth constant is finite.
    pub growth: Verdict,
}

impl Verdicts {
    pub fn all_passed(&self) -> bool {
        self.delta.passed() && self.a3.passed() && self.growth.passed()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCounts {
    pub delta_samples: usize,
    pub a3_pairs: usize,
    pub growth_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct MonotonicityReport<T> {
    pub family: Variant,
    pub p: T,
    pub n: usize,
    pub delta_inf: T,
    #[serde(rename = "theoretical_C")]
    pub theoretical_c: T,
    #[serde(rename = "empirical_A3_min")]
    pub empirical_a3_min: T,
    pub growth_c: T,
    /// Conjugate exponent `p/(p − 1)`.
    pub q: T,
    pub verdicts: Verdicts,
    pub seed: u64,
    pub counts: ScanCounts,
    pub sample: SampleConfig,
}

pub const REPORT_CSV_HEADER: &str =
    "family,p,n,delta_inf,theoretical_C,empirical_A3_min,growth_c,q,delta_verdict,a3_verdict,growth_verdict,seed,delta_samples,a3_pairs,growth_samples";

impl<T: Real> MonotonicityReport<T> {
    pub fn passed(&self) -> bool {
        self.verdicts.all_passed()
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.family,
            self.p,
            self.n,
            self.delta_inf,
            self.theoretical_c,
            self.empirical_a3_min,
            self.growth_c,
            self.q,
            self.verdicts.delta.label(),
            self.verdicts.a3.label(),
            self.verdicts.growth.label(),
            self.seed,
            self.counts.delta_samples,
            self.counts.a3_pairs,
            self.counts.growth_samples,
        )
    }

    /// Header line plus one data line.
    pub fn to_csv(&self) -> String {
        format!("{REPORT_CSV_HEADER}\n{}\n", self.csv_row())
    }
}
