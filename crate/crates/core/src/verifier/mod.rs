//! Sampled certification of the pointwise modulus, the monotonicity quotient
//! and the growth bound for a coefficient family.

mod eigen;
mod report;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::linalg::Matrix;
use crate::sampling::{stream_rng, SampleConfig, Stream};
use crate::scalar::{abs_pow, lp_pow_sum, norm2, Real};

pub use eigen::smallest_eigenvalue_sym;
pub use report::{MonotonicityReport, ScanCounts, Verdict, Verdicts, REPORT_CSV_HEADER};

/// Slack allowed when comparing the sampled quotient minimum with `C`.
pub const A3_TOLERANCE: f64 = 1e-10;

/// `C = δ / (2^{p−2}(p − 1))`.
pub fn theoretical_c<T: Real>(delta: T, p: T) -> Result<T> {
    if !(delta > T::zero()) {
        return Err(Error::InvalidArgument(format!("delta must be > 0, got {delta}")));
    }
    if !(p >= T::of(2.0)) {
        return Err(Error::InvalidArgument(format!("p must be ≥ 2, got {p}")));
    }
    Ok(delta / (T::of(2.0).powf(p - T::of(2.0)) * (p - T::one())))
}

/// Largest `δ` with `sym(J(ξ)) − δ·diag(|ξ_i|^{p−2}) ⪰ 0`, i.e. the smallest
/// eigenvalue of `D^{−1/2} sym(J) D^{−1/2}`.
pub fn delta_at_point<T: Real>(spec: &FamilySpec<T>, xi: &[T]) -> Result<T> {
    let jac = spec.eval_jacobian(xi)?;
    let pm2 = spec.p() - T::of(2.0);
    let scale: Vec<T> = xi
        .iter()
        .map(|&x| {
            let d = abs_pow(x, pm2);
            if d > T::zero() {
                Ok(T::one() / d.sqrt())
            } else {
                Err(Error::InvalidArgument(
                    "delta_at_point needs every |ξ_i| > 0".into(),
                ))
            }
        })
        .collect::<Result<_>>()?;
    let sym = jac.symmetric_part();
    let dim = spec.dim();
    let mut scaled = Matrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            scaled[(i, j)] = scale[i] * sym[(i, j)] * scale[j];
        }
    }
    smallest_eigenvalue_sym(&scaled)
}

fn min_reduce<T: Real>(values: impl ParallelIterator<Item = Result<T>>) -> Result<T> {
    values.try_reduce(|| T::infinity(), |a, b| Ok(a.min(b)))
}

fn max_reduce<T: Real>(values: impl ParallelIterator<Item = Result<T>>) -> Result<T> {
    values.try_reduce(|| T::neg_infinity(), |a, b| Ok(a.max(b)))
}

fn finite<T: Real>(v: T, what: &'static str) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Infimum of [`delta_at_point`] over `cfg.count` seeded admissible samples.
pub fn delta_scan<T: Real>(spec: &FamilySpec<T>, cfg: &SampleConfig) -> Result<T> {
    cfg.validate()?;
    let dim = spec.dim();
    min_reduce((0..cfg.count as u64).into_par_iter().map(|i| {
        let mut rng = stream_rng(cfg.seed, Stream::Delta, i);
        let xi: Vec<T> = cfg.draw_point(&mut rng, dim);
        finite(delta_at_point(spec, &xi)?, "delta")
    }))
}

/// `Σ_i (a_i(ξ) − a_i(ξ̃))(ξ_i − ξ̃_i) / Σ_i |ξ_i − ξ̃_i|^p`.
pub fn monotone_gap_ratio<T: Real>(spec: &FamilySpec<T>, xi: &[T], xi2: &[T]) -> Result<T> {
    let a = spec.eval_coefficients(xi)?;
    let b = spec.eval_coefficients(xi2)?;
    let diff: Vec<T> = xi.iter().zip(xi2).map(|(&x, &y)| x - y).collect();
    let denom = lp_pow_sum(&diff, spec.p());
    if denom.is_zero() {
        return Err(Error::CoincidentPoints);
    }
    let numer: T = a
        .iter()
        .zip(&b)
        .zip(&diff)
        .map(|((&ai, &bi), &d)| (ai - bi) * d)
        .sum();
    Ok(numer / denom)
}

/// `max_{samples, i} |a_i(ξ)| / |ξ|^{p−1}`.
pub fn growth_scan<T: Real>(spec: &FamilySpec<T>, cfg: &SampleConfig) -> Result<T> {
    cfg.validate()?;
    let dim = spec.dim();
    let pm1 = spec.p() - T::one();
    let floor = T::min_positive_value().max(T::of(1e-300));
    max_reduce((0..cfg.count as u64).into_par_iter().map(|i| {
        let mut rng = stream_rng(cfg.seed, Stream::Growth, i);
        let xi: Vec<T> = cfg.draw_point(&mut rng, dim);
        let a = spec.eval_coefficients(&xi)?;
        let denom = abs_pow(norm2(&xi), pm1).max(floor);
        Ok(a.iter().fold(T::zero(), |m, &v| m.max(v.abs())) / denom)
    }))
}

/// Minimum of [`monotone_gap_ratio`] over `cfg.count` seeded pairs.
pub fn a3_min_scan<T: Real>(spec: &FamilySpec<T>, cfg: &SampleConfig) -> Result<T> {
    cfg.validate()?;
    let dim = spec.dim();
    min_reduce((0..cfg.count as u64).into_par_iter().map(|i| {
        let mut rng = stream_rng(cfg.seed, Stream::Pairs, i);
        let xi: Vec<T> = cfg.draw_point(&mut rng, dim);
        let xi2: Vec<T> = cfg.draw_point(&mut rng, dim);
        match monotone_gap_ratio(spec, &xi, &xi2) {
            Err(Error::CoincidentPoints) => Ok(T::infinity()),
            other => finite(other?, "A3 quotient"),
        }
    }))
}

/// Full report with one configuration for every scan: δ over `cfg.count`
/// points, the quotient over `cfg.count` pairs, growth over `cfg.count` points.
pub fn a3_scan<T: Real>(spec: &FamilySpec<T>, cfg: &SampleConfig) -> Result<MonotonicityReport<T>> {
    certify(spec, cfg, cfg)
}

/// Full report with separate sizes for the point scans (`point_cfg`) and the
/// pair scan (`pair_cfg`).
pub fn certify<T: Real>(
    spec: &FamilySpec<T>,
    point_cfg: &SampleConfig,
    pair_cfg: &SampleConfig,
) -> Result<MonotonicityReport<T>> {
    let delta_inf = delta_scan(spec, point_cfg)?;
    let empirical = a3_min_scan(spec, pair_cfg)?;
    let growth_c = growth_scan(spec, point_cfg)?;
    let p = spec.p();
    let theoretical = theoretical_c(delta_inf, p).unwrap_or_else(|_| T::zero());
    let delta_ok = delta_inf > T::zero();
    Ok(MonotonicityReport {
        family: spec.variant(),
        p,
        n: spec.n(),
        delta_inf,
        theoretical_c: theoretical,
        empirical_a3_min: empirical,
        growth_c,
        q: p / (p - T::one()),
        verdicts: Verdicts {
            delta: Verdict::from_bool(delta_ok),
            a3: Verdict::from_bool(delta_ok && empirical >= theoretical - T::of(A3_TOLERANCE)),
            growth: Verdict::from_bool(growth_c.is_finite()),
        },
        seed: pair_cfg.seed,
        counts: ScanCounts {
            delta_samples: point_cfg.count,
            a3_pairs: pair_cfg.count,
            growth_samples: point_cfg.count,
        },
        sample: *pair_cfg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theoretical_constant_values() {
        assert_eq!(theoretical_c(1.0_f64, 2.0).unwrap(), 1.0);
        assert!((theoretical_c(1.0_f64, 4.0).unwrap() - 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(theoretical_c(2.0_f64, 3.0).unwrap(), 0.5);
        assert!(theoretical_c(0.0_f64, 3.0).is_err());
        assert!(theoretical_c(-1.0_f64, 3.0).is_err());
    }

    #[test]
    fn example1_delta_is_p_minus_one() {
        for &p in &[2.0_f64, 2.5, 3.0, 4.0] {
            let spec = FamilySpec::example1(p, 2).unwrap();
            let d = delta_at_point(&spec, &[0.3, -2.0, 5.0]).unwrap();
            assert!((d - (p - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_needs_nonzero_components() {
        let spec = FamilySpec::example1(3.0_f64, 1).unwrap();
        assert!(delta_at_point(&spec, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn gap_ratio_single_coordinate_hand_value() {
        // p = 4: a(1) = 1, a(−1) = −1, numerator 2·2 = 4, |Δ|^4 = 16
        let spec = FamilySpec::example1(4.0_f64, 1).unwrap();
        let r = monotone_gap_ratio(&spec, &[1.0, 0.0], &[-1.0, 0.0]).unwrap();
        let brute = ((1.0_f64.powi(3) - (-1.0_f64).powi(3)) * 2.0) / 2.0_f64.powi(4);
        assert_eq!(r, brute);
        assert_eq!(r, 0.25);
    }

    #[test]
    fn gap_ratio_rejects_coincident_points() {
        let spec = FamilySpec::example1(3.0_f64, 1).unwrap();
        assert_eq!(
            monotone_gap_ratio(&spec, &[1.0, 2.0], &[1.0, 2.0]),
            Err(Error::CoincidentPoints)
        );
    }

    #[test]
    fn report_is_consistent() {
        let spec = FamilySpec::example1(2.0_f64, 1).unwrap();
        let cfg = SampleConfig::default().with_count(500);
        let rep = a3_scan(&spec, &cfg).unwrap();
        assert!((rep.empirical_a3_min - 1.0).abs() < 1e-12);
        assert!((rep.theoretical_c - 1.0).abs() < 1e-12);
        assert!(rep.passed());
        assert_eq!(rep.q, 2.0);
        let json = serde_json::to_value(&rep).unwrap();
        for key in ["family", "p", "n", "delta_inf", "theoretical_C", "empirical_A3_min", "growth_c", "verdicts", "seed", "counts"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["verdicts"]["a3"], "certified-on-sample");
        assert_eq!(rep.to_csv().lines().count(), 2);
    }
}
