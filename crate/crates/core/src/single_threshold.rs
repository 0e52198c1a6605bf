//! Fixed-threshold policies: accept the first X_i ≤ T for i < n, accept
//! X_n unconditionally.
//!
//! The recommended threshold
//!
//! ```text
//! T(n, d₁, a₁) = (ln(n / ln n) / (d₁ a₁ (n−1)))^{1/d₁}
//! ```
//!
//! yields a Θ((ln n)^{1/d₁}) competitive ratio — the best any single
//! threshold can do up to constants, in contrast to the multi-threshold
//! policy's constant λ(d₁).

use crate::distributions::{DistributionSpec, PuiseuxHead};
use crate::error::{Error, Result};
use crate::prophet::prophet_cost_auto;
use crate::quadrature::QuadratureConfig;
use crate::stopping::truncated_mean;

/// A single-threshold policy evaluated at one horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleThresholdReport {
    pub n: u64,
    pub threshold: f64,
    pub expected_cost: f64,
    pub prophet_cost: f64,
    pub ratio: f64,
}

/// The display-formula threshold, natural logarithms throughout.
/// Requires n ≥ 3 so the inner logarithm is positive.
pub fn recommended_threshold(head: &PuiseuxHead, n: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "recommended_threshold requires n >= 3 so that ln(n/ln n) > 0, got {n}"
        )));
    }
    let nf = n as f64;
    Ok(((nf / nf.ln()).ln() / (head.d1() * head.a1() * (nf - 1.0))).powf(1.0 / head.d1()))
}

/// Exact expected cost of the policy:
/// `(1 − (1−F(T))^{n−1})·E[X | X ≤ T] + (1−F(T))^{n−1}·E[X]`.
///
/// T at or below the support bottom degenerates to never accepting early
/// (cost = mean), T = +∞ to always accepting the first draw (also mean).
pub fn single_threshold_cost(
    spec: &DistributionSpec,
    t: f64,
    n: u64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain(
            "single_threshold_cost requires n >= 1".into(),
        ));
    }
    if !spec.has_finite_mean() {
        return Err(Error::InfiniteMean(format!(
            "{} has no finite mean",
            spec.name()
        )));
    }
    let mean = spec.mean();
    if n == 1 || t <= spec.support_low() || spec.cdf(t) <= 0.0 {
        return Ok(mean);
    }
    let skip_all = spec.survival_pow(t, (n - 1) as f64);
    Ok((1.0 - skip_all) * truncated_mean(spec, t, cfg)? + skip_all * mean)
}

/// Evaluates the recommended threshold across horizons.
pub fn single_threshold_curve(
    spec: &DistributionSpec,
    n_values: &[u64],
    cfg: &QuadratureConfig,
) -> Result<Vec<SingleThresholdReport>> {
    let head = spec
        .puiseux_head()
        .ok_or_else(|| Error::MissingHead(format!("{} carries no Puiseux head", spec.name())))?;
    n_values
        .iter()
        .map(|&n| {
            let t = recommended_threshold(&head, n)?;
            let cost = single_threshold_cost(spec, t, n, cfg)?;
            let (beta, _) = prophet_cost_auto(spec, n, cfg)?;
            Ok(SingleThresholdReport {
                n,
                threshold: t,
                expected_cost: cost,
                prophet_cost: beta,
                ratio: cost / beta,
            })
        })
        .collect()
}

/// Numerically best single threshold: golden-section search over
/// [support_low, quantile(1 − 1/n²)], validated against a 1000-point grid
/// scan (golden section assumes unimodality, which is unproven; on
/// disagreement beyond 1e-6 the grid minimum wins).
pub fn best_single_threshold(
    spec: &DistributionSpec,
    n: u64,
    cfg: &QuadratureConfig,
) -> Result<SingleThresholdReport> {
    if n == 0 {
        return Err(Error::Domain(
            "best_single_threshold requires n >= 1".into(),
        ));
    }
    if !spec.has_finite_mean() {
        return Err(Error::InfiniteMean(format!(
            "{} has no finite mean",
            spec.name()
        )));
    }
    let lo = spec.support_low();
    let nf = n as f64;
    let hi = spec
        .quantile(1.0 - 1.0 / (nf * nf))?
        .min(spec.support_high());
    let cost_at = |t: f64| single_threshold_cost(spec, t, n, cfg);

    let (mut best_t, mut best_cost) = if hi > lo {
        let golden = golden_section_min(&cost_at, lo, hi, 1e-8)?;
        let grid = grid_scan_min(&cost_at, lo, hi, 1000)?;
        if golden.1 > grid.1 * (1.0 + 1e-6) {
            grid
        } else {
            golden
        }
    } else {
        (lo, cost_at(lo)?)
    };

    // The minimizer must dominate the display formula's point when that
    // point is defined.
    if n >= 3 {
        if let Some(head) = spec.puiseux_head() {
            let t_rec = recommended_threshold(&head, n)?;
            let c_rec = cost_at(t_rec)?;
            if c_rec < best_cost {
                best_t = t_rec;
                best_cost = c_rec;
            }
        }
    }

    let (beta, _) = prophet_cost_auto(spec, n, cfg)?;
    Ok(SingleThresholdReport {
        n,
        threshold: best_t,
        expected_cost: best_cost,
        prophet_cost: beta,
        ratio: best_cost / beta,
    })
}

fn golden_section_min(
    f: &dyn Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        if (b - a).abs() <= rel_tol * (a.abs() + b.abs()).max(1e-12) {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    Ok((mid, f(mid)?))
}

fn grid_scan_min(
    f: &dyn Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<(f64, f64)> {
    let mut best = (lo, f(lo)?);
    for j in 1..=points {
        let t = lo + (hi - lo) * j as f64 / points as f64;
        let v = f(t)?;
        if v < best.1 {
            best = (t, v);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DistributionSpec;

    const CFG: QuadratureConfig = QuadratureConfig {
        rel_tolerance: 1e-10,
        max_subdivisions: 60,
        tail_cutoff_mass: 1e-12,
    };

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn recommended_threshold_values() {
        // Frozen from direct high-precision evaluation of the display formula.
        let h1 = PuiseuxHead::new(1.0, 1.0).unwrap();
        assert!(
            rel(
                recommended_threshold(&h1, 100).unwrap(),
                0.031_090_813_739_193_84
            ) < 1e-12
        );
        let h2 = PuiseuxHead::new(1.0, 2.0).unwrap();
        assert!(
            rel(
                recommended_threshold(&h2, 100).unwrap(),
                0.124_681_220_998_179_69
            ) < 1e-12
        );
        // a₁ scales linearly inside the log-free factor.
        let h3 = PuiseuxHead::new(2.0, 1.0).unwrap();
        assert!(
            rel(
                recommended_threshold(&h3, 100).unwrap(),
                0.5 * recommended_threshold(&h1, 100).unwrap()
            ) < 1e-15
        );
        assert!(recommended_threshold(&h1, 2).is_err());
    }

    #[test]
    fn threshold_decreasing_in_n() {
        let head = PuiseuxHead::new(1.0, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for n in [10u64, 100, 1_000, 10_000, 100_000] {
            let t = recommended_threshold(&head, n).unwrap();
            assert!(t < prev);
            prev = t;
        }
    }

    #[test]
    fn degenerate_thresholds_cost_the_mean() {
        let spec = DistributionSpec::exponential();
        assert_eq!(
            single_threshold_cost(&spec, f64::INFINITY, 7, &CFG).unwrap(),
            1.0
        );
        assert_eq!(single_threshold_cost(&spec, 0.0, 7, &CFG).unwrap(), 1.0);
        assert_eq!(single_threshold_cost(&spec, 5.0, 1, &CFG).unwrap(), 1.0);
    }

    #[test]
    fn cost_between_prophet_and_mean() {
        let spec = DistributionSpec::exponential();
        for &t in &[0.01, 0.1, 0.5, 1.0, 3.0] {
            let c = single_threshold_cost(&spec, t, 10, &CFG).unwrap();
            assert!(c <= 1.0 + 1e-12);
            assert!(c >= 0.1 - 1e-12); // >= beta_10
        }
    }

    #[test]
    fn best_threshold_at_n2_is_the_mean() {
        // For n = 2 the single-threshold and optimal policies coincide,
        // so the best T is G(1) = E[X].
        let spec = DistributionSpec::exponential();
        let rep = best_single_threshold(&spec, 2, &CFG).unwrap();
        assert!(rel(rep.threshold, 1.0) < 1e-6);
        assert!(rel(rep.expected_cost, 0.632_120_558_828_557_7) < 1e-9);
    }

    #[test]
    fn best_threshold_dominates_recommended() {
        let spec = DistributionSpec::exponential();
        let best = best_single_threshold(&spec, 1000, &CFG).unwrap();
        let rec = single_threshold_curve(&spec, &[1000], &CFG).unwrap()[0];
        assert!(best.expected_cost <= rec.expected_cost + 1e-12);
        // Loose floor consistent with the Ω(ln n) lower bound.
        assert!(best.ratio >= 0.1 * (1000.0f64).ln());
    }

    #[test]
    fn curve_ratios_grow() {
        let spec = DistributionSpec::exponential();
        let reports = single_threshold_curve(&spec, &[100, 1_000, 10_000], &CFG).unwrap();
        assert!(reports[0].ratio < reports[1].ratio);
        assert!(reports[1].ratio < reports[2].ratio);
    }

    #[test]
    fn missing_head_and_infinite_mean_errors() {
        let er = DistributionSpec::equal_revenue();
        assert!(matches!(
            single_threshold_curve(&er, &[10], &CFG),
            Err(Error::MissingHead(_)) | Err(Error::InfiniteMean(_))
        ));
        assert!(matches!(
            single_threshold_cost(&er, 2.0, 5, &CFG),
            Err(Error::InfiniteMean(_))
        ));
        assert!(matches!(
            best_single_threshold(&er, 5, &CFG),
            Err(Error::InfiniteMean(_))
        ));
    }
}
