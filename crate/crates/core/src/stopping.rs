//! The optimal multi-threshold stopping policy and its competitive ratio.
//!
//! The optimal policy accepts the first cost X_i ≤ τ_i, with τ_i equal to
//! the expected cost G(n−i) the policy would incur on the remaining draws
//! and τ_n = +∞ (the last draw is forced). G follows the recurrence
//!
//! ```text
//! G(1) = E[X],    G(k) = ∫₀^{G(k−1)} e^{−H(u)} du
//! ```
//!
//! (shifted by the support's lower endpoint), and the competitive ratio
//! against the prophet is R(n) = G(n)/β_n, which tends to λ(d₁).

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::prophet::prophet_cost_auto;
use crate::quadrature::{integrate, QuadratureConfig};
use crate::special::lambda_factor;

/// Acceptance thresholds τ₁..τ_n for one horizon; τ_n is always +∞.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSchedule {
    thresholds: Vec<f64>,
}

impl ThresholdSchedule {
    /// Wraps a raw threshold vector. The final entry must be +∞: the last
    /// draw is accepted no matter what.
    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        match thresholds.last() {
            None => Err(Error::Domain(
                "a schedule needs at least one threshold".into(),
            )),
            Some(&last) if last != f64::INFINITY => Err(Error::Domain(format!(
                "the final threshold must be +inf (forced acceptance), got {last}"
            ))),
            _ => {
                if thresholds.iter().any(|t| t.is_nan()) {
                    return Err(Error::Domain("thresholds must not be NaN".into()));
                }
                Ok(Self { thresholds })
            }
        }
    }

    /// A flat schedule: τ₁ = … = τ_{n−1} = t, τ_n = +∞.
    pub fn flat(t: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain(
                "a schedule needs at least one threshold".into(),
            ));
        }
        let mut v = vec![t; n - 1];
        v.push(f64::INFINITY);
        Self::new(v)
    }

    pub fn horizon(&self) -> usize {
        self.thresholds.len()
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }
}

/// One row of a competitive-ratio table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub n: u64,
    /// Optimal policy cost G(n).
    pub algorithm_cost: f64,
    /// Prophet benchmark β_n.
    pub prophet_cost: f64,
    /// R(n) = G(n)/β_n.
    pub ratio: f64,
}

/// Per-n table of policy cost, prophet cost, and their ratio.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RatioCurve {
    pub rows: Vec<RatioRow>,
}

/// G(1)..G(n_max) by the backward-induction recurrence.
///
/// The sequence is nonincreasing and bounded below by the support's lower
/// endpoint. Fails with an infinite-mean error when `E[X]` diverges — the
/// regime where no finite-cost policy exists.
pub fn expected_cost_sequence(
    spec: &DistributionSpec,
    n_max: usize,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    if n_max == 0 {
        return Err(Error::Domain(
            "expected_cost_sequence requires n_max >= 1".into(),
        ));
    }
    if !spec.has_finite_mean() {
        return Err(Error::InfiniteMean(format!(
            "{} has no finite mean, so every policy has infinite expected cost",
            spec.name()
        )));
    }
    let a = spec.support_low();
    let mut seq = Vec::with_capacity(n_max);
    let mut g = spec.mean();
    seq.push(g);
    for _ in 1..n_max {
        g = a + integrate(|u| spec.survival(u), a, g, cfg)?;
        seq.push(g);
    }
    Ok(seq)
}

/// E[X | X ≤ tau], through the integration-by-parts form
/// (∫ₐ^τ e^{−H} − (τ−a)·e^{−H(τ)}) / F(τ) + a, which stays stable for
/// small τ where the direct ∫ u f(u) du loses digits.
pub fn truncated_mean(spec: &DistributionSpec, tau: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !spec.has_finite_mean() && tau == f64::INFINITY {
        return Err(Error::InfiniteMean(format!(
            "{} has no finite mean",
            spec.name()
        )));
    }
    let a = spec.support_low();
    let t = tau.min(spec.support_high());
    if t == f64::INFINITY {
        return Ok(spec.mean());
    }
    let f_t = spec.cdf(t);
    if f_t <= 0.0 {
        return Err(Error::Domain(format!(
            "conditional mean is undefined: P(X <= {tau}) = 0"
        )));
    }
    let integral = integrate(|u| spec.survival(u), a, t, cfg)?;
    Ok(a + (integral - (t - a) * spec.survival(t)) / f_t)
}

/// The optimal schedule for horizon n: τ_i = G(n−i), τ_n = +∞.
pub fn optimal_schedule(
    spec: &DistributionSpec,
    n: usize,
    cfg: &QuadratureConfig,
) -> Result<ThresholdSchedule> {
    if n == 0 {
        return Err(Error::Domain("optimal_schedule requires n >= 1".into()));
    }
    let mut thresholds = Vec::with_capacity(n);
    if n > 1 {
        let seq = expected_cost_sequence(spec, n - 1, cfg)?;
        thresholds.extend(seq.iter().rev());
    } else if !spec.has_finite_mean() {
        return Err(Error::InfiniteMean(format!(
            "{} has no finite mean",
            spec.name()
        )));
    }
    thresholds.push(f64::INFINITY);
    ThresholdSchedule::new(thresholds)
}

/// The same schedule through the forward recurrence
/// τ_i = F(τ_{i+1})·E[X | X ≤ τ_{i+1}] + (1 − F(τ_{i+1}))·τ_{i+1},
/// starting from `τ_{n−1} = E[X]`. Exists as an independent construction to
/// cross-check `optimal_schedule`.
pub fn forward_schedule(
    spec: &DistributionSpec,
    n: usize,
    cfg: &QuadratureConfig,
) -> Result<ThresholdSchedule> {
    if n == 0 {
        return Err(Error::Domain("forward_schedule requires n >= 1".into()));
    }
    if !spec.has_finite_mean() {
        return Err(Error::InfiniteMean(format!(
            "{} has no finite mean",
            spec.name()
        )));
    }
    let mut thresholds = vec![f64::INFINITY];
    if n > 1 {
        let mut tau = spec.mean();
        thresholds.push(tau);
        for _ in 0..n.saturating_sub(2) {
            let f = spec.cdf(tau);
            tau = if f > 0.0 {
                f * truncated_mean(spec, tau, cfg)? + (1.0 - f) * tau
            } else {
                tau
            };
            thresholds.push(tau);
        }
    }
    thresholds.reverse();
    ThresholdSchedule::new(thresholds)
}

/// Expected cost of an arbitrary threshold vector (the last entry is the
/// forced acceptance and its value is ignored), by the recurrence
/// G(k+1) = F(τ)·E[X | X ≤ τ] + (1 − F(τ))·G(k).
pub fn schedule_cost(
    spec: &DistributionSpec,
    thresholds: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if thresholds.is_empty() {
        return Err(Error::Domain(
            "schedule_cost needs at least one threshold".into(),
        ));
    }
    if !spec.has_finite_mean() {
        return Err(Error::InfiniteMean(format!(
            "{} has no finite mean",
            spec.name()
        )));
    }
    let mut cost = spec.mean();
    for &tau in thresholds[..thresholds.len() - 1].iter().rev() {
        let f = spec.cdf(tau);
        if f > 0.0 {
            cost = f * truncated_mean(spec, tau, cfg)? + (1.0 - f) * cost;
        }
    }
    Ok(cost)
}

/// Rows (n, G(n), β_n, R(n)) for n = 1..n_max.
pub fn ratio_curve(
    spec: &DistributionSpec,
    n_max: usize,
    cfg: &QuadratureConfig,
) -> Result<RatioCurve> {
    let seq = expected_cost_sequence(spec, n_max, cfg)?;
    let mut rows = Vec::with_capacity(n_max);
    for (i, &g) in seq.iter().enumerate() {
        let n = (i + 1) as u64;
        let (beta, _) = prophet_cost_auto(spec, n, cfg)?;
        rows.push(RatioRow {
            n,
            algorithm_cost: g,
            prophet_cost: beta,
            ratio: g / beta,
        });
    }
    Ok(RatioCurve { rows })
}

/// λ(d₁): the predicted limit of R(n) for the distribution's Puiseux head.
pub fn limiting_constant(spec: &DistributionSpec) -> Result<f64> {
    let head = spec.puiseux_head().ok_or_else(|| {
        Error::MissingHead(format!(
            "{} carries no Puiseux head; supply one analytically or via estimate_valuation",
            spec.name()
        ))
    })?;
    lambda_factor(head.d1())
}
