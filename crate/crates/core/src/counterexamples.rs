//! Executable reproductions of the impossibility results: the quantities
//! that blow up do so here with explicit, testable values.
//!
//! * Non-identical distributions (two-point construction): ratio L under
//!   adversarial order, at least L/2 under random order.
//! * I.I.D. equal-revenue: the policy cost diverges like 1 + ln M along a
//!   truncation sequence while the prophet's stays at 2 − 1/M.
//! * Naive single threshold T = c/n on the exponential: the forced-last-draw
//!   term n·e^{−c(n−1)/n} alone is unbounded.

use serde::Serialize;

use crate::error::{Error, Result};

/// Which impossibility construction produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Adversarial,
    RandomOrder,
    IidEqualRevenue,
    NaiveThreshold,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Adversarial => "adversarial",
            Regime::RandomOrder => "random_order",
            Regime::IidEqualRevenue => "iid_equal_revenue",
            Regime::NaiveThreshold => "naive_threshold",
        }
    }
}

/// Cost of the best online policy against the prophet in one construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapReport {
    pub regime: Regime,
    pub alg_cost: f64,
    pub prophet_cost: f64,
    pub ratio: f64,
}

/// Both arrival-order regimes of the two-point construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonIidGap {
    pub l: f64,
    pub adversarial: GapReport,
    pub random_order: GapReport,
}

/// The M → ∞ limit of the equal-revenue truncation sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqualRevenueLimit {
    /// β₂ — finite.
    pub prophet_cost: f64,
    /// `E[X]` — infinite.
    pub alg_cost: f64,
    pub ratio: f64,
}

/// One horizon of the naive-threshold family, with the term that diverges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NaiveThresholdPoint {
    pub n: u64,
    /// n·e^{−c(n−1)/n}: the cost of being forced to the last draw.
    pub divergent_term: f64,
    pub report: GapReport,
}

/// The naive-threshold curve and the finite limit of its first summand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NaiveThresholdCurve {
    pub c: f64,
    /// lim_n n·(1 − e^{−c(n−1)/n})(1 − (c/n)·e^{−c/n}/(1 − e^{−c/n}))
    /// = c·e^{−c}(e^c − 1)/2.
    pub first_summand_limit: f64,
    pub points: Vec<NaiveThresholdPoint>,
}

/// Two costs, X₁ = 1 deterministically and X₂ ∈ {0, L} with
/// P(X₂ = L) = 1/L. Every quantity is computed by enumerating the four
/// (order, outcome) combinations with the optimal decision rule, not
/// hard-coded.
pub fn non_iid_gap(l: f64) -> Result<NonIidGap> {
    if !(l > 1.0) || !l.is_finite() {
        return Err(Error::Domain(format!(
            "non_iid_gap requires L > 1, got {l}"
        )));
    }
    let p_high = 1.0 / l;
    let outcomes = [(0.0, 1.0 - p_high), (l, p_high)];

    // E[X₂] and the prophet's E[min(X₁, X₂)].
    let mut x2_mean = 0.0;
    let mut prophet = 0.0;
    for (x2, p) in outcomes {
        x2_mean += p * x2;
        prophet += p * x2.min(1.0);
    }

    // Adversarial order shows X₁ first: accept 1 or continue into E[X₂].
    let adversarial_alg = 1.0f64.min(x2_mean);

    // Random order: X₂ first with probability 1/2, where the optimal rule
    // accepts x₂ iff x₂ ≤ E[X₁] = 1.
    let mut x2_first_alg = 0.0;
    for (x2, p) in outcomes {
        x2_first_alg += p * if x2 <= 1.0 { x2 } else { 1.0 };
    }
    let random_alg = 0.5 * adversarial_alg + 0.5 * x2_first_alg;

    Ok(NonIidGap {
        l,
        adversarial: GapReport {
            regime: Regime::Adversarial,
            alg_cost: adversarial_alg,
            prophet_cost: prophet,
            ratio: adversarial_alg / prophet,
        },
        random_order: GapReport {
            regime: Regime::RandomOrder,
            alg_cost: random_alg,
            prophet_cost: prophet,
            ratio: random_alg / prophet,
        },
    })
}

/// Equal-revenue costs truncated at M, horizon 2. The policy pays
/// `E[min(X, M)]` = 1 + ln M; the prophet pays 2 − 1/M. Both are the
/// truncated survival integrals in closed form.
pub fn equal_revenue_gap(m: f64) -> Result<GapReport> {
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::Domain(format!(
            "equal_revenue_gap requires M > 1, got {m}"
        )));
    }
    let alg = 1.0 + m.ln();
    let prophet = 2.0 - 1.0 / m;
    Ok(GapReport {
        regime: Regime::IidEqualRevenue,
        alg_cost: alg,
        prophet_cost: prophet,
        ratio: alg / prophet,
    })
}

/// The limits the truncation sequence approaches.
pub fn equal_revenue_limit() -> EqualRevenueLimit {
    EqualRevenueLimit {
        prophet_cost: 2.0,
        alg_cost: f64::INFINITY,
        ratio: f64::INFINITY,
    }
}

/// The naive threshold T = c/n on the unit exponential, evaluated through
/// the closed form
///
/// ```text
/// R(n) = n((1 − e^{−c(n−1)/n})(1 − (c/n)·e^{−c/n}/(1 − e^{−c/n})) + e^{−c(n−1)/n})
/// ```
pub fn naive_threshold_curve(c: f64, n_values: &[u64]) -> Result<NaiveThresholdCurve> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!(
            "naive_threshold_curve requires c > 0, got {c}"
        )));
    }
    let points = n_values
        .iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::Domain(format!(
                    "naive threshold curve needs n >= 2, got {n}"
                )));
            }
            let nf = n as f64;
            let skip_all = (-c * (nf - 1.0) / nf).exp();
            let t_over = (c / nf) * (-c / nf).exp() / -(-c / nf).exp_m1();
            let ratio = nf * ((1.0 - skip_all) * (1.0 - t_over) + skip_all);
            let beta = 1.0 / nf;
            Ok(NaiveThresholdPoint {
                n,
                divergent_term: nf * skip_all,
                report: GapReport {
                    regime: Regime::NaiveThreshold,
                    alg_cost: ratio * beta,
                    prophet_cost: beta,
                    ratio,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NaiveThresholdCurve {
        c,
        first_summand_limit: c * (-c).exp() * (c.exp() - 1.0) / 2.0,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn adversarial_ratio_is_exactly_l() {
        for l in [2.0, 10.0, 1e6] {
            let gap = non_iid_gap(l).unwrap();
            assert_eq!(gap.adversarial.ratio, l);
            assert_eq!(gap.adversarial.alg_cost, 1.0);
        }
    }

    #[test]
    fn random_order_keeps_half_the_gap() {
        for l in [2.0, 10.0, 1e6] {
            let gap = non_iid_gap(l).unwrap();
            assert!(gap.random_order.alg_cost >= 0.5);
            assert!(gap.random_order.ratio >= l / 2.0);
            // Enumeration gives exactly 1/2 + 1/(2L).
            assert!(rel(gap.random_order.alg_cost, 0.5 + 0.5 / l) < 1e-15);
        }
    }

    #[test]
    fn non_iid_prophet_example() {
        let gap = non_iid_gap(2.0).unwrap();
        assert_eq!(gap.adversarial.prophet_cost, 0.5);
    }

    #[test]
    fn non_iid_domain() {
        assert!(non_iid_gap(1.0).is_err());
        assert!(non_iid_gap(0.5).is_err());
    }

    #[test]
    fn equal_revenue_truncation() {
        // M = e⁹: policy pays 10, prophet 2 − e^{−9}. The ratio follows
        // from those two analytic integrals.
        let m = 9.0f64.exp();
        let gap = equal_revenue_gap(m).unwrap();
        assert!(rel(gap.alg_cost, 10.0) < 1e-14);
        assert!(rel(gap.prophet_cost, 2.0 - (-9.0f64).exp()) < 1e-14);
        assert!(rel(gap.ratio, 5.000_308_543_548_866) < 1e-12);
        assert!(equal_revenue_gap(1.0).is_err());

        let lim = equal_revenue_limit();
        assert_eq!(lim.prophet_cost, 2.0);
        assert!(lim.alg_cost.is_infinite() && lim.ratio.is_infinite());
    }

    #[test]
    fn equal_revenue_ratio_grows() {
        let mut prev = 0.0;
        for k in 1..=8 {
            let gap = equal_revenue_gap(10f64.powi(k)).unwrap();
            assert!(gap.ratio > prev);
            prev = gap.ratio;
        }
    }

    #[test]
    fn naive_threshold_blowup() {
        let curve = naive_threshold_curve(1.0, &[10, 10_000]).unwrap();
        // (1 − e^{−1})/2.
        assert!(rel(curve.first_summand_limit, 0.316_060_279_414_278_83) < 1e-14);
        let r10 = curve.points[0].report.ratio;
        let r10k = curve.points[1].report.ratio;
        assert!(rel(r10, 4.357_467_338_712_814) < 1e-12);
        assert!(r10k > 100.0 * r10);
        assert!(curve.points[1].divergent_term > curve.points[0].divergent_term);
        assert!(naive_threshold_curve(0.0, &[10]).is_err());
        assert!(naive_threshold_curve(1.0, &[1]).is_err());
    }
}
