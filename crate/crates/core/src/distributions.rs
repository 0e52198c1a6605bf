//! Cost distributions and their hazard-rate machinery.
//!
//! A [`DistributionSpec`] carries closed-form cdf/pdf/quantile callables
//! together with the quantities the stopping analysis runs on: the support's
//! lower endpoint, the mean (possibly +∞), the cumulative hazard
//! H(x) = −ln(1 − F(x)), and, when known, the head (a₁, d₁) of H's Puiseux
//! series at the bottom of the support.
//!
//! Built-in families:
//!
//! * `weibull_hazard(a, d)` — H(x) = a·x^d on [0, ∞); `(1, 1)` is the unit
//!   exponential.
//! * `power_beta(alpha)` — F(x) = x^α on [0, 1].
//! * `equal_revenue` — F(x) = 1 − 1/x on [1, ∞); infinite mean, no head.
//! * `uniform(lo, hi)`.
//!
//! All hazard computations are taken relative to `support_low`, so
//! H(support_low) = 0 for shifted supports too.

use std::sync::Arc;

use rand::Rng;
use serde::Deserialize;

use crate::error::{Error, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Leading term of the cumulative hazard's Puiseux series:
/// H(support_low + t) = a₁·t^{d₁} + o(t^{d₁}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuiseuxHead {
    a1: f64,
    d1: f64,
}

impl PuiseuxHead {
    pub fn new(a1: f64, d1: f64) -> Result<Self> {
        if !(a1 > 0.0) || !a1.is_finite() {
            return Err(Error::Domain(format!(
                "Puiseux head needs a1 > 0, got {a1}"
            )));
        }
        if !(d1 > 0.0) || !d1.is_finite() {
            return Err(Error::Domain(format!(
                "Puiseux head needs d1 > 0, got {d1}"
            )));
        }
        Ok(Self { a1, d1 })
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn d1(&self) -> f64 {
        self.d1
    }
}

/// Result of a monotone-hazard-rate scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MhrCheck {
    pub is_mhr: bool,
    /// A grid point where the hazard rate decreases, when one exists.
    pub witness: Option<f64>,
}

/// A continuous cost distribution on [support_low, support_high).
#[derive(Clone)]
pub struct DistributionSpec {
    name: String,
    support_low: f64,
    support_high: f64,
    mean: f64,
    cdf: RealFn,
    pdf: RealFn,
    quantile: RealFn,
    /// Exact cumulative hazard when the family has one in closed form;
    /// otherwise derived from the cdf.
    cum_hazard: Option<RealFn>,
    puiseux_head: Option<PuiseuxHead>,
    /// Set when H(x − support_low) = a·(x − support_low)^d exactly, which
    /// unlocks the closed-form prophet benchmark.
    power_hazard: Option<(f64, f64)>,
}

impl std::fmt::Debug for DistributionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DistributionSpec")
            .field("name", &self.name)
            .field("support_low", &self.support_low)
            .field("support_high", &self.support_high)
            .field("mean", &self.mean)
            .field("puiseux_head", &self.puiseux_head)
            .finish()
    }
}

impl DistributionSpec {
    /// Assembles a spec from raw parts. The callables must satisfy
    /// cdf(support_low) = 0, cdf nondecreasing with limit 1, and
    /// quantile(cdf(x)) = x on continuity points.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        name: impl Into<String>,
        support_low: f64,
        support_high: f64,
        mean: f64,
        cdf: RealFn,
        pdf: RealFn,
        quantile: RealFn,
        puiseux_head: Option<PuiseuxHead>,
    ) -> Result<Self> {
        if !(support_low >= 0.0) || !support_low.is_finite() {
            return Err(Error::Domain(format!(
                "support_low must be finite and non-negative, got {support_low}"
            )));
        }
        if !(support_high > support_low) {
            return Err(Error::Domain(format!(
                "support_high must exceed support_low, got [{support_low}, {support_high}]"
            )));
        }
        if !(mean >= support_low) {
            return Err(Error::Domain(format!(
                "mean {mean} below support_low {support_low}"
            )));
        }
        Ok(Self {
            name: name.into(),
            support_low,
            support_high,
            mean,
            cdf,
            pdf,
            quantile,
            cum_hazard: None,
            puiseux_head,
            power_hazard: None,
        })
    }

    /// H(x) = a·x^d on [0, +∞): F(x) = 1 − e^{−a x^d}. The (1, 1) case is
    /// the exponential with rate 1.
    pub fn weibull_hazard(a: f64, d: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain(format!(
                "weibull_hazard needs a > 0, got {a}"
            )));
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::Domain(format!(
                "weibull_hazard needs d > 0, got {d}"
            )));
        }
        let mean = crate::special::gamma(1.0 + 1.0 / d)? / a.powf(1.0 / d);
        let cdf: RealFn = Arc::new(move |x| {
            if x <= 0.0 {
                0.0
            } else {
                -(-a * x.powf(d)).exp_m1()
            }
        });
        let pdf: RealFn = Arc::new(move |x| {
            if x < 0.0 {
                0.0
            } else {
                a * d * x.powf(d - 1.0) * (-a * x.powf(d)).exp()
            }
        });
        let quantile: RealFn = Arc::new(move |u: f64| (-(-u).ln_1p() / a).powf(1.0 / d));
        let mut spec = Self::from_parts(
            format!("weibull_hazard({a},{d})"),
            0.0,
            f64::INFINITY,
            mean,
            cdf,
            pdf,
            quantile,
            Some(PuiseuxHead::new(a, d)?),
        )?;
        spec.cum_hazard = Some(Arc::new(
            move |x: f64| if x <= 0.0 { 0.0 } else { a * x.powf(d) },
        ));
        spec.power_hazard = Some((a, d));
        Ok(spec)
    }

    /// The unit-rate exponential, `weibull_hazard(1, 1)`.
    pub fn exponential() -> Self {
        let mut spec = Self::weibull_hazard(1.0, 1.0).expect("unit parameters are valid");
        spec.name = "exponential".into();
        spec
    }

    /// F(x) = x^α on [0, 1]. H(x) = ln(1/(1 − x^α)) has Puiseux series
    /// Σ_{k≥1} x^{kα}/k, so the head is (1, α).
    pub fn power_beta(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "power_beta needs alpha > 0, got {alpha}"
            )));
        }
        let mean = alpha / (alpha + 1.0);
        let cdf: RealFn = Arc::new(move |x: f64| x.clamp(0.0, 1.0).powf(alpha));
        let pdf: RealFn = Arc::new(move |x: f64| {
            if (0.0..=1.0).contains(&x) {
                alpha * x.powf(alpha - 1.0)
            } else {
                0.0
            }
        });
        let quantile: RealFn = Arc::new(move |u: f64| u.powf(1.0 / alpha));
        let mut spec = Self::from_parts(
            format!("power_beta({alpha})"),
            0.0,
            1.0,
            mean,
            cdf,
            pdf,
            quantile,
            Some(PuiseuxHead::new(1.0, alpha)?),
        )?;
        spec.cum_hazard = Some(Arc::new(move |x: f64| {
            if x <= 0.0 {
                0.0
            } else if x >= 1.0 {
                f64::INFINITY
            } else {
                -(-x.powf(alpha)).ln_1p()
            }
        }));
        Ok(spec)
    }

    /// The equal-revenue distribution: F(x) = 1 − 1/x on [1, +∞).
    /// Infinite mean, H(x) = ln x, and no convergent Puiseux series on the
    /// whole support, so no head is attached.
    pub fn equal_revenue() -> Self {
        let cdf: RealFn = Arc::new(|x: f64| if x <= 1.0 { 0.0 } else { 1.0 - 1.0 / x });
        let pdf: RealFn = Arc::new(|x: f64| if x < 1.0 { 0.0 } else { 1.0 / (x * x) });
        let quantile: RealFn = Arc::new(|u: f64| 1.0 / (1.0 - u));
        let mut spec = Self::from_parts(
            "equal_revenue",
            1.0,
            f64::INFINITY,
            f64::INFINITY,
            cdf,
            pdf,
            quantile,
            None,
        )
        .expect("fixed parameters are valid");
        spec.cum_hazard = Some(Arc::new(|x: f64| if x <= 1.0 { 0.0 } else { x.ln() }));
        spec
    }

    /// Uniform on [lo, hi]. The shifted hazard H(lo + t) = −ln(1 − t/(hi−lo))
    /// has head (1/(hi−lo), 1).
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0) || !lo.is_finite() || !hi.is_finite() || !(hi > lo) {
            return Err(Error::Domain(format!(
                "uniform needs 0 <= lo < hi, got [{lo}, {hi}]"
            )));
        }
        let width = hi - lo;
        let cdf: RealFn = Arc::new(move |x: f64| ((x - lo) / width).clamp(0.0, 1.0));
        let pdf: RealFn = Arc::new(move |x: f64| {
            if (lo..=hi).contains(&x) {
                1.0 / width
            } else {
                0.0
            }
        });
        let quantile: RealFn = Arc::new(move |u: f64| lo + u * width);
        let mut spec = Self::from_parts(
            format!("uniform({lo},{hi})"),
            lo,
            hi,
            0.5 * (lo + hi),
            cdf,
            pdf,
            quantile,
            Some(PuiseuxHead::new(1.0 / width, 1.0)?),
        )?;
        spec.cum_hazard = Some(Arc::new(move |x: f64| {
            if x <= lo {
                0.0
            } else if x >= hi {
                f64::INFINITY
            } else {
                -(-(x - lo) / width).ln_1p()
            }
        }));
        Ok(spec)
    }

    /// Parses the CLI's distribution format:
    /// `{"family": "weibull_hazard"|"power_beta"|"equal_revenue"|"uniform", "params": {…}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: DistributionJson = serde_json::from_str(text)
            .map_err(|e| Error::Domain(format!("invalid distribution spec: {e}")))?;
        parsed.build()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support_low(&self) -> f64 {
        self.support_low
    }

    /// Upper end of the support; +∞ for unbounded families.
    pub fn support_high(&self) -> f64 {
        self.support_high
    }

    /// `E[X]`; +∞ for the equal-revenue family.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn has_finite_mean(&self) -> bool {
        self.mean.is_finite()
    }

    pub fn puiseux_head(&self) -> Option<PuiseuxHead> {
        self.puiseux_head
    }

    /// `(a, d)` when H(x − support_low) = a·(x − support_low)^d exactly.
    pub fn power_hazard(&self) -> Option<(f64, f64)> {
        self.power_hazard
    }

    pub fn cdf(&self, x: f64) -> f64 {
        (self.cdf)(x)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        (self.pdf)(x)
    }

    /// F⁻¹(u) for u ∈ [0, 1).
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::Domain(format!(
                "quantile requires u in [0, 1), got {u}"
            )));
        }
        Ok((self.quantile)(u))
    }

    /// Survival function 1 − F(x), evaluated through the exact hazard when
    /// the family has one so the deep tail keeps full precision.
    pub fn survival(&self, x: f64) -> f64 {
        match &self.cum_hazard {
            Some(h) => (-h(x)).exp(),
            None => 1.0 - (self.cdf)(x),
        }
    }

    /// (1 − F(x))^n without intermediate underflow.
    pub fn survival_pow(&self, x: f64, n: f64) -> f64 {
        match &self.cum_hazard {
            Some(h) => (-n * h(x)).exp(),
            None => (1.0 - (self.cdf)(x)).powf(n),
        }
    }

    /// Cumulative hazard H(x) = −ln(1 − F(x)), zero at the bottom of the
    /// support. Errors where F(x) = 1 since H diverges there.
    pub fn cumulative_hazard(&self, x: f64) -> Result<f64> {
        if x < self.support_low {
            return Err(Error::Domain(format!(
                "cumulative hazard of {} is undefined below support_low {}",
                x, self.support_low
            )));
        }
        let h = match &self.cum_hazard {
            Some(hz) => hz(x),
            None => {
                let f = (self.cdf)(x);
                if f >= 1.0 {
                    f64::INFINITY
                } else {
                    -(-f).ln_1p()
                }
            }
        };
        if h.is_infinite() {
            return Err(Error::Domain(format!(
                "cumulative hazard diverges at {x} (cdf reached 1)"
            )));
        }
        Ok(h)
    }

    /// Hazard rate h(x) = f(x) / (1 − F(x)).
    pub fn hazard_rate(&self, x: f64) -> Result<f64> {
        if x < self.support_low || x > self.support_high {
            return Err(Error::Domain(format!(
                "hazard rate of {x} is outside the support"
            )));
        }
        let s = self.survival(x);
        if s <= 0.0 {
            return Err(Error::Domain(format!(
                "hazard rate diverges at {x} (cdf reached 1)"
            )));
        }
        Ok((self.pdf)(x) / s)
    }

    /// One inverse-transform sample.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        (self.quantile)(rng.random::<f64>())
    }

    /// Recovers (a₁, d₁) by least squares on
    /// ln H(support_low + x) ≈ ln a₁ + d₁ ln x over a log-spaced grid
    /// x ∈ [x_min, x_max].
    pub fn estimate_valuation(
        &self,
        grid_points: usize,
        x_min: f64,
        x_max: f64,
    ) -> Result<PuiseuxHead> {
        if grid_points < 2 {
            return Err(Error::Domain(
                "estimate_valuation needs at least 2 grid points".into(),
            ));
        }
        if !(x_min > 0.0) || !(x_max > x_min) {
            return Err(Error::Domain(format!(
                "estimate_valuation needs 0 < x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        let (ln_lo, ln_hi) = (x_min.ln(), x_max.ln());
        let m = grid_points as f64;

        let mut sum_t = 0.0;
        let mut sum_y = 0.0;
        let mut sum_tt = 0.0;
        let mut sum_ty = 0.0;
        let mut ts = Vec::with_capacity(grid_points);
        let mut ys = Vec::with_capacity(grid_points);
        for j in 0..grid_points {
            let t = ln_lo + (ln_hi - ln_lo) * j as f64 / (grid_points - 1) as f64;
            let x = self.support_low + t.exp();
            let h = self.cumulative_hazard(x)?;
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::Fit(format!(
                    "cumulative hazard is {h} at offset {:e}; cannot take logs",
                    t.exp()
                )));
            }
            let y = h.ln();
            sum_t += t;
            sum_y += y;
            sum_tt += t * t;
            sum_ty += t * y;
            ts.push(t);
            ys.push(y);
        }
        let denom = m * sum_tt - sum_t * sum_t;
        if denom.abs() < 1e-30 {
            return Err(Error::Fit("degenerate abscissae in valuation fit".into()));
        }
        let d1 = (m * sum_ty - sum_t * sum_y) / denom;
        let intercept = (sum_y - d1 * sum_t) / m;
        let a1 = intercept.exp();

        const RESIDUAL_BOUND: f64 = 1e-2;
        let residual = ts
            .iter()
            .zip(&ys)
            .map(|(&t, &y)| {
                let r = y - (intercept + d1 * t);
                r * r
            })
            .sum::<f64>()
            / m;
        if residual > RESIDUAL_BOUND {
            return Err(Error::DegenerateFit {
                residual,
                bound: RESIDUAL_BOUND,
            });
        }
        PuiseuxHead::new(a1, d1)
    }

    /// Scans the hazard rate on a grid over (support_low, x_hi] and reports
    /// whether it is nondecreasing (relative tolerance 1e-9).
    pub fn check_mhr(&self, grid_points: usize, x_hi: f64) -> Result<MhrCheck> {
        if grid_points < 2 {
            return Err(Error::Domain(
                "check_mhr needs at least 2 grid points".into(),
            ));
        }
        // cdf < 1 is tested through the survival function: (1 − F) rounds
        // to 0 long before e^{−H} underflows.
        if !(x_hi > self.support_low) || !(self.survival(x_hi) > 0.0) {
            return Err(Error::Domain(format!(
                "check_mhr needs x_hi inside the support with cdf < 1, got {x_hi}"
            )));
        }
        const REL_TOL: f64 = 1e-9;
        let mut prev: Option<f64> = None;
        for j in 1..=grid_points {
            let x = self.support_low + (x_hi - self.support_low) * j as f64 / grid_points as f64;
            let h = self.hazard_rate(x)?;
            if !h.is_finite() {
                return Err(Error::Domain(format!("hazard rate is not finite at {x}")));
            }
            if let Some(p) = prev {
                if h < p - REL_TOL * p.abs().max(1.0) {
                    return Ok(MhrCheck {
                        is_mhr: false,
                        witness: Some(x),
                    });
                }
            }
            prev = Some(h);
        }
        Ok(MhrCheck {
            is_mhr: true,
            witness: None,
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionJson {
    family: String,
    #[serde(default)]
    params: Params,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Params {
    a: Option<f64>,
    d: Option<f64>,
    alpha: Option<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
}

impl DistributionJson {
    fn build(self) -> Result<DistributionSpec> {
        let p = self.params;
        match self.family.as_str() {
            "weibull_hazard" => {
                let a =
                    p.a.ok_or_else(|| Error::Domain("weibull_hazard needs param a".into()))?;
                let d =
                    p.d.ok_or_else(|| Error::Domain("weibull_hazard needs param d".into()))?;
                DistributionSpec::weibull_hazard(a, d)
            }
            "power_beta" => {
                let alpha = p
                    .alpha
                    .ok_or_else(|| Error::Domain("power_beta needs param alpha".into()))?;
                DistributionSpec::power_beta(alpha)
            }
            "equal_revenue" => Ok(DistributionSpec::equal_revenue()),
            "uniform" => DistributionSpec::uniform(p.lo.unwrap_or(0.0), p.hi.unwrap_or(1.0)),
            other => Err(Error::Domain(format!(
                "unknown family {other:?}; expected weibull_hazard, power_beta, \
                 equal_revenue, or uniform"
            ))),
        }
    }
}
