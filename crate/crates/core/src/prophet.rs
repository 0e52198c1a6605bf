//! The prophet benchmark `β_n = E[min of n I.I.D. draws]`.
//!
//! β_n = support_low + ∫ e^{−n H(u)} du over the support, evaluated either
//! by adaptive quadrature or, for pure power hazards H(x) = a·x^d, by the
//! closed form Γ(1+1/d)/(a n)^{1/d}.

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_with_floor, QuadratureConfig};
use crate::special::gamma;

/// How a β_n value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaMethod {
    ClosedForm,
    Quadrature,
}

impl BetaMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            BetaMethod::ClosedForm => "closed",
            BetaMethod::Quadrature => "quadrature",
        }
    }
}

/// β_n by adaptive quadrature of the survival function's n-th power.
///
/// The bulk of the integrand sits below the quantile where
/// (1 − F)^n = tail_cutoff_mass; beyond that point the window is doubled
/// until the marginal panel stops mattering, which also detects divergence
/// (equal-revenue with n = 1) within `max_subdivisions` doublings.
pub fn prophet_cost(spec: &DistributionSpec, n: u64, cfg: &QuadratureConfig) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("prophet_cost requires n >= 1".into()));
    }
    let a = spec.support_low();
    let b = spec.support_high();
    let nf = n as f64;
    let f = |x: f64| spec.survival_pow(x, nf);

    // First window: integrand has decayed to the tail cutoff at its end.
    let p_cut = -(cfg.tail_cutoff_mass.ln() / nf).exp_m1();
    let mut hi = spec.quantile(p_cut.clamp(0.0, 1.0 - 1e-16))?.min(b);
    if !(hi > a) {
        hi = (a + 1.0).min(b);
    }
    let mut total = integrate(f, a, hi, cfg)?;

    // Chase the tail by doubling the window width until a panel is
    // negligible or the support ends. Panels only need absolute accuracy at
    // the level where they stop mattering against the running total.
    let mut settled = hi >= b;
    for _ in 0..cfg.max_subdivisions {
        if settled {
            break;
        }
        let next = (a + 2.0 * (hi - a)).min(b);
        let floor = 0.1 * cfg.rel_tolerance * total.abs();
        let panel = integrate_with_floor(f, hi, next, cfg, floor)?;
        total += panel;
        hi = next;
        if hi >= b || panel.abs() <= 0.5 * cfg.rel_tolerance * total.abs() {
            settled = true;
        }
    }
    if !settled {
        return Err(Error::Divergence(format!(
            "tail of the prophet integrand for {} (n = {n}) did not settle within {} \
             window doublings; the integral likely diverges",
            spec.name(),
            cfg.max_subdivisions
        )));
    }
    Ok(a + total)
}

/// Closed-form benchmark Γ(1+1/d)/(a·n)^{1/d}, exact for H(x) = a·x^d.
pub fn prophet_cost_closed(a: f64, d: f64, n: u64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "prophet_cost_closed needs a > 0, got {a}"
        )));
    }
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Domain(format!(
            "prophet_cost_closed needs d > 0, got {d}"
        )));
    }
    if n == 0 {
        return Err(Error::Domain("prophet_cost_closed requires n >= 1".into()));
    }
    Ok(gamma(1.0 + 1.0 / d)? / (a * n as f64).powf(1.0 / d))
}

/// β_n through the closed form when the family admits one, quadrature
/// otherwise. Returns the value and which route produced it.
pub fn prophet_cost_auto(
    spec: &DistributionSpec,
    n: u64,
    cfg: &QuadratureConfig,
) -> Result<(f64, BetaMethod)> {
    match spec.power_hazard() {
        Some((a, d)) => {
            let v = spec.support_low() + prophet_cost_closed(a, d, n)?;
            Ok((v, BetaMethod::ClosedForm))
        }
        None => Ok((prophet_cost(spec, n, cfg)?, BetaMethod::Quadrature)),
    }
}
