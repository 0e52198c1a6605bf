//! Posted-price procurement: the virtual-cost transformation
//! φ(c) = c + F(c)/f(c) and its composition with the optimal stopping
//! schedule.
//!
//! Minimizing the expected payment in a reverse auction reduces to running
//! the stopping policy on virtual costs. The composition here computes the
//! optimal schedule for the distribution of φ(X) and maps each virtual
//! threshold back through φ⁻¹ into a posted price. It is only well-defined
//! for regular specs with bounded support: `E[φ(X)] = E[X] + ∫F(c)dc`, and
//! the second integral diverges whenever the support is unbounded.

use std::sync::Arc;

use crate::distributions::{DistributionSpec, RealFn};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};
use crate::stopping::{optimal_schedule, ThresholdSchedule};

/// φ(c) = c + F(c)/f(c). At the bottom of the support F = 0, so
/// φ(support_low) = support_low regardless of the density there.
pub fn virtual_cost(spec: &DistributionSpec, c: f64) -> Result<f64> {
    if c < spec.support_low() || c > spec.support_high() {
        return Err(Error::Domain(format!(
            "virtual cost of {c} is outside the support"
        )));
    }
    let f_cdf = spec.cdf(c);
    if f_cdf <= 0.0 {
        return Ok(c);
    }
    let density = spec.pdf(c);
    if density > 0.0 {
        Ok(c + f_cdf / density)
    } else {
        Err(Error::ZeroDensity(c))
    }
}

/// Result of a regularity scan: is φ nondecreasing on the grid?
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityCheck {
    pub is_regular: bool,
    pub witness: Option<f64>,
}

/// Scans φ on a linear grid over the support (capped at the
/// 1 − 10⁻⁶ quantile for unbounded families), tolerance 1e-9 relative.
pub fn check_regularity(spec: &DistributionSpec, grid_points: usize) -> Result<RegularityCheck> {
    if grid_points < 2 {
        return Err(Error::Domain(
            "check_regularity needs at least 2 grid points".into(),
        ));
    }
    let lo = spec.support_low();
    let hi = spec.quantile(1.0 - 1e-6)?.min(spec.support_high());
    const REL_TOL: f64 = 1e-9;
    let mut prev: Option<f64> = None;
    for j in 0..=grid_points {
        let x = lo + (hi - lo) * j as f64 / grid_points as f64;
        let phi = virtual_cost(spec, x)?;
        if let Some(p) = prev {
            if phi < p - REL_TOL * p.abs().max(1.0) {
                return Ok(RegularityCheck {
                    is_regular: false,
                    witness: Some(x),
                });
            }
        }
        prev = Some(phi);
    }
    Ok(RegularityCheck {
        is_regular: true,
        witness: None,
    })
}

/// φ⁻¹(v) by bisection on [support_low, support_high]. Callers must have
/// established regularity; the map is then nondecreasing.
pub fn virtual_cost_inverse(spec: &DistributionSpec, v: f64, upper: f64) -> Result<f64> {
    let lo = spec.support_low();
    if v <= lo {
        return Ok(lo);
    }
    if v >= virtual_cost(spec, upper)? {
        return Ok(upper);
    }
    let (mut a, mut b) = (lo, upper);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if virtual_cost(spec, mid)? < v {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a) <= 1e-14 * (1.0 + b.abs()) {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Payment-minimizing posted prices: the optimal schedule computed in
/// virtual-cost space, mapped back through φ⁻¹.
///
/// Errors with `NotRegular` when φ decreases somewhere, and with
/// `InfiniteMean` for unbounded supports, where the virtual-cost
/// distribution always has a divergent mean.
pub fn posted_price_schedule(
    spec: &DistributionSpec,
    n: usize,
    cfg: &QuadratureConfig,
) -> Result<ThresholdSchedule> {
    let reg = check_regularity(spec, 512)?;
    if !reg.is_regular {
        return Err(Error::NotRegular(reg.witness.unwrap_or(spec.support_low())));
    }
    let hi = spec.support_high();
    if hi.is_infinite() {
        return Err(Error::InfiniteMean(format!(
            "the virtual-cost distribution of {} has E[phi(X)] = E[X] + \u{222b}F = \u{221e} \
             (unbounded support); the posted-price composition is undefined",
            spec.name()
        )));
    }

    let induced = induced_virtual_spec(spec, hi, cfg)?;
    let virtual_schedule = optimal_schedule(&induced, n, cfg)?;
    let prices = virtual_schedule
        .thresholds()
        .iter()
        .map(|&tau| {
            if tau.is_infinite() {
                Ok(f64::INFINITY)
            } else {
                virtual_cost_inverse(spec, tau, hi)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ThresholdSchedule::new(prices)
}

/// The distribution of Y = φ(X) for a regular spec on a bounded support.
fn induced_virtual_spec(
    spec: &DistributionSpec,
    hi: f64,
    cfg: &QuadratureConfig,
) -> Result<DistributionSpec> {
    let lo = spec.support_low();
    let phi_hi = virtual_cost(spec, hi)?;
    let mean = integrate(
        |x| {
            let phi = virtual_cost(spec, x).unwrap_or(f64::NAN);
            phi * spec.pdf(x)
        },
        lo,
        hi,
        cfg,
    )?;

    let base = spec.clone();
    let cdf: RealFn = Arc::new(move |y: f64| {
        if y <= lo {
            0.0
        } else {
            match virtual_cost_inverse(&base, y, hi) {
                Ok(x) => base.cdf(x),
                Err(_) => f64::NAN,
            }
        }
    });
    let base = spec.clone();
    let quantile: RealFn = Arc::new(move |u: f64| {
        let x = (base.quantile(u)).unwrap_or(f64::NAN);
        virtual_cost(&base, x.min(hi)).unwrap_or(f64::NAN)
    });
    // Density of the image measure: f(x)/φ'(x) with a centered difference
    // for φ'. Only fills out the distribution object; the schedule path never calls it.
    let base = spec.clone();
    let pdf: RealFn = Arc::new(move |y: f64| {
        let x = match virtual_cost_inverse(&base, y, hi) {
            Ok(x) => x,
            Err(_) => return f64::NAN,
        };
        let h = 1e-6 * (1.0 + x.abs());
        let (a, b) = (x - h, (x + h).min(hi));
        match (
            virtual_cost(&base, a.max(base.support_low())),
            virtual_cost(&base, b),
        ) {
            (Ok(pa), Ok(pb)) if pb > pa => base.pdf(x) * (b - a) / (pb - pa),
            _ => f64::NAN,
        }
    });

    DistributionSpec::from_parts(
        format!("virtual({})", spec.name()),
        lo,
        phi_hi,
        mean,
        cdf,
        pdf,
        quantile,
        None,
    )
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
    fn virtual_cost_examples() {
        let exp = DistributionSpec::exponential();
        assert_eq!(virtual_cost(&exp, 0.0).unwrap(), 0.0);
        // φ(c) = c + e^c − 1 for the exponential, so φ(1) = e.
        assert!(rel(virtual_cost(&exp, 1.0).unwrap(), std::f64::consts::E) < 1e-12);

        let uni = DistributionSpec::uniform(0.0, 1.0).unwrap();
        assert!(rel(virtual_cost(&uni, 0.5).unwrap(), 1.0) < 1e-14);
    }

    #[test]
    fn regularity_of_builtins() {
        assert!(
            check_regularity(&DistributionSpec::exponential(), 512)
                .unwrap()
                .is_regular
        );
        assert!(
            check_regularity(&DistributionSpec::uniform(0.0, 1.0).unwrap(), 512)
                .unwrap()
                .is_regular
        );
        // Equal-revenue: φ(c) = c + (1 − 1/c)c² is monotone on (1, ∞).
        assert!(
            check_regularity(&DistributionSpec::equal_revenue(), 512)
                .unwrap()
                .is_regular
        );
    }

    #[test]
    fn inverse_round_trip() {
        let exp = DistributionSpec::exponential();
        for &c in &[0.1, 0.5, 1.0, 2.0] {
            let v = virtual_cost(&exp, c).unwrap();
            let back = virtual_cost_inverse(&exp, v, 50.0).unwrap();
            assert!(rel(back, c) < 1e-9, "{back} vs {c}");
        }
    }

    #[test]
    fn posted_prices_for_uniform() {
        // φ(c) = 2c maps uniform[0,1] to uniform[0,2]; the virtual-space
        // thresholds are (G_Y(2), G_Y(1), ∞) = (0.75, 1, ∞), so the posted
        // prices halve them.
        let uni = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let prices = posted_price_schedule(&uni, 3, &CFG).unwrap();
        assert!(rel(prices.thresholds()[0], 0.375) < 1e-6);
        assert!(rel(prices.thresholds()[1], 0.5) < 1e-6);
        assert_eq!(prices.thresholds()[2], f64::INFINITY);
    }

    #[test]
    fn unbounded_support_is_unsupported() {
        let exp = DistributionSpec::exponential();
        assert!(matches!(
            posted_price_schedule(&exp, 3, &CFG),
            Err(Error::InfiniteMean(_))
        ));
    }

    /// Two uniform lumps joined by a thin bridge: F(c)/f(c) balloons on
    /// the bridge and collapses when the density jumps back up, so the
    /// virtual cost is far from monotone.
    fn lumpy_spec() -> DistributionSpec {
        use std::sync::Arc;
        let cdf = |x: f64| -> f64 {
            if x <= 0.0 {
                0.0
            } else if x <= 0.1 {
                5.0 * x
            } else if x <= 0.9 {
                0.5 + 0.0125 * (x - 0.1)
            } else if x <= 1.0 {
                0.51 + 4.9 * (x - 0.9)
            } else {
                1.0
            }
        };
        let pdf = |x: f64| -> f64 {
            if (0.0..=0.1).contains(&x) {
                5.0
            } else if x <= 0.9 {
                0.0125
            } else if x <= 1.0 {
                4.9
            } else {
                0.0
            }
        };
        let quantile = |u: f64| -> f64 {
            if u <= 0.5 {
                u / 5.0
            } else if u <= 0.51 {
                0.1 + (u - 0.5) / 0.0125
            } else {
                0.9 + (u - 0.51) / 4.9
            }
        };
        DistributionSpec::from_parts(
            "lumpy",
            0.0,
            1.0,
            0.4955,
            Arc::new(cdf),
            Arc::new(pdf),
            Arc::new(quantile),
            None,
        )
        .unwrap()
    }

    #[test]
    fn non_regular_spec_is_detected_and_rejected() {
        let spec = lumpy_spec();
        let check = check_regularity(&spec, 512).unwrap();
        assert!(!check.is_regular);
        assert!(check.witness.is_some());
        assert!(matches!(
            posted_price_schedule(&spec, 3, &CFG),
            Err(Error::NotRegular(_))
        ));
    }
}
