//! Adaptive Gauss–Kronrod quadrature on finite intervals.
//!
//! A 15-point Kronrod rule with embedded 7-point Gauss rule supplies both
//! the estimate and a per-interval error; the interval with the largest
//! error is split until the summed error meets the relative tolerance.
//! Semi-infinite integrals (the prophet benchmark's tail) are handled by
//! the callers through window doubling, see [`crate::prophet`].

use crate::error::{Error, Result};

/// Controls for the adaptive integrator and its semi-infinite drivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Target relative error of the integral.
    pub rel_tolerance: f64,
    /// Budget: maximum interval splits, and maximum window doublings when
    /// chasing a tail toward +∞.
    pub max_subdivisions: u32,
    /// Tail cutoff: the upper integration limit is pushed to where the
    /// integrand has fallen below this fraction of the integral's scale.
    pub tail_cutoff_mass: f64,
}

impl QuadratureConfig {
    pub fn new(rel_tolerance: f64, max_subdivisions: u32, tail_cutoff_mass: f64) -> Result<Self> {
        if !(rel_tolerance > 0.0) {
            return Err(Error::Domain(format!(
                "rel_tolerance must be positive, got {rel_tolerance}"
            )));
        }
        if max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be at least 1".into()));
        }
        if !(tail_cutoff_mass > 0.0 && tail_cutoff_mass <= 1e-6) {
            return Err(Error::Domain(format!(
                "tail_cutoff_mass must lie in (0, 1e-6], got {tail_cutoff_mass}"
            )));
        }
        Ok(Self {
            rel_tolerance,
            max_subdivisions,
            tail_cutoff_mass,
        })
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tolerance: 1e-10,
            max_subdivisions: 60,
            tail_cutoff_mass: 1e-12,
        }
    }
}

// Kronrod-15 abscissae on [0, 1] (symmetric), Kronrod weights, and the
// embedded Gauss-7 weights. Standard QUADPACK constants, kept at their
// published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_27,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One Kronrod-15 pass over [a, b]: returns (estimate, error estimate).
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut result_gauss = WG[3] * f_center;
    let mut result_kronrod = WGK[7] * f_center;

    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let fsum = f(center - dx) + f(center + dx);
        result_kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * fsum;
        }
    }
    let estimate = result_kronrod * half;
    let err = ((result_kronrod - result_gauss) * half).abs();
    (estimate, err)
}

/// ∫ₐᵇ f(x) dx by adaptive bisection of the worst interval.
///
/// The integrand must be finite on (a, b); endpoints are never evaluated
/// exactly by the Kronrod nodes, so integrable endpoint behavior like
/// e^{−H(x)} → 0 at the top of a bounded support is fine.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_with_floor(f, a, b, cfg, 0.0)
}

/// [`integrate`] with an absolute error floor.
///
/// Deep-tail panels sit at the survival function's rounding noise, where no
/// relative tolerance is reachable; callers that only need such a panel to
/// absolute accuracy (it is negligible against the running total) pass the
/// accuracy they need as `abs_floor`.
pub fn integrate_with_floor<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
    abs_floor: f64,
) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "integrate requires finite bounds, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return Ok(-integrate_with_floor(f, b, a, cfg, abs_floor)?);
    }

    // Each split adds one interval; the budget scales the same way as the
    // window-doubling budget so one config covers both.
    let max_intervals = (cfg.max_subdivisions as usize).saturating_mul(40).max(64);

    let (est, err) = kronrod15(&f, a, b);
    let mut intervals = vec![(err, a, b, est)];
    let mut total = est;
    let mut total_err = err;

    while total_err > (cfg.rel_tolerance * total.abs()).max(abs_floor).max(1e-300) {
        if intervals.len() >= max_intervals {
            return Err(Error::Convergence(format!(
                "adaptive quadrature used {max_intervals} intervals without reaching \
                 relative tolerance {:e} on [{a}, {b}]",
                cfg.rel_tolerance
            )));
        }
        // Split the interval with the largest error.
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .0.total_cmp(&y.1 .0))
            .expect("interval list is never empty");
        let (e_old, lo, hi, v_old) = intervals.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Interval has collapsed to machine precision; accept its value.
            intervals.push((0.0, lo, hi, v_old));
            total_err -= e_old;
            continue;
        }
        let (v1, e1) = kronrod15(&f, lo, mid);
        let (v2, e2) = kronrod15(&f, mid, hi);
        total += v1 + v2 - v_old;
        total_err += e1 + e2 - e_old;
        intervals.push((e1, lo, mid, v1));
        intervals.push((e2, mid, hi, v2));
    }

    // Re-sum in one pass; the incremental total has accumulated rounding.
    Ok(intervals.iter().map(|&(_, _, _, v)| v).sum())
}
