//! Gamma-family special functions.
//!
//! Everything the competitive-constant formulas need: Γ(x), the lower and
//! upper incomplete Gamma functions γ(s,x) and Γ(s,x), and the tight
//! constant λ(d) = (1+1/d)^{1/d} / Γ(1+1/d).
//!
//! γ(s,x) is evaluated through its alternating power series
//!
//! ```text
//! γ(s, x) = x^s Σ_{k≥0} (−x)^k / (k! (s+k))
//! ```
//!
//! for small x, and through a Lentz continued fraction for the regularized
//! upper function Q(s,x) once x is large enough that the series cancels
//! catastrophically.

use crate::error::{Error, Result};

/// Truncation control for the incomplete-Gamma series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Maximum number of series terms (or continued-fraction iterations).
    pub max_terms: usize,
    /// Absolute tolerance on the next term's contribution.
    pub abs_tolerance: f64,
}

impl SeriesConfig {
    pub fn new(max_terms: usize, abs_tolerance: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::Domain("max_terms must be at least 1".into()));
        }
        if !(abs_tolerance > 0.0) {
            return Err(Error::Domain(format!(
                "abs_tolerance must be positive, got {abs_tolerance}"
            )));
        }
        Ok(Self {
            max_terms,
            abs_tolerance,
        })
    }
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            max_terms: 500,
            abs_tolerance: 1e-14,
        }
    }
}

// Lanczos approximation, g = 7, 9 coefficients. Relative error is below
// 1e-14 on (0, 170], comfortably past the 12-digit target.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// Γ(x) for x > 0.
///
/// Small integer arguments take an exact factorial path so identities such
/// as Γ(3) = 2 hold bit-for-bit; everything else goes through Lanczos.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma requires x > 0, got {x}")));
    }
    if x == x.trunc() && x <= 170.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    if x < 0.5 {
        // Reflection keeps the Lanczos argument away from zero.
        return Ok(std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x)?));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok((2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return Ok((pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// Lower incomplete Gamma function γ(s, x) = ∫₀ˣ t^{s−1} e^{−t} dt.
///
/// The power series is used for x ≤ s + 1. Beyond that the alternating
/// terms grow like e^x before they cancel, so the complement is evaluated
/// instead: γ = Γ(s)·(1 − Q(s,x)) with Q from a continued fraction.
pub fn lower_incomplete_gamma(s: f64, x: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!(
            "lower_incomplete_gamma requires s > 0, got {s}"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "lower_incomplete_gamma requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= s + 1.0 {
        series_lower(s, x, cfg)
    } else {
        let q = upper_regularized_cf(s, x, cfg)?;
        Ok(gamma(s)? * (1.0 - q))
    }
}

/// Upper incomplete Gamma function Γ(s, x) = Γ(s) − γ(s, x).
pub fn upper_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    let cfg = SeriesConfig::default();
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!(
            "upper_incomplete_gamma requires s > 0, got {s}"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "upper_incomplete_gamma requires x >= 0, got {x}"
        )));
    }
    if x > s + 1.0 {
        // Direct evaluation avoids the Γ(s) − γ subtraction in the tail.
        return Ok(gamma(s)? * upper_regularized_cf(s, x, &cfg)?);
    }
    Ok(gamma(s)? - lower_incomplete_gamma(s, x, &cfg)?)
}

/// γ(s,x) by the alternating series, with compensated summation.
fn series_lower(s: f64, x: f64, cfg: &SeriesConfig) -> Result<f64> {
    // Contribution of term k is x^s (−x)^k / (k! (s+k)).
    let mut term = x.powf(s) / s;
    let mut sum = term;
    let mut comp = 0.0f64;
    for k in 0..cfg.max_terms {
        let kf = k as f64;
        term *= -x * (s + kf) / ((kf + 1.0) * (s + kf + 1.0));
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() < cfg.abs_tolerance && term.abs() < 1e-16 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Convergence(format!(
        "incomplete-gamma series did not reach {:e} within {} terms (s={s}, x={x})",
        cfg.abs_tolerance, cfg.max_terms
    )))
}

/// Regularized upper function Q(s,x) = Γ(s,x)/Γ(s) via the modified Lentz
/// continued fraction. Requires x > s + 1 for fast convergence.
fn upper_regularized_cf(s: f64, x: f64, cfg: &SeriesConfig) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let log_prefactor = -x + s * x.ln() - ln_gamma(s)?;
    let prefactor = log_prefactor.exp();

    let b0 = x + 1.0 - s;
    let mut f = if b0.abs() < TINY { TINY } else { b0 };
    let mut c = f;
    let mut d = 0.0f64;
    for n in 1..=cfg.max_terms {
        let nf = n as f64;
        let an = nf * (s - nf);
        let bn = x + 2.0 * nf + 1.0 - s;
        d = bn + an * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = bn + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(prefactor / f);
        }
    }
    Err(Error::Convergence(format!(
        "incomplete-gamma continued fraction stalled after {} iterations (s={s}, x={x})",
        cfg.max_terms
    )))
}

/// The tight competitive constant λ(d) = (1+1/d)^{1/d} / Γ(1+1/d).
///
/// λ(1) = 2 (the MHR factor) and λ is strictly decreasing, approaching
/// e/√(2π) as d → ∞ and +∞ as d → 0.
pub fn lambda_factor(d: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Domain(format!(
            "lambda_factor requires d > 0, got {d}"
        )));
    }
    let inv = 1.0 / d;
    Ok((1.0 + inv).powf(inv) / gamma(1.0 + inv)?)
}
