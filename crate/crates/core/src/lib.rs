//! Cost-minimization prophet inequalities.
//!
//! A decision maker watches I.I.D. costs X₁..X_n arrive one at a time and
//! must stop exactly once, competing with a prophet who always takes the
//! minimum, `β_n = E[min_i X_i]`. This crate computes both sides of that
//! comparison for any distribution specified through its hazard-rate
//! machinery:
//!
//! * [`prophet`] — the benchmark β_n = ∫ e^{−nH(u)} du, by adaptive
//!   quadrature or closed form.
//! * [`stopping`] — the optimal multi-threshold policy τ_i = G(n−i), its
//!   cost recurrence, and competitive-ratio curves converging to the tight
//!   constant λ(d₁) = (1+1/d₁)^{1/d₁}/Γ(1+1/d₁).
//! * [`single_threshold`] — the fixed-threshold policy and its
//!   Θ((ln n)^{1/d₁}) ratio.
//! * [`monte_carlo`] — reproducible stochastic validation of any schedule.
//! * [`counterexamples`] — the constructions where no bounded ratio exists.
//! * [`procurement`] — virtual costs φ(c) = c + F(c)/f(c) for posted-price
//!   reverse auctions.
//!
//! ```
//! use costprophet::{DistributionSpec, QuadratureConfig};
//!
//! let exp = DistributionSpec::exponential();
//! let cfg = QuadratureConfig::default();
//! let curve = costprophet::stopping::ratio_curve(&exp, 50, &cfg).unwrap();
//! let last = curve.rows.last().unwrap();
//! assert!(last.ratio > 1.8 && last.ratio < 2.0);
//! ```

// Parameter guards are written `!(x > 0.0)` so NaN fails them too;
// `x <= 0.0` would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod counterexamples;
pub mod distributions;
pub mod error;
pub mod monte_carlo;
pub mod procurement;
pub mod prophet;
pub mod quadrature;
pub mod single_threshold;
pub mod special;
pub mod stopping;

pub use counterexamples::{GapReport, Regime};
pub use distributions::{DistributionSpec, MhrCheck, PuiseuxHead};
pub use error::{Error, Result};
pub use monte_carlo::SimulationReport;
pub use quadrature::QuadratureConfig;
pub use single_threshold::SingleThresholdReport;
pub use special::SeriesConfig;
pub use stopping::{RatioCurve, RatioRow, ThresholdSchedule};
