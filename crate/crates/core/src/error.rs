//! Shared error type for all numerical operations.

use std::fmt;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside an operation's domain.
    Domain(String),
    /// A series or iteration failed to converge within its budget.
    Convergence(String),
    /// A semi-infinite integral failed to settle within the subdivision budget.
    Divergence(String),
    /// The distribution has no finite mean, so no finite-cost stopping policy
    /// exists and the competitive ratio is unbounded.
    InfiniteMean(String),
    /// The distribution carries no Puiseux head, analytic or estimated.
    MissingHead(String),
    /// Log-log fit of the cumulative hazard failed.
    Fit(String),
    /// The fitted power law leaves too much residual variance to trust.
    DegenerateFit { residual: f64, bound: f64 },
    /// The density vanished at a point where a positive value was required.
    ZeroDensity(f64),
    /// The virtual-cost map decreases somewhere; the payload is a witness.
    NotRegular(f64),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Convergence(msg) => write!(f, "convergence failure: {msg}"),
            Error::Divergence(msg) => write!(f, "integral divergence: {msg}"),
            Error::InfiniteMean(msg) => write!(f, "infinite mean: {msg}"),
            Error::MissingHead(msg) => write!(f, "missing Puiseux head: {msg}"),
            Error::Fit(msg) => write!(f, "fit error: {msg}"),
            Error::DegenerateFit { residual, bound } => {
                write!(
                    f,
                    "degenerate fit: residual variance {residual:e} exceeds {bound:e}"
                )
            }
            Error::ZeroDensity(x) => write!(f, "zero density at {x}"),
            Error::NotRegular(x) => {
                write!(
                    f,
                    "distribution is not regular: virtual cost decreases near {x}"
                )
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
