//! The shared rate kernel.
//!
//! All flow rates divide a count by the average of the two endpoint stocks, which
//! bounds them symmetrically in [-2, 2]. Because observation intervals differ in
//! length, each rate is also carried annualized (divided by the period P) and
//! normalized (annualized rate divided by its maximum 2/P). The P factors cancel
//! in the normalized form, which is always exactly half the raw rate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum RateError {
    #[error("both stocks are zero; the rate is undefined")]
    UndefinedRate,
    #[error("standard growth needs a positive starting stock")]
    ZeroBase,
    #[error("{value} is outside the domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },
}

impl RateError {
    pub fn code(&self) -> &'static str {
        match self {
            RateError::UndefinedRate => "UNDEFINED_RATE",
            RateError::ZeroBase => "ZERO_BASE",
            RateError::OutOfDomain { .. } => "OUT_OF_DOMAIN",
        }
    }
}

/// A rate in its three linked forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateRecord {
    /// Count over the average stock; within [-2, 2].
    pub raw: f64,
    /// `raw / period_years`.
    pub annualized: f64,
    /// `raw / 2`; within [-1, 1].
    pub normalized: f64,
    pub period_years: u32,
}

impl RateRecord {
    pub const fn zero(period_years: u32) -> Self {
        RateRecord {
            raw: 0.0,
            annualized: 0.0,
            normalized: 0.0,
            period_years,
        }
    }
}

/// Wraps a raw symmetric rate observed over `period_years` years.
pub fn make_rate(raw: f64, period_years: u32) -> RateRecord {
    assert!(period_years >= 1, "period must be at least one year");
    RateRecord {
        raw,
        annualized: raw / f64::from(period_years),
        normalized: raw / 2.0,
        period_years,
    }
}

/// Average of two stocks.
pub fn average(prev: u64, cur: u64) -> f64 {
    (prev as f64 + cur as f64) / 2.0
}

/// Symmetric growth between two stocks: change over the average stock.
pub fn symmetric_rate(prev: u64, cur: u64) -> Result<f64, RateError> {
    if prev == 0 && cur == 0 {
        return Err(RateError::UndefinedRate);
    }
    if prev == 0 {
        return Ok(2.0);
    }
    if cur == 0 {
        return Ok(-2.0);
    }
    Ok((cur as f64 - prev as f64) / average(prev, cur))
}

/// Ordinary growth `(cur - prev) / prev`, within [-1, ∞).
pub fn standard_growth(prev: u64, cur: u64) -> Result<f64, RateError> {
    if prev == 0 {
        return Err(RateError::ZeroBase);
    }
    Ok((cur as f64 - prev as f64) / prev as f64)
}

/// Maps standard growth to symmetric growth with the published transform
/// `2g / (1 + g)`. The formula divides by zero at `g = -1`, where -2 (the
/// extinction value of a symmetric rate) is returned by convention.
///
/// The image of `(-1, inf)` is `(-inf, 2)`: inputs below -0.5 map below -2.
/// This is not the identity linking the two rates of the same pair of stocks,
/// which is `2g / (2 + g)`; use [`symmetric_rate`] on counts when those exist.
pub fn symmetric_from_standard(g_std: f64) -> Result<f64, RateError> {
    if g_std.is_nan() || g_std < -1.0 {
        return Err(RateError::OutOfDomain {
            value: g_std,
            domain: "[-1, inf)",
        });
    }
    if g_std == -1.0 {
        return Ok(-2.0);
    }
    if g_std == f64::INFINITY {
        return Ok(2.0);
    }
    Ok(2.0 * g_std / (1.0 + g_std))
}

/// Inverse of [`symmetric_from_standard`] on `(-1, inf)`, `g / (2 - g)`. Accepts
/// the forward map's whole image, `(-inf, 2]`; +2 (a birth) maps to +inf.
pub fn standard_from_symmetric(g_sym: f64) -> Result<f64, RateError> {
    if g_sym.is_nan() || g_sym > 2.0 {
        return Err(RateError::OutOfDomain {
            value: g_sym,
            domain: "(-inf, 2]",
        });
    }
    if g_sym == 2.0 {
        return Ok(f64::INFINITY);
    }
    Ok(g_sym / (2.0 - g_sym))
}

/// `count / denominator` for the flow modules; zero when the denominator is zero.
pub(crate) fn share(count: u64, denominator: f64) -> f64 {
    if denominator > 0.0 {
        count as f64 / denominator
    } else {
        0.0
    }
}
