//! Partial expectations, mean deviations, Lorenz and Bonferroni curves and
//! conditional moments.

use crate::dist::{cdf, survival};
use crate::error::{BwError, Result};
use crate::moments::{moment_integral, quad_opts, raw_moment};
use crate::params::BwParams;
use crate::quad::QuadOptions;
use crate::quantile::{median, quantile};

// Lorenz convexity is checked on second differences, so these integrals are
// taken tighter than the library default.
fn tight() -> QuadOptions {
    QuadOptions {
        rel_tol: 1e-12,
        abs_tol: 1e-16,
        ..QuadOptions::default()
    }
}

fn check_threshold(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(BwError::Domain(format!("threshold must be finite and >= 0, got {t}")))
    }
}

/// `T(t) = ∫_t^∞ x f(x) dx`; `T(0)` is the mean.
pub fn partial_expectation(p: &BwParams, t: f64) -> Result<f64> {
    check_threshold(t)?;
    moment_integral(p, 1.0, t, f64::INFINITY, &quad_opts())
}

/// `∫_0^t x f(x) dx`.
pub fn lower_partial_expectation(p: &BwParams, t: f64) -> Result<f64> {
    check_threshold(t)?;
    moment_integral(p, 1.0, 0.0, t, &tight())
}

/// `E|X - mu| = 2 mu F(mu) - 2 mu + 2 T(mu)`.
pub fn mean_deviation_about_mean(p: &BwParams) -> Result<f64> {
    let mu = raw_moment(p, 1)?;
    Ok(2.0 * mu * cdf(p, mu)? - 2.0 * mu + 2.0 * partial_expectation(p, mu)?)
}

/// `E|X - M| = -mu + 2 T(M)` with `M` the median.
pub fn mean_deviation_about_median(p: &BwParams) -> Result<f64> {
    let mu = raw_moment(p, 1)?;
    let m = median(p)?;
    Ok(-mu + 2.0 * partial_expectation(p, m)?)
}

/// Lorenz curve `L(prob) = (1/mu) ∫_0^q x f(x) dx`, `q = F^{-1}(prob)`.
pub fn lorenz(p: &BwParams, prob: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(BwError::Domain(format!("probability must lie in [0, 1], got {prob}")));
    }
    if prob == 0.0 {
        return Ok(0.0);
    }
    if prob == 1.0 {
        return Ok(1.0);
    }
    let mu = moment_integral(p, 1.0, 0.0, f64::INFINITY, &tight())?;
    let q = quantile(p, prob)?;
    // the lower-tail integral avoids the cancellation in mu - T(q) for small prob
    Ok((lower_partial_expectation(p, q)? / mu).clamp(0.0, 1.0))
}

/// Bonferroni curve `B(prob) = L(prob) / prob`.
pub fn bonferroni(p: &BwParams, prob: f64) -> Result<f64> {
    if !(prob > 0.0 && prob <= 1.0) {
        return Err(BwError::Domain(format!("probability must lie in (0, 1], got {prob}")));
    }
    Ok(lorenz(p, prob)? / prob)
}

/// `E[X^r | X > t]`.
pub fn conditional_moment(p: &BwParams, r: u32, t: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(BwError::Domain(format!("threshold must be finite and > 0, got {t}")));
    }
    let s = survival(p, t)?;
    if s == 0.0 {
        return Err(BwError::Range(format!("survival underflows at t = {t}")));
    }
    Ok(moment_integral(p, r as f64, t, f64::INFINITY, &quad_opts())? / s)
}
