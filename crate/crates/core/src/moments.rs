//! Raw and central moments by quadrature, the truncated three-part moment
//! series, and the moment generating function.
//!
//! Quadrature on the log scale is the evaluator for every quantity here. The
//! series expansion swaps an exponential power series with an integral over
//! the half-line, and its beta-function arguments `1 - (r + m beta)/c` turn
//! non-positive after finitely many terms, so it is only available as a
//! diagnostic partial sum.

use crate::dist::log_pdf_at_ln_x;
use crate::error::{BwError, Result};
use crate::params::BwParams;
use crate::quad::{integrate_log_scale, QuadOptions};
use crate::special::{ln_beta, ln_gamma_pos, ln_rising_binomial};
use serde::{Deserialize, Serialize};

/// First six raw moments and the derived shape statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub raw_moments: [f64; 6],
    pub sd: f64,
    pub cv: f64,
    /// `E[(X - mu)^3] / sd^3`
    pub skewness: f64,
    /// `E[(X - mu)^4] / sd^4` (not excess)
    pub kurtosis: f64,
}

/// How a truncated series terminated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesDiagnostics {
    pub terms_used: usize,
    pub last_term_magnitude: f64,
    pub converged: bool,
    /// First summation index whose beta/gamma arguments leave the domain.
    pub validity_violated_at_term: Option<usize>,
    /// Heuristic bound on `|partial sum - true value|`: the sum of the
    /// magnitudes of the last retained term of each sub-series.
    pub truncation_error: f64,
}

const SERIES_REL_STOP: f64 = 1e-14;

pub(crate) fn quad_opts() -> QuadOptions {
    QuadOptions::default()
}

/// `exp(log_pdf + extra)`, treating a vanished density as exactly zero so that
/// an infinite weight cannot produce `NaN` far in the tail.
pub(crate) fn weighted_density(log_pdf: f64, extra: f64) -> f64 {
    if log_pdf == f64::NEG_INFINITY {
        0.0
    } else {
        (log_pdf + extra).exp()
    }
}

/// `∫_lo^hi x^r f(x) dx` for real `r` and `0 <= lo < hi <= inf`.
pub(crate) fn moment_integral(p: &BwParams, r: f64, lo: f64, hi: f64, opts: &QuadOptions) -> Result<f64> {
    if lo >= hi {
        return Ok(0.0);
    }
    let h = |t: f64| weighted_density(log_pdf_at_ln_x(p, t), (r + 1.0) * t);
    Ok(integrate_log_scale(h, lo.ln(), hi.ln(), opts)?.value)
}

/// `∫ (x - center)^j f(x) dx` over the half-line, split at `center`.
fn centered_moment(p: &BwParams, center: f64, j: i32, opts: &QuadOptions) -> Result<f64> {
    let ln_c = center.ln();
    let upper = integrate_log_scale(
        |t: f64| {
            let frac = center * (-t).exp();
            if frac >= 1.0 {
                return 0.0;
            }
            let ln_d = t + (-frac).ln_1p();
            weighted_density(log_pdf_at_ln_x(p, t), j as f64 * ln_d + t)
        },
        ln_c,
        f64::INFINITY,
        opts,
    )?
    .value;
    let lower = integrate_log_scale(
        |t: f64| {
            let d = center - t.exp();
            if d <= 0.0 {
                return 0.0;
            }
            weighted_density(log_pdf_at_ln_x(p, t), j as f64 * d.ln() + t)
        },
        f64::NEG_INFINITY,
        ln_c,
        opts,
    )?
    .value;
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    Ok(upper + sign * lower)
}

/// `E[X^r]` by adaptive quadrature; `r = 0` gives exactly 1.
pub fn raw_moment(p: &BwParams, r: u32) -> Result<f64> {
    if r == 0 {
        return Ok(1.0);
    }
    let v = moment_integral(p, r as f64, 0.0, f64::INFINITY, &quad_opts())?;
    if !v.is_finite() {
        return Err(BwError::Integration(format!("moment of order {r} is not finite")));
    }
    Ok(v)
}

/// Partial sum of the three-part series `A + B - C` for `E[X^r]`, valid for
/// `r < c`.
///
/// `A = k Σ_m (-1)^m / (λ^{mβ} m!) B(k + s_m, 1 - s_m)` with
/// `s_m = (r + mβ)/c`, summed while `1 - s_m > 0`;
/// `B = λ^r Γ(r/β + 1)`;
/// `C = Σ_t (-1)^t C(k+t-1, t) λ^{r - ct} Γ((r + β - ct)/β)`, summed while the
/// gamma argument stays positive.
pub fn raw_moment_series(p: &BwParams, r: u32, max_terms: usize) -> Result<(f64, SeriesDiagnostics)> {
    let (c, k, lambda, beta) = (p.c(), p.k(), p.lambda(), p.beta());
    let rf = r as f64;
    if rf >= c {
        return Err(BwError::Validity(format!(
            "series requires r < c (r = {r}, c = {c}); use quadrature"
        )));
    }
    let mut a_sum = 0.0;
    let mut last_a = 0.0;
    let mut violated = None;
    let mut converged = false;
    let mut terms = 0;
    let mut ln_fact = 0.0;
    for m in 0..max_terms {
        if m > 0 {
            ln_fact += (m as f64).ln();
        }
        let s = (rf + m as f64 * beta) / c;
        if 1.0 - s <= 0.0 {
            violated = Some(m);
            break;
        }
        let mag = (k.ln() - m as f64 * beta * lambda.ln() - ln_fact + ln_beta(k + s, 1.0 - s)).exp();
        let term = if m % 2 == 0 { mag } else { -mag };
        a_sum += term;
        last_a = mag;
        terms += 1;
        if mag < SERIES_REL_STOP * a_sum.abs() {
            converged = true;
            break;
        }
    }

    let b_term = lambda.powf(rf) * ln_gamma_pos(rf / beta + 1.0).exp();

    let mut c_sum = 0.0;
    let mut last_c = 0.0;
    let mut t = 0u32;
    while (t as usize) < max_terms {
        let arg = (rf + beta - c * t as f64) / beta;
        if arg <= 0.0 {
            break;
        }
        let mag = (ln_rising_binomial(k, t) + (rf - c * t as f64) * lambda.ln() + ln_gamma_pos(arg)).exp();
        c_sum += if t % 2 == 0 { mag } else { -mag };
        last_c = mag;
        t += 1;
        if mag < SERIES_REL_STOP * c_sum.abs() {
            break;
        }
    }

    let diag = SeriesDiagnostics {
        terms_used: terms,
        last_term_magnitude: last_a,
        converged,
        validity_violated_at_term: violated,
        truncation_error: last_a + last_c,
    };
    Ok((a_sum + b_term - c_sum, diag))
}

/// First six raw moments plus SD, CV, skewness and kurtosis.
///
/// Central moments are integrated directly about the mean rather than
/// assembled from raw moments.
pub fn moment_summary(p: &BwParams) -> Result<MomentSummary> {
    let mut raw = [0.0; 6];
    for (i, slot) in raw.iter_mut().enumerate() {
        *slot = raw_moment(p, i as u32 + 1)?;
    }
    let mu = raw[0];
    let opts = quad_opts();
    let var = centered_moment(p, mu, 2, &opts)?;
    let m3 = centered_moment(p, mu, 3, &opts)?;
    let m4 = centered_moment(p, mu, 4, &opts)?;
    let sd = var.max(0.0).sqrt();
    Ok(MomentSummary {
        raw_moments: raw,
        sd,
        cv: sd / mu,
        skewness: m3 / (sd * sd * sd),
        kurtosis: m4 / (var * var),
    })
}

/// `E[e^{tX}]` by quadrature.
///
/// Diverges for `t > 0` when `beta < 1` and for `t >= 1/lambda` when
/// `beta = 1`.
pub fn mgf(p: &BwParams, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(BwError::Domain(format!("t must be finite, got {t}")));
    }
    let beta = p.beta();
    if (beta < 1.0 && t > 0.0) || (beta == 1.0 && t >= 1.0 / p.lambda()) {
        return Err(BwError::Domain(format!(
            "mgf diverges at t = {t} for beta = {beta}, lambda = {}",
            p.lambda()
        )));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let h = |s: f64| weighted_density(log_pdf_at_ln_x(p, s), t * s.exp() + s);
    let v = integrate_log_scale(h, f64::NEG_INFINITY, f64::INFINITY, &quad_opts())?.value;
    if !v.is_finite() {
        return Err(BwError::Integration(format!("mgf overflows at t = {t}")));
    }
    Ok(v)
}
