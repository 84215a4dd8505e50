//! Rényi and Shannon entropies.

use crate::dist::log_pdf_at_ln_x;
use crate::error::{BwError, Result};
use crate::moments::{quad_opts, weighted_density, SeriesDiagnostics};
use crate::params::BwParams;
use crate::quad::integrate_log_scale;
use crate::special::ln_beta;

/// Near the origin the density behaves like `x^(min(ck, beta) - 1)`, so
/// `∫ f^v` converges at 0 iff `v (min(ck, beta) - 1) + 1 > 0`.
fn renyi_converges(p: &BwParams, v: f64) -> bool {
    let a = (p.c() * p.k()).min(p.beta());
    v * (a - 1.0) + 1.0 > 0.0
}

/// `ln ∫ f(x)^v dx`.
fn ln_power_integral(p: &BwParams, v: f64) -> Result<f64> {
    if !renyi_converges(p, v) {
        return Err(BwError::Integration(format!(
            "integral of f^{v} diverges at the origin for {p}"
        )));
    }
    let h = |t: f64| weighted_density(v * log_pdf_at_ln_x(p, t), t);
    let r = integrate_log_scale(h, f64::NEG_INFINITY, f64::INFINITY, &quad_opts())?;
    if !(r.value > 0.0 && r.value.is_finite()) {
        return Err(BwError::Integration(format!("∫ f^{v} evaluated to {}", r.value)));
    }
    Ok(r.value.ln())
}

/// `(1/(1-v)) ln ∫ f^v`, for `v > 0`, `v != 1`.
pub fn renyi_entropy(p: &BwParams, v: f64) -> Result<f64> {
    if !(v.is_finite() && v > 0.0) || v == 1.0 {
        return Err(BwError::Domain(format!("order must be > 0 and != 1, got {v}")));
    }
    Ok(ln_power_integral(p, v)? / (1.0 - v))
}

/// `-∫ f ln f`.
pub fn shannon_entropy(p: &BwParams) -> Result<f64> {
    let h = |t: f64| {
        let lp = log_pdf_at_ln_x(p, t);
        if lp == f64::NEG_INFINITY {
            0.0
        } else {
            -(lp + t).exp() * lp
        }
    };
    Ok(integrate_log_scale(h, f64::NEG_INFINITY, f64::INFINITY, &quad_opts())?.value)
}

/// Partial sum of the triple series for `∫ f^v` with integer `v >= 2`.
///
/// Expands `e^{-v (x/λ)^β}` in powers (index `j`) and the bracket binomially
/// (indices `p`, `w`); each term integrates to `B(a, b) / c` with
/// `a = (e+1)/c - g`, `b = -(e+1)/c`, where `e = βj + cp - cv - v + pβ` and
/// `g = kp + p - kv - v - kw`. Only terms with `a, b > 0` exist; the rest are
/// skipped and the first skipped `j` is reported.
pub fn renyi_power_integral_series(p: &BwParams, v: u32, max_j: usize) -> Result<(f64, SeriesDiagnostics)> {
    if v < 2 {
        return Err(BwError::Validity(format!("series needs integer order >= 2, got {v}")));
    }
    let (c, k, lambda, beta) = (p.c(), p.k(), p.lambda(), p.beta());
    let vf = v as f64;
    let mut sum = 0.0;
    let mut largest = 0.0f64;
    let mut terms = 0;
    let mut violated = None;
    let mut ln_j_fact = 0.0;
    for j in 0..=max_j {
        if j > 0 {
            ln_j_fact += (j as f64).ln();
        }
        let jf = j as f64;
        for pp in 0..=v {
            let pf = pp as f64;
            for w in 0..=pp {
                let wf = w as f64;
                let e = beta * jf + c * pf - c * vf - vf + pf * beta;
                let g = k * pf + pf - k * vf - vf - k * wf;
                let a = (e + 1.0) / c - g;
                let b = -(e + 1.0) / c;
                if a <= 0.0 || b <= 0.0 {
                    if violated.is_none() {
                        violated = Some(j);
                    }
                    continue;
                }
                let ln_mag = jf * vf.ln() + pf * beta.ln() - (beta * jf + pf * beta) * lambda.ln() - ln_j_fact
                    + (vf - pf) * (k * c).ln()
                    + ln_choose(v, pp)
                    + ln_choose(pp, w)
                    - c.ln()
                    + ln_beta(a, b);
                let mag = ln_mag.exp();
                sum += if (j + w as usize) % 2 == 0 { mag } else { -mag };
                largest = largest.max(mag);
                terms += 1;
            }
        }
    }
    Ok((
        sum,
        SeriesDiagnostics {
            terms_used: terms,
            last_term_magnitude: largest,
            converged: false,
            validity_violated_at_term: violated,
            truncation_error: largest,
        },
    ))
}

fn ln_choose(n: u32, k: u32) -> f64 {
    use crate::special::ln_gamma_pos;
    ln_gamma_pos(n as f64 + 1.0) - ln_gamma_pos(k as f64 + 1.0) - ln_gamma_pos((n - k) as f64 + 1.0)
}
