//! Quantiles by bracketed root finding, and inverse-transform sampling.

use rayon::prelude::*;

use crate::dist::{cdf, log_survival};
use crate::error::{BwError, Result};
use crate::params::BwParams;
use crate::rng::SeededStream;

/// Outcome of one quantile solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileSolveReport {
    pub x: f64,
    pub iterations: usize,
    /// `cdf(x) - u`
    pub residual: f64,
    /// Initial bracket; `bracket.0 < x < bracket.1` unless `u = 0`.
    pub bracket: (f64, f64),
}

const MAX_DOUBLINGS: usize = 200;
const MAX_ITER: usize = 200;
const X_TOL: f64 = 1e-12;
const G_TOL: f64 = 1e-10;
/// Above this level the log-survival residual is better conditioned.
const LOG_FORM_THRESHOLD: f64 = 1.0 - 1e-8;

/// Solves `F(x) = u` and reports the solver trace.
pub fn quantile_report(p: &BwParams, u: f64) -> Result<QuantileSolveReport> {
    if !(0.0..1.0).contains(&u) {
        return Err(BwError::Domain(format!("u must lie in [0, 1), got {u}")));
    }
    if u == 0.0 {
        return Ok(QuantileSolveReport {
            x: 0.0,
            iterations: 0,
            residual: 0.0,
            bracket: (0.0, 0.0),
        });
    }
    let ln_tail = (-u).ln_1p();
    // Residual as a function of t = ln x; increasing in t in both forms.
    let g = |t: f64| -> f64 {
        let x = t.exp();
        if x == 0.0 {
            return if u >= LOG_FORM_THRESHOLD { f64::NEG_INFINITY } else { -u };
        }
        if !x.is_finite() {
            return if u >= LOG_FORM_THRESHOLD { f64::INFINITY } else { 1.0 - u };
        }
        let ln_s = log_survival(p, x).expect("x > 0");
        if u >= LOG_FORM_THRESHOLD {
            ln_tail - ln_s
        } else {
            -ln_s.exp_m1() - u
        }
    };

    // The Weibull quantile bounds the answer from above: S_BW <= S_Weibull.
    let x0 = p.lambda() * (-ln_tail).powf(1.0 / p.beta());
    let mut t_hi = x0.ln();
    let mut g_hi = g(t_hi);
    let mut step = 1.0;
    let mut doublings = 0;
    while g_hi < 0.0 {
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(BwError::Convergence(format!("no upper bracket for u = {u}")));
        }
        t_hi += step;
        step *= 2.0;
        g_hi = g(t_hi);
    }
    let mut t_lo = t_hi - 1.0;
    let mut g_lo = g(t_lo);
    step = 2.0;
    while g_lo > 0.0 {
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(BwError::Convergence(format!("no lower bracket for u = {u}")));
        }
        t_lo -= step;
        step *= 2.0;
        g_lo = g(t_lo);
    }
    let bracket = (t_lo.exp(), t_hi.exp());
    let (t, iterations) = brent(&g, t_lo, t_hi, g_lo, g_hi)?;
    let x = t.exp();
    let residual = cdf(p, x)? - u;
    Ok(QuantileSolveReport {
        x,
        iterations,
        residual,
        bracket,
    })
}

/// Brent's method on `t = ln x`.
fn brent<G: Fn(f64) -> f64>(
    g: &G,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
) -> Result<(f64, usize)> {
    if fa == 0.0 {
        return Ok((a, 0));
    }
    if fb == 0.0 {
        return Ok((b, 0));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let x = b.exp();
        let tol = 2.0 * f64::EPSILON * b.abs().max(1.0);
        let m = 0.5 * (c - b);
        let width_x = (c.exp() - x).abs();
        // the x-width rule alone cannot guarantee the residual bound for
        // quantiles far below 1, so it only stops once that bound also holds
        if fb == 0.0
            || m.abs() <= tol
            || fb.abs() <= 1e-3 * G_TOL
            || (width_x <= X_TOL && fb.abs() <= G_TOL)
        {
            return Ok((b, iter));
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut pnum, mut q);
            if a == c {
                pnum = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                pnum = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if pnum > 0.0 {
                q = -q;
            } else {
                pnum = -pnum;
            }
            if 2.0 * pnum < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = pnum / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = g(b);
        if fb.is_nan() {
            return Err(BwError::Convergence("residual evaluated to NaN".into()));
        }
    }
    Err(BwError::Convergence(format!(
        "quantile solve did not converge in {MAX_ITER} iterations"
    )))
}

/// Quantile function; `quantile(p, 0) = 0`.
pub fn quantile(p: &BwParams, u: f64) -> Result<f64> {
    Ok(quantile_report(p, u)?.x)
}

pub fn median(p: &BwParams) -> Result<f64> {
    quantile(p, 0.5)
}

/// `n` variates by inverse transform of the uniforms of `stream`.
pub fn sample(p: &BwParams, n: usize, stream: SeededStream) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(BwError::domain("sample size must be at least 1"));
    }
    let u: Vec<f64> = stream.uniforms().take(n).collect();
    u.par_iter().map(|&u| quantile(p, u)).collect()
}

/// `n` variates drawn as the minimum of independent Burr III and Weibull
/// variates, which has the same law as inverse-transform sampling because the
/// survival is the product of the component survivals. Consumes two uniforms
/// per variate.
pub fn sample_competing_risks(p: &BwParams, n: usize, stream: SeededStream) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(BwError::domain("sample size must be at least 1"));
    }
    let (c, k, lambda, beta) = (p.c(), p.k(), p.lambda(), p.beta());
    let mut u = stream.uniforms();
    Ok((0..n)
        .map(|_| {
            let (u1, u2) = (u.next().unwrap(), u.next().unwrap());
            let burr = (-(-u1.ln() / k).exp_m1().ln() / c).exp();
            let weibull = lambda * (-u2.ln()).powf(1.0 / beta);
            burr.min(weibull)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: f64, k: f64, l: f64, b: f64) -> BwParams {
        BwParams::new(c, k, l, b).unwrap()
    }

    #[test]
    fn competing_risks_matches_inverse_transform_in_distribution() {
        let q = p(2.0, 3.0, 0.4, 0.8);
        let n = 20000;
        let mut a = sample_competing_risks(&q, n, SeededStream::new(3, 0)).unwrap();
        let mut b = sample(&q, n, SeededStream::new(4, 0)).unwrap();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        // two-sample KS at the 1% level
        let (mut i, mut j, mut d) = (0, 0, 0.0f64);
        while i < n && j < n {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 - j as f64).abs() / n as f64);
        }
        assert!(d < 1.63 * (2.0 / n as f64).sqrt(), "{d}");
        assert!(sample_competing_risks(&q, 0, SeededStream::new(1, 1)).is_err());
    }

    #[test]
    fn table_examples() {
        assert!((quantile(&p(3.0, 1.0, 2.0, 0.4), 0.5).unwrap() - 0.50091).abs() < 5e-4);
        assert!((quantile(&p(0.5, 1.2, 1.0, 0.8), 0.9).unwrap() - 1.78102).abs() < 5e-4);
        assert!((median(&p(1.8, 1.3, 0.6, 3.0)).unwrap() - 0.49027).abs() < 5e-4);
        assert_eq!(quantile(&p(1.0, 1.0, 1.0, 1.0), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_levels() {
        let q = p(1.0, 1.0, 1.0, 1.0);
        for u in [-0.1, 1.0, 1.5, f64::NAN] {
            assert!(matches!(quantile(&q, u), Err(BwError::Domain(_))));
        }
        assert!(matches!(
            sample(&q, 0, SeededStream::new(1, 0)),
            Err(BwError::Domain(_))
        ));
    }

    #[test]
    fn report_invariants() {
        let q = p(0.1, 1.7, 1.0, 1.0);
        for u in [1e-9, 0.001, 0.1, 0.5, 0.99, 1.0 - 1e-9, 1.0 - 1e-13] {
            let r = quantile_report(&q, u).unwrap();
            assert!(r.bracket.0 < r.x && r.x < r.bracket.1, "{r:?}");
            assert!(r.residual.abs() <= 1e-10, "u={u} {r:?}");
        }
    }

    #[test]
    fn extreme_lower_tail() {
        // c*k small puts quantiles many decades below 1
        let q = p(0.1, 0.2, 1.0, 1.0);
        let x = quantile(&q, 1e-6).unwrap();
        assert!(x > 0.0 && x < 1e-20, "{x}");
        assert!((cdf(&q, x).unwrap() - 1e-6).abs() < 1e-10);
    }
}
