//! Density, distribution, survival and hazard functions of the Burr III-Weibull
//! model and of its two components.
//!
//! The model's survival is the product of the Burr III and Weibull survivals,
//! so everything is evaluated from three log-space pieces: `ln x`,
//! `L = ln(1 + x^-c)` (so the Burr III cdf is `exp(-k L)`), and the Weibull
//! cumulative hazard `(x/lambda)^beta`.

use crate::error::{BwError, Result};
use crate::params::{BwParams, SubModelParams};

/// `ln(1 + e^t)` without overflow for large `t`.
pub(crate) fn softplus(t: f64) -> f64 {
    if t > 36.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// `ln(1 - e^-z)` for `z >= 0`.
pub(crate) fn ln_one_minus_exp_neg(z: f64) -> f64 {
    if z <= 0.0 {
        f64::NEG_INFINITY
    } else if z < std::f64::consts::LN_2 {
        (-(-z).exp_m1()).ln()
    } else {
        (-(-z).exp()).ln_1p()
    }
}

/// `ln(e^a + e^b)`.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Log-space building blocks at one abscissa.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Pieces {
    /// `ln(1 - (1 + x^-c)^-k)`, the log Burr III survival
    pub ln_burr_surv: f64,
    /// `(x/lambda)^beta`
    pub z: f64,
    /// log of the Burr III density term `c k x^(-c-1) (1+x^-c)^(-k-1)`
    pub ln_a: f64,
    /// log of `(beta/lambda^beta) x^(beta-1) (1 - (1+x^-c)^-k)`
    pub ln_b: f64,
}

impl Pieces {
    pub(crate) fn new(p: &BwParams, x: f64) -> Self {
        Self::from_ln_x(p, x.ln())
    }

    pub(crate) fn from_ln_x(p: &BwParams, ln_x: f64) -> Self {
        let (c, k, lambda, beta) = (p.c(), p.k(), p.lambda(), p.beta());
        let ln_y = -c * ln_x;
        let l = softplus(ln_y);
        let ln_burr_surv = burr_log_survival(ln_y, l, k);
        let z = (beta * (ln_x - lambda.ln())).exp();
        let ln_a = c.ln() + k.ln() - (k + 1.0) * l - (c + 1.0) * ln_x;
        let ln_b = beta.ln() - beta * lambda.ln() + (beta - 1.0) * ln_x + ln_burr_surv;
        Pieces {
            ln_burr_surv,
            z,
            ln_a,
            ln_b,
        }
    }

    pub(crate) fn log_pdf(&self) -> f64 {
        -self.z + log_add_exp(self.ln_a, self.ln_b)
    }

    pub(crate) fn log_survival(&self) -> f64 {
        self.ln_burr_surv - self.z
    }
}

/// `ln(1 - exp(-k l))`, switching to `ln k + ln y` once `y = x^-c` is below
/// the representable range.
fn burr_log_survival(ln_y: f64, l: f64, k: f64) -> f64 {
    if ln_y < -700.0 {
        k.ln() + ln_y
    } else {
        ln_one_minus_exp_neg(k * l)
    }
}

fn check_nonneg(x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(BwError::Domain(format!("x must be finite and >= 0, got {x}")))
    }
}

fn check_pos(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(BwError::Domain(format!("x must be finite and > 0, got {x}")))
    }
}

/// Natural log of the survival function; `0` at `x = 0`.
pub fn log_survival(p: &BwParams, x: f64) -> Result<f64> {
    check_nonneg(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(Pieces::new(p, x).log_survival())
}

/// Reliability `S(x) = (1 - (1+x^-c)^-k) exp(-(x/lambda)^beta)`.
///
/// Values below the smallest positive normal are flushed to `0`.
pub fn survival(p: &BwParams, x: f64) -> Result<f64> {
    let s = log_survival(p, x)?.exp();
    Ok(if s < f64::MIN_POSITIVE { 0.0 } else { s })
}

/// Distribution function `F(x) = 1 - S(x)`.
pub fn cdf(p: &BwParams, x: f64) -> Result<f64> {
    let ln_s = log_survival(p, x)?;
    Ok(-ln_s.exp_m1())
}

/// Density.
pub fn pdf(p: &BwParams, x: f64) -> Result<f64> {
    Ok(log_pdf(p, x)?.exp())
}

/// Log-density, evaluated entirely in log space so that it stays finite where
/// the density itself underflows.
pub fn log_pdf(p: &BwParams, x: f64) -> Result<f64> {
    check_pos(x)?;
    Ok(Pieces::new(p, x).log_pdf())
}

/// Log-density as a function of `t = ln x`; defined for every finite `t`,
/// including abscissae that underflow as `e^t`.
pub fn log_pdf_at_ln_x(p: &BwParams, ln_x: f64) -> f64 {
    Pieces::from_ln_x(p, ln_x).log_pdf()
}

/// Log-survival as a function of `t = ln x`.
pub fn log_survival_at_ln_x(p: &BwParams, ln_x: f64) -> f64 {
    Pieces::from_ln_x(p, ln_x).log_survival()
}

/// Hazard rate `f(x) / S(x)`.
pub fn hazard(p: &BwParams, x: f64) -> Result<f64> {
    check_pos(x)?;
    let pieces = Pieces::new(p, x);
    let ln_s = pieces.log_survival();
    if ln_s.exp() < f64::MIN_POSITIVE {
        return Err(BwError::Range(format!("survival underflows at x = {x}")));
    }
    Ok((pieces.log_pdf() - ln_s).exp())
}

/// Reversed hazard rate `f(x) / F(x)`.
pub fn reversed_hazard(p: &BwParams, x: f64) -> Result<f64> {
    check_pos(x)?;
    let pieces = Pieces::new(p, x);
    let f = -pieces.log_survival().exp_m1();
    if f <= 0.0 {
        return Err(BwError::Range(format!("cdf is zero at x = {x}")));
    }
    Ok(pieces.log_pdf().exp() / f)
}

/// Cumulative distribution of a component model.
pub fn submodel_cdf(sp: &SubModelParams, x: f64) -> Result<f64> {
    check_nonneg(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(match *sp {
        SubModelParams::BurrIII { c, k } => (-k * softplus(-c * x.ln())).exp(),
        SubModelParams::Weibull { lambda, beta } => -(-(x / lambda).powf(beta)).exp_m1(),
    })
}

/// Density of a component model.
pub fn submodel_pdf(sp: &SubModelParams, x: f64) -> Result<f64> {
    Ok(submodel_log_pdf(sp, x)?.exp())
}

pub fn submodel_log_pdf(sp: &SubModelParams, x: f64) -> Result<f64> {
    check_pos(x)?;
    let ln_x = x.ln();
    Ok(match *sp {
        SubModelParams::BurrIII { c, k } => {
            c.ln() + k.ln() - (k + 1.0) * softplus(-c * ln_x) - (c + 1.0) * ln_x
        }
        SubModelParams::Weibull { lambda, beta } => {
            let t = ln_x - lambda.ln();
            beta.ln() - lambda.ln() + (beta - 1.0) * t - (beta * t).exp()
        }
    })
}

/// Survival of a component model.
pub fn submodel_survival(sp: &SubModelParams, x: f64) -> Result<f64> {
    check_nonneg(x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(match *sp {
        SubModelParams::BurrIII { c, k } => {
            let ln_y = -c * x.ln();
            burr_log_survival(ln_y, softplus(ln_y), k).exp()
        }
        SubModelParams::Weibull { lambda, beta } => (-(x / lambda).powf(beta)).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: f64, k: f64, l: f64, b: f64) -> BwParams {
        BwParams::new(c, k, l, b).unwrap()
    }

    #[test]
    fn unit_parameters_by_hand() {
        let q = p(1.0, 1.0, 1.0, 1.0);
        let e1 = (-1.0f64).exp();
        assert!((cdf(&q, 1.0).unwrap() - (1.0 - 0.5 * e1)).abs() < 1e-15);
        assert!((survival(&q, 1.0).unwrap() - 0.5 * e1).abs() < 1e-15);
        // f(1) = e^-1 [1 * 1 * 2^-2 + 1 * (1 - 1/2)]
        assert!((pdf(&q, 1.0).unwrap() - e1 * 0.75).abs() < 1e-15);
        assert!((log_pdf(&q, 1.0).unwrap() - pdf(&q, 1.0).unwrap().ln()).abs() < 1e-12);
    }

    #[test]
    fn endpoints_and_domain() {
        let q = p(3.0, 1.0, 2.0, 0.4);
        assert_eq!(cdf(&q, 0.0).unwrap(), 0.0);
        assert_eq!(survival(&q, 0.0).unwrap(), 1.0);
        assert!(matches!(cdf(&q, -1.0), Err(BwError::Domain(_))));
        assert!(matches!(cdf(&q, f64::INFINITY), Err(BwError::Domain(_))));
        assert!(matches!(pdf(&q, 0.0), Err(BwError::Domain(_))));
        assert!(matches!(log_pdf(&q, -2.0), Err(BwError::Domain(_))));
        assert!(matches!(hazard(&q, 0.0), Err(BwError::Domain(_))));
        assert!(matches!(submodel_cdf(&q.weibull(), -1.0), Err(BwError::Domain(_))));
        assert!(matches!(submodel_pdf(&q.burr(), 0.0), Err(BwError::Domain(_))));
    }

    #[test]
    fn median_from_quantile_table() {
        let q = p(3.0, 1.0, 2.0, 0.4);
        assert!((cdf(&q, 0.50091).unwrap() - 0.5).abs() < 5e-4);
        assert!((survival(&q, 1.46385).unwrap() - 0.1).abs() < 5e-4);
    }

    #[test]
    fn pdf_is_cdf_derivative() {
        let q = p(3.0, 1.0, 2.0, 0.4);
        let x = 0.5;
        let h = 1e-6;
        let fd = (cdf(&q, x + h).unwrap() - cdf(&q, x - h).unwrap()) / (2.0 * h);
        let f = pdf(&q, x).unwrap();
        assert!(((f - fd) / f).abs() < 1e-6, "{f} vs {fd}");
    }

    #[test]
    fn near_zero_is_finite() {
        let q = p(1.0, 1.0, 1.0, 1.0);
        let f = pdf(&q, 1e-12).unwrap();
        assert!(f.is_finite() && f >= 0.0);
        let q = p(3.0, 1.0, 2.0, 0.4);
        let lp = log_pdf(&q, 1e-300).unwrap();
        // near zero the Weibull term dominates: ln(beta/lambda^beta) + (beta-1) ln x
        let approx = 0.4f64.ln() - 0.4 * 2.0f64.ln() - 0.6 * 1e-300f64.ln();
        assert!(lp.is_finite());
        assert!((lp - approx).abs() < 1e-9, "{lp} vs {approx}");
        let big = log_pdf(&q, 1e200).unwrap();
        assert!(big.is_finite() || big == f64::NEG_INFINITY);
    }

    #[test]
    fn hazard_and_reversed_hazard_ratios() {
        for q in [p(1.0, 1.0, 1.0, 1.0), p(3.0, 1.0, 2.0, 0.4)] {
            for x in [0.5, 1.0] {
                let f = pdf(&q, x).unwrap();
                let h = hazard(&q, x).unwrap();
                assert!((h - f / survival(&q, x).unwrap()).abs() < 1e-12 * h.max(1.0));
                let r = reversed_hazard(&q, x).unwrap();
                assert!((r - f / cdf(&q, x).unwrap()).abs() < 1e-12 * r.max(1.0));
            }
        }
        let q = p(3.0, 1.0, 2.0, 0.4);
        let r = reversed_hazard(&q, 0.50091).unwrap();
        assert!((r - pdf(&q, 0.50091).unwrap() / 0.5).abs() < 1e-3);
    }

    #[test]
    fn hazard_tail_is_weibull() {
        // survival underflows at 10^3 lambda unless beta < 1
        for q in [p(0.5, 1.2, 1.0, 0.8), p(1.0, 1.0, 0.2, 0.9), p(2.0, 3.0, 0.4, 0.8)] {
            let x = 1e3 * q.lambda();
            let w = q.beta() / q.lambda().powf(q.beta()) * x.powf(q.beta() - 1.0);
            let h = hazard(&q, x).unwrap();
            assert!(((h - w) / w).abs() < 1e-2, "{h} vs {w}");
        }
    }

    #[test]
    fn hazard_is_sum_of_component_hazards() {
        // with beta < 1 the Burr III hazard (~ c/x) decays as slowly as the
        // Weibull one, so only the sum identity holds in the tail
        let q = p(3.0, 1.0, 2.0, 0.4);
        for &x in &[0.1, 1.0, 2000.0] {
            let comp = |sp: &SubModelParams| {
                submodel_pdf(sp, x).unwrap() / submodel_survival(sp, x).unwrap()
            };
            let sum = comp(&q.burr()) + comp(&q.weibull());
            let h = hazard(&q, x).unwrap();
            assert!(((h - sum) / sum).abs() < 1e-12, "{h} vs {sum}");
        }
    }

    #[test]
    fn hazard_range_error_when_survival_underflows() {
        let q = p(1.0, 1.0, 1.0, 3.0);
        assert_eq!(survival(&q, 20.0).unwrap(), 0.0);
        assert!(matches!(hazard(&q, 20.0), Err(BwError::Range(_))));
    }

    #[test]
    fn reversed_hazard_grows_near_zero() {
        let q = p(3.0, 1.0, 2.0, 0.4);
        let vals: Vec<f64> = [1e-1, 1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&x| reversed_hazard(&q, x).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]), "{vals:?}");
    }

    #[test]
    fn submodels_by_hand() {
        let w = SubModelParams::weibull(1.0, 1.0).unwrap();
        let b = SubModelParams::burr(1.0, 1.0).unwrap();
        let e1 = (-1.0f64).exp();
        assert!((submodel_cdf(&w, 1.0).unwrap() - (1.0 - e1)).abs() < 1e-15);
        assert!((submodel_pdf(&w, 1.0).unwrap() - e1).abs() < 1e-15);
        assert!((submodel_cdf(&b, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((submodel_pdf(&b, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(submodel_survival(&b, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn survival_factorizes() {
        let q = p(0.5, 1.2, 1.0, 0.8);
        for &x in &[1e-6, 0.01, 0.3, 1.0, 2.5, 10.0] {
            let s = survival(&q, x).unwrap();
            let prod = submodel_survival(&q.burr(), x).unwrap()
                * submodel_survival(&q.weibull(), x).unwrap();
            assert!(((s - prod) / prod).abs() < 1e-12);
        }
    }
}
