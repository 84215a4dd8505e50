//! Densities of order statistics.

use crate::dist::{ln_one_minus_exp_neg, Pieces};
use crate::error::{BwError, Result};
use crate::params::BwParams;
use crate::special::ln_order_coefficient;

/// Log density of the `i`-th smallest of `m` iid draws at `x`.
pub fn order_statistic_log_pdf(p: &BwParams, i: usize, m: usize, x: f64) -> Result<f64> {
    if i < 1 || i > m {
        return Err(BwError::domain(format!("order index must satisfy 1 <= i <= m, got i = {i}, m = {m}")));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(BwError::domain(format!("x must be finite and > 0, got {x}")));
    }
    let pc = Pieces::new(p, x);
    let ln_s = pc.log_survival();
    let mut out = ln_order_coefficient(i, m) + pc.log_pdf();
    if i > 1 {
        out += (i - 1) as f64 * ln_one_minus_exp_neg(-ln_s);
    }
    if i < m {
        out += (m - i) as f64 * ln_s;
    }
    Ok(out)
}

/// Density of the `i`-th smallest of `m` iid draws at `x`.
pub fn order_statistic_pdf(p: &BwParams, i: usize, m: usize, x: f64) -> Result<f64> {
    Ok(order_statistic_log_pdf(p, i, m, x)?.exp())
}
