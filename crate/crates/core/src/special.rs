//! Thin wrappers over the gamma-function family.

use statrs::function::gamma::ln_gamma;

/// `ln B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma_pos(x: f64) -> f64 {
    ln_gamma(x)
}

/// `ln C(a + t - 1, t)` for real `a > 0` and integer `t >= 0`.
pub fn ln_rising_binomial(a: f64, t: u32) -> f64 {
    ln_gamma(a + t as f64) - ln_gamma(t as f64 + 1.0) - ln_gamma(a)
}

/// `ln( m! / ((i-1)! (m-i)!) )`.
pub fn ln_order_coefficient(i: usize, m: usize) -> f64 {
    ln_gamma(m as f64 + 1.0) - ln_gamma(i as f64) - ln_gamma((m - i) as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((ln_beta(2.0, 3.0) - (1.0f64 / 12.0).ln()).abs() < 1e-13);
        assert!((ln_rising_binomial(2.5, 2) - (2.5f64 * 3.5 / 2.0).ln()).abs() < 1e-13);
        assert!((ln_order_coefficient(2, 5) - 20f64.ln()).abs() < 1e-12);
        assert!((ln_gamma_pos(5.0) - 24f64.ln()).abs() < 1e-12);
    }
}
