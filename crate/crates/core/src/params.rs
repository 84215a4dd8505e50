//! Parameter records for the Burr III-Weibull family and its two components.

use crate::error::{BwError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(BwError::Domain(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

/// Validated `(c, k, lambda, beta)`: Burr III shapes `c`, `k`; Weibull scale
/// `lambda` and shape `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BwParams {
    c: f64,
    k: f64,
    lambda: f64,
    beta: f64,
}

impl BwParams {
    pub fn new(c: f64, k: f64, lambda: f64, beta: f64) -> Result<Self> {
        check_positive("c", c)?;
        check_positive("k", k)?;
        check_positive("lambda", lambda)?;
        check_positive("beta", beta)?;
        Ok(Self { c, k, lambda, beta })
    }

    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Parameters in the fixed order `[c, k, lambda, beta]`.
    pub fn to_array(&self) -> [f64; 4] {
        [self.c, self.k, self.lambda, self.beta]
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        match v {
            [c, k, l, b] => Self::new(*c, *k, *l, *b),
            _ => Err(BwError::domain(format!(
                "expected 4 parameters (c,k,lambda,beta), got {}",
                v.len()
            ))),
        }
    }

    /// The Burr III component.
    pub fn burr(&self) -> SubModelParams {
        SubModelParams::BurrIII {
            c: self.c,
            k: self.k,
        }
    }

    /// The Weibull component.
    pub fn weibull(&self) -> SubModelParams {
        SubModelParams::Weibull {
            lambda: self.lambda,
            beta: self.beta,
        }
    }
}

/// Validates a raw parameter quadruple.
pub fn validate_params(c: f64, k: f64, lambda: f64, beta: f64) -> Result<BwParams> {
    BwParams::new(c, k, lambda, beta)
}

impl fmt::Display for BwParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.c, self.k, self.lambda, self.beta)
    }
}

/// Parameters of one of the two component distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SubModelParams {
    BurrIII { c: f64, k: f64 },
    Weibull { lambda: f64, beta: f64 },
}

impl SubModelParams {
    pub fn burr(c: f64, k: f64) -> Result<Self> {
        check_positive("c", c)?;
        check_positive("k", k)?;
        Ok(SubModelParams::BurrIII { c, k })
    }

    pub fn weibull(lambda: f64, beta: f64) -> Result<Self> {
        check_positive("lambda", lambda)?;
        check_positive("beta", beta)?;
        Ok(SubModelParams::Weibull { lambda, beta })
    }

    pub fn to_vec(&self) -> Vec<f64> {
        match *self {
            SubModelParams::BurrIII { c, k } => vec![c, k],
            SubModelParams::Weibull { lambda, beta } => vec![lambda, beta],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_table_column() {
        let p = validate_params(3.0, 1.0, 2.0, 0.4).unwrap();
        assert_eq!(p.to_array(), [3.0, 1.0, 2.0, 0.4]);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(validate_params(0.0, 1.0, 1.0, 1.0), Err(BwError::Domain(_))));
        assert!(matches!(validate_params(1.0, 1.0, -2.0, 1.0), Err(BwError::Domain(_))));
        assert!(validate_params(f64::NAN, 1.0, 1.0, 1.0).is_err());
        assert!(validate_params(1.0, f64::INFINITY, 1.0, 1.0).is_err());
        assert!(SubModelParams::burr(1.0, 0.0).is_err());
        assert!(SubModelParams::weibull(-1.0, 1.0).is_err());
    }
}
