//! Rectangular numeric tables: curve grids for plotting and flattened
//! simulation reports, with CSV output and parsing.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::dist::{cdf, hazard, pdf, survival};
use crate::error::{BwError, Result};
use crate::measures::{bonferroni, lorenz};
use crate::params::BwParams;

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CurveTable {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(i) = rows.iter().position(|r| r.len() != columns.len()) {
            return Err(BwError::domain(format!(
                "row {i} has {} fields, header has {}",
                rows[i].len(),
                columns.len()
            )));
        }
        Ok(CurveTable { columns, rows })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self, precision: Precision) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| precision.format(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| BwError::domain("empty table"))?;
        let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (li, line) in lines {
            let row = line
                .split(',')
                .enumerate()
                .map(|(ci, tok)| {
                    tok.trim().parse::<f64>().map_err(|_| BwError::Parse {
                        line: li + 1,
                        column: ci + 1,
                        message: format!("malformed number {tok:?}"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        CurveTable::new(columns, rows)
    }
}

/// Number formatting for tables and CLI output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// Six significant digits.
    #[default]
    Short,
    /// Shortest representation that parses back to the same double.
    Full,
}

impl Precision {
    pub fn format(self, v: f64) -> String {
        match self {
            Precision::Short => format_sig(v, 6),
            Precision::Full => format!("{v:?}"),
        }
    }
}

/// `%g`-style formatting with `digits` significant digits.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    // rounding can carry into the next decade, so take the exponent from the rounded value
    let sci = format!("{:.*e}", digits - 1, v);
    let exp = sci
        .split('e')
        .nth(1)
        .and_then(|e| e.parse::<i32>().ok())
        .unwrap_or(exp);
    if exp < -4 || exp >= digits as i32 {
        let (mant, e) = sci.split_once('e').unwrap();
        format!("{}e{}", trim_zeros(mant), e)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Pdf,
    Cdf,
    Survival,
    Hazard,
    Lorenz,
    Bonferroni,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Pdf => "pdf",
            CurveKind::Cdf => "cdf",
            CurveKind::Survival => "survival",
            CurveKind::Hazard => "hazard",
            CurveKind::Lorenz => "lorenz",
            CurveKind::Bonferroni => "bonferroni",
        }
    }

    fn eval(self, p: &BwParams, x: f64) -> Result<f64> {
        match self {
            CurveKind::Pdf => pdf(p, x),
            CurveKind::Cdf => cdf(p, x),
            CurveKind::Survival => survival(p, x),
            CurveKind::Hazard => hazard(p, x),
            CurveKind::Lorenz => lorenz(p, x),
            CurveKind::Bonferroni => bonferroni(p, x),
        }
    }
}

impl FromStr for CurveKind {
    type Err = BwError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pdf" => CurveKind::Pdf,
            "cdf" => CurveKind::Cdf,
            "survival" | "sf" => CurveKind::Survival,
            "hazard" => CurveKind::Hazard,
            "lorenz" => CurveKind::Lorenz,
            "bonferroni" => CurveKind::Bonferroni,
            _ => return Err(BwError::domain(format!("unknown curve {s:?}"))),
        })
    }
}

/// Evaluates the requested curves on `n_points` evenly spaced abscissae in
/// `[lo, hi]`. Lorenz and Bonferroni take the abscissa as a probability.
pub fn emit_curves(p: &BwParams, which: &[CurveKind], lo: f64, hi: f64, n_points: usize) -> Result<CurveTable> {
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) {
        return Err(BwError::domain(format!("grid needs 0 <= lo < hi, got [{lo}, {hi}]")));
    }
    if n_points < 2 {
        return Err(BwError::domain("grid needs at least 2 points"));
    }
    let mut columns = vec!["x".to_string()];
    columns.extend(which.iter().map(|w| w.name().to_string()));
    let step = (hi - lo) / (n_points - 1) as f64;
    let mut rows = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let x = if i == n_points - 1 { hi } else { lo + step * i as f64 };
        let mut row = vec![x];
        for w in which {
            let v = w.eval(p, x).map_err(|e| annotate(e, i, x, *w))?;
            row.push(v);
        }
        rows.push(row);
    }
    CurveTable::new(columns, rows)
}

fn annotate(e: BwError, i: usize, x: f64, w: CurveKind) -> BwError {
    let mut msg = String::new();
    write!(msg, "{} at grid index {i} (x = {x}): {e}", w.name()).unwrap();
    match e {
        BwError::Range(_) => BwError::Range(msg),
        BwError::Integration(_) => BwError::Integration(msg),
        BwError::Convergence(_) => BwError::Convergence(msg),
        _ => BwError::Domain(msg),
    }
}
