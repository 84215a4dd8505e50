//! Adaptive Gauss-Kronrod quadrature on finite intervals and on subsets of the
//! positive half-line.
//!
//! Half-line integrals are taken in `t = ln x`, which turns the power-law
//! behaviour of lifetime densities near the origin into exponential decay;
//! infinite `t` ends are mapped onto `[0, 1)` by `t = t0 ± s / (1 - s)`.

use crate::error::{BwError, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_958_109_831,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// 10-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = 0.0;
    let mut res_k = fc * WGK[10];
    let mut res_abs = fc.abs() * WGK[10];
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

/// Adaptive integration of `f` over a finite interval `[a, b]`.
///
/// `f` is only evaluated at interior points.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult> {
    integrate_pieces(&f, &[(a, b)], opts)
}

fn integrate_pieces<F: Fn(f64) -> f64>(
    f: &F,
    pieces: &[(f64, f64)],
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for &(a, b) in pieces {
        if !(a.is_finite() && b.is_finite()) {
            return Err(BwError::Integration(format!("non-finite limits [{a}, {b}]")));
        }
        if a == b {
            continue;
        }
        let (value, error) = gk21(f, a, b);
        total += value;
        total_err += error;
        heap.push(Segment { a, b, value, error });
    }
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(BwError::Integration(format!(
                "integrand produced a non-finite value (estimate {total})"
            )));
        }
        let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(BwError::Integration(format!(
                "no convergence after {} subintervals: estimate {total}, error {total_err:e}",
                heap.len()
            )));
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision; keep it as is
            heap.push(Segment {
                error: 0.0,
                ..worst
            });
            total_err -= worst.error;
            continue;
        }
        let (v1, e1) = gk21(f, worst.a, mid);
        let (v2, e2) = gk21(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // re-sum to shed accumulated cancellation error
    let (value, abs_error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(QuadResult {
        value,
        abs_error,
        intervals: heap.len(),
    })
}

/// Integrates over `ln x` in `(t_lo, t_hi)` (either end may be infinite).
///
/// `h` receives `t = ln x` and must return the integrand *already multiplied
/// by `x`*, i.e. the density of the integral with respect to `d(ln x)`.
pub fn integrate_log_scale<H: Fn(f64) -> f64>(
    h: H,
    t_lo: f64,
    t_hi: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if t_lo.is_nan() || t_hi.is_nan() || t_lo >= t_hi {
        return Err(BwError::Integration(format!("empty range ({t_lo}, {t_hi})")));
    }
    let t0 = find_peak(&h, t_lo, t_hi);
    let mut total = QuadResult {
        value: 0.0,
        abs_error: 0.0,
        intervals: 0,
    };
    let mut add = |r: QuadResult| {
        total.value += r.value;
        total.abs_error += r.abs_error;
        total.intervals += r.intervals;
    };

    // left part (t_lo, t0]
    if t0 > t_lo {
        if t_lo.is_finite() {
            add(integrate_pieces(&h, &[(t_lo, t0)], opts)?);
        } else {
            let g = |s: f64| {
                let w = 1.0 - s;
                h(t0 - s / w) / (w * w)
            };
            add(integrate_pieces(&g, &[(0.0, 1.0)], opts)?);
        }
    }
    // right part [t0, t_hi)
    if t0 < t_hi {
        if t_hi.is_finite() {
            add(integrate_pieces(&h, &[(t0, t_hi)], opts)?);
        } else {
            let g = |s: f64| {
                let w = 1.0 - s;
                h(t0 + s / w) / (w * w)
            };
            add(integrate_pieces(&g, &[(0.0, 1.0)], opts)?);
        }
    }
    Ok(total)
}

/// Coarse scan for the location of the largest `|h|`, clamped to the range.
fn find_peak<H: Fn(f64) -> f64>(h: &H, t_lo: f64, t_hi: f64) -> f64 {
    let a = t_lo.max(-60.0);
    let b = t_hi.min(60.0);
    if a >= b {
        return if t_lo.is_finite() { t_lo } else { t_hi };
    }
    let n = 240;
    let mut best = (f64::NEG_INFINITY, 0.5 * (a + b));
    for i in 1..n {
        let t = a + (b - a) * i as f64 / n as f64;
        let v = h(t).abs();
        if v.is_finite() && v > best.0 {
            best = (v, t);
        }
    }
    best.1
}

/// Integrates `g(x)` over `(lo, hi)` with `0 <= lo < hi <= inf`, working on the
/// log scale.
pub fn integrate_positive<G: Fn(f64) -> f64>(
    g: G,
    lo: f64,
    hi: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if !(lo >= 0.0) || !(hi > lo) {
        return Err(BwError::Integration(format!("invalid range ({lo}, {hi})")));
    }
    let h = |t: f64| {
        let x = t.exp();
        if x == 0.0 || !x.is_finite() {
            0.0
        } else {
            g(x) * x
        }
    };
    integrate_log_scale(h, lo.ln(), hi.ln(), opts)
}
