//! Likelihood, score, maximum likelihood fitting and information criteria for
//! the Burr III-Weibull model and its two components.

use std::fmt;
use std::str::FromStr;

use argmin::core::{CostFunction, Error as ArgminError, Executor, Gradient, State};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::neldermead::NelderMead;
use argmin::solver::quasinewton::BFGS;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::Pieces;
use crate::error::{BwError, Result};
use crate::params::{BwParams, SubModelParams};
use crate::rng::SeededStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Model {
    #[serde(rename = "BW")]
    Bw,
    BurrIII,
    Weibull,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Bw, Model::BurrIII, Model::Weibull];

    pub fn n_params(self) -> usize {
        match self {
            Model::Bw => 4,
            Model::BurrIII | Model::Weibull => 2,
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Model::Bw => &["c", "k", "lambda", "beta"],
            Model::BurrIII => &["c", "k"],
            Model::Weibull => &["lambda", "beta"],
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Bw => "BW",
            Model::BurrIII => "BurrIII",
            Model::Weibull => "Weibull",
        })
    }
}

impl FromStr for Model {
    type Err = BwError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bw" | "burr-weibull" | "burr3-weibull" => Ok(Model::Bw),
            "burr3" | "burriii" | "burr" => Ok(Model::BurrIII),
            "weibull" => Ok(Model::Weibull),
            _ => Err(BwError::domain(format!("unknown model {s:?}"))),
        }
    }
}

fn check_data(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(BwError::domain("dataset is empty"));
    }
    match x.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        Some(i) => Err(BwError::domain(format!("observation {i} = {} is not finite and positive", x[i]))),
        None => Ok(()),
    }
}

/// `Σ ln f(x_i)`.
pub fn log_likelihood(p: &BwParams, x: &[f64]) -> Result<f64> {
    check_data(x)?;
    Ok(x.iter().map(|&xi| Pieces::new(p, xi).log_pdf()).sum())
}

pub fn submodel_log_likelihood(sp: &SubModelParams, x: &[f64]) -> Result<f64> {
    check_data(x)?;
    let mut s = 0.0;
    for &xi in x {
        s += crate::dist::submodel_log_pdf(sp, xi)?;
    }
    Ok(s)
}

/// Per-observation pieces of the score that do not depend on which
/// component dominates.
struct ScoreTerms {
    u: f64,
    l: f64,
    /// `1 / (1 + x^c)`
    sigma: f64,
    /// `k L / expm1(k L)`
    q: f64,
    /// `sigma / L`
    ratio: f64,
}

fn score_terms(c: f64, k: f64, xi: f64) -> ScoreTerms {
    let u = xi.ln();
    let ln_y = -c * u;
    let l = crate::dist::softplus(ln_y);
    let sigma = (ln_y - l).exp();
    let kl = k * l;
    let q = if kl > 0.0 { kl / kl.exp_m1() } else { 1.0 };
    let ratio = if ln_y < -700.0 { 1.0 } else { sigma / l };
    ScoreTerms { u, l, sigma, q, ratio }
}

/// Gradient of the log-likelihood with respect to `(c, k, lambda, beta)`.
pub fn score(p: &BwParams, x: &[f64]) -> Result<[f64; 4]> {
    check_data(x)?;
    let (c, k, lambda, beta) = (p.c(), p.k(), p.lambda(), p.beta());
    let ln_lambda = lambda.ln();
    let mut g = [0.0; 4];
    for &xi in x {
        let pc = Pieces::new(p, xi);
        let t = score_terms(c, k, xi);
        // posterior weights of the two density terms
        let w_a = 1.0 / (1.0 + (pc.ln_b - pc.ln_a).exp());
        let w_b = 1.0 / (1.0 + (pc.ln_a - pc.ln_b).exp());
        let v = t.u - ln_lambda;
        g[0] += w_a * (1.0 / c - t.u + (k + 1.0) * t.u * t.sigma);
        g[1] += w_a * (1.0 / k - t.l);
        if w_b > 0.0 {
            g[0] -= w_b * t.u * t.ratio * t.q;
            g[1] += w_b * t.q / k;
        }
        g[2] += beta / lambda * (pc.z - w_b);
        g[3] += -pc.z * v + w_b * (1.0 / beta + v);
    }
    Ok(g)
}

/// Gradient of a component log-likelihood, in the component's own parameter order.
pub fn submodel_score(sp: &SubModelParams, x: &[f64]) -> Result<Vec<f64>> {
    check_data(x)?;
    Ok(match *sp {
        SubModelParams::BurrIII { c, k } => {
            let mut g = vec![0.0; 2];
            for &xi in x {
                let t = score_terms(c, k, xi);
                g[0] += 1.0 / c - t.u + (k + 1.0) * t.u * t.sigma;
                g[1] += 1.0 / k - t.l;
            }
            g
        }
        SubModelParams::Weibull { lambda, beta } => {
            let mut g = vec![0.0; 2];
            let ln_lambda = lambda.ln();
            for &xi in x {
                let v = xi.ln() - ln_lambda;
                let z = (beta * v).exp();
                g[0] += beta / lambda * (z - 1.0);
                g[1] += 1.0 / beta + v - z * v;
            }
            g
        }
    })
}

fn build_params(model: Model, theta: &[f64]) -> Result<ModelParams> {
    Ok(match model {
        Model::Bw => ModelParams::Bw(BwParams::from_slice(theta)?),
        Model::BurrIII => ModelParams::Sub(SubModelParams::burr(theta[0], theta[1])?),
        Model::Weibull => ModelParams::Sub(SubModelParams::weibull(theta[0], theta[1])?),
    })
}

enum ModelParams {
    Bw(BwParams),
    Sub(SubModelParams),
}

/// Log-likelihood of any model from its raw parameter vector.
pub fn model_log_likelihood(model: Model, theta: &[f64], x: &[f64]) -> Result<f64> {
    match build_params(model, theta)? {
        ModelParams::Bw(p) => log_likelihood(&p, x),
        ModelParams::Sub(sp) => submodel_log_likelihood(&sp, x),
    }
}

/// Score of any model from its raw parameter vector.
pub fn model_score(model: Model, theta: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    match build_params(model, theta)? {
        ModelParams::Bw(p) => Ok(score(&p, x)?.to_vec()),
        ModelParams::Sub(sp) => submodel_score(&sp, x),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InformationCriteria {
    pub aic: f64,
    pub bic: f64,
    pub aicc: f64,
}

pub fn information_criteria(log_likelihood: f64, p: usize, n: usize) -> Result<InformationCriteria> {
    if n <= p + 1 {
        return Err(BwError::domain(format!("need n > p + 1, got n = {n}, p = {p}")));
    }
    let (pf, nf) = (p as f64, n as f64);
    let aic = 2.0 * pf - 2.0 * log_likelihood;
    Ok(InformationCriteria {
        aic,
        bic: pf * nf.ln() - 2.0 * log_likelihood,
        aicc: aic + 2.0 * pf * (pf + 1.0) / (nf - pf - 1.0),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Simplex iteration cap per start; the quasi-Newton polish gets a quarter of it.
    pub max_iterations: u64,
    /// Simplex standard-deviation tolerance on the scaled negative log-likelihood.
    pub tolerance: f64,
    pub multistart_count: usize,
    /// Raw-scale starts tried before the generated ones.
    pub starting_points: Option<Vec<Vec<f64>>>,
    /// Seed for the generated starts.
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iterations: 2000,
            tolerance: 1e-12,
            multistart_count: 8,
            starting_points: None,
            seed: 0x5eed,
        }
    }
}

impl FitOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(BwError::domain("tolerance must be > 0"));
        }
        if self.multistart_count < 1 {
            return Err(BwError::domain("multistart_count must be >= 1"));
        }
        if self.max_iterations < 1 {
            return Err(BwError::domain("max_iterations must be >= 1"));
        }
        Ok(())
    }
}

/// Gradient norms (log-parameter scale, per observation) below this count as stationary.
pub const STATIONARITY_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: Model,
    pub params: Vec<f64>,
    pub log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    pub aicc: f64,
    pub n: usize,
    pub iterations: u64,
    pub converged: bool,
    /// `||∂l/∂ln θ||₂ / n` at the solution.
    pub gradient_norm_at_solution: f64,
}

impl FitResult {
    pub fn bw_params(&self) -> Option<BwParams> {
        match self.model {
            Model::Bw => BwParams::from_slice(&self.params).ok(),
            _ => None,
        }
    }
}

/// Negative mean log-likelihood over `eta = ln theta`.
struct Objective<'a> {
    model: Model,
    x: &'a [f64],
}

impl Objective<'_> {
    fn theta(eta: &[f64]) -> Vec<f64> {
        eta.iter().map(|e| e.exp()).collect()
    }

    fn value(&self, eta: &[f64]) -> f64 {
        match model_log_likelihood(self.model, &Self::theta(eta), self.x) {
            Ok(l) if l.is_finite() => -l / self.x.len() as f64,
            _ => f64::INFINITY,
        }
    }

    /// `∂l/∂ln θ`.
    fn eta_score(&self, eta: &[f64]) -> Result<Vec<f64>> {
        let theta = Self::theta(eta);
        let g = model_score(self.model, &theta, self.x)?;
        Ok(g.iter().zip(&theta).map(|(gi, ti)| gi * ti).collect())
    }
}

impl CostFunction for Objective<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, eta: &Self::Param) -> std::result::Result<f64, ArgminError> {
        Ok(self.value(eta))
    }
}

impl Gradient for Objective<'_> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;

    fn gradient(&self, eta: &Self::Param) -> std::result::Result<Vec<f64>, ArgminError> {
        let n = self.x.len() as f64;
        let g = self.eta_score(eta).map_err(|e| ArgminError::msg(e.to_string()))?;
        if g.iter().any(|v| !v.is_finite()) {
            return Err(ArgminError::msg("non-finite gradient"));
        }
        Ok(g.iter().map(|v| -v / n).collect())
    }
}

struct LocalFit {
    eta: Vec<f64>,
    cost: f64,
    iterations: u64,
}

fn nelder_mead(obj: Objective<'_>, start: &[f64], opts: &FitOptions) -> Option<LocalFit> {
    let mut simplex = vec![start.to_vec()];
    for i in 0..start.len() {
        let mut v = start.to_vec();
        v[i] += 0.5;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex).with_sd_tolerance(opts.tolerance).ok()?;
    let res = Executor::new(obj, solver)
        .configure(|s| s.max_iters(opts.max_iterations))
        .run()
        .ok()?;
    let st = res.state();
    Some(LocalFit {
        eta: st.get_best_param()?.clone(),
        cost: st.get_best_cost(),
        iterations: st.get_iter(),
    })
}

fn bfgs(obj: Objective<'_>, start: &[f64], max_iters: u64) -> Option<LocalFit> {
    let d = start.len();
    let eye: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let solver = BFGS::new(MoreThuenteLineSearch::new()).with_tolerance_grad(1e-12).ok()?;
    let res = Executor::new(obj, solver)
        .configure(|s| s.param(start.to_vec()).inv_hessian(eye).max_iters(max_iters))
        .run()
        .ok()?;
    let st = res.state();
    Some(LocalFit {
        eta: st.get_best_param()?.clone(),
        cost: st.get_best_cost(),
        iterations: st.get_iter(),
    })
}

fn local_fit(model: Model, x: &[f64], start: &[f64], opts: &FitOptions) -> Option<FitResult> {
    let eta0: Vec<f64> = start.iter().map(|v| v.ln()).collect();
    if eta0.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let nm = nelder_mead(Objective { model, x }, &eta0, opts)?;
    let mut best = nm;
    if let Some(polished) = bfgs(Objective { model, x }, &best.eta, (opts.max_iterations / 4).max(50)) {
        if polished.cost <= best.cost {
            best = LocalFit {
                iterations: best.iterations + polished.iterations,
                ..polished
            };
        }
    }
    finish(model, x, &best.eta, best.iterations).ok()
}

fn finish(model: Model, x: &[f64], eta: &[f64], iterations: u64) -> Result<FitResult> {
    let params = Objective::theta(eta);
    let ll = model_log_likelihood(model, &params, x)?;
    let obj = Objective { model, x };
    let g = obj.eta_score(eta)?;
    let n = x.len();
    let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt() / n as f64;
    let ic = information_criteria(ll, model.n_params(), n)?;
    Ok(FitResult {
        model,
        params,
        log_likelihood: ll,
        aic: ic.aic,
        bic: ic.bic,
        aicc: ic.aicc,
        n,
        iterations,
        converged: ll.is_finite() && gnorm < STATIONARITY_TOL,
        gradient_norm_at_solution: gnorm,
    })
}

/// Rough Weibull scale and shape from the sample mean and coefficient of variation.
fn weibull_guess(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let cv = var.sqrt() / mean;
    let beta = if cv > 0.0 && cv.is_finite() { (1.2 / cv).clamp(0.05, 50.0) } else { 1.0 };
    (mean, beta)
}

/// Starting points on the raw scale: user points, the heuristic base point,
/// then log-uniform perturbations of the base within a factor of 10.
pub fn starting_points(model: Model, x: &[f64], opts: &FitOptions) -> Vec<Vec<f64>> {
    let (lam, beta) = weibull_guess(x);
    let base = match model {
        Model::Bw => vec![1.0, 1.0, lam, beta],
        Model::BurrIII => vec![1.0, 1.0],
        Model::Weibull => vec![lam, beta],
    };
    let mut starts: Vec<Vec<f64>> = opts
        .starting_points
        .iter()
        .flatten()
        .filter(|s| s.len() == model.n_params())
        .cloned()
        .collect();
    starts.truncate(opts.multistart_count);
    if starts.len() < opts.multistart_count {
        starts.push(base.clone());
    }
    let mut u = SeededStream::new(opts.seed, 0).uniforms();
    while starts.len() < opts.multistart_count {
        starts.push(base.iter().map(|b| b * 10f64.powf(2.0 * u.next().unwrap() - 1.0)).collect());
    }
    starts
}

/// Maximum likelihood fit with multistart. The highest log-likelihood among
/// converged starts wins; near-ties go to the smaller gradient norm.
pub fn fit_mle(x: &[f64], model: Model, opts: &FitOptions) -> Result<FitResult> {
    check_data(x)?;
    opts.validate()?;
    let p = model.n_params();
    if x.len() < p + 2 {
        return Err(BwError::domain(format!("need at least {} observations, got {}", p + 2, x.len())));
    }
    let starts = starting_points(model, x, opts);
    let fits: Vec<Option<FitResult>> = starts.par_iter().map(|s| local_fit(model, x, s, opts)).collect();
    let fits: Vec<FitResult> = fits.into_iter().flatten().collect();
    let pick = |cands: Vec<&FitResult>| -> Option<FitResult> {
        let top = cands.iter().map(|f| f.log_likelihood).fold(f64::NEG_INFINITY, f64::max);
        cands
            .into_iter()
            .filter(|f| f.log_likelihood >= top - 1e-8)
            .min_by(|a, b| a.gradient_norm_at_solution.total_cmp(&b.gradient_norm_at_solution))
            .cloned()
    };
    if let Some(best) = pick(fits.iter().filter(|f| f.converged).collect()) {
        return Ok(best);
    }
    match pick(fits.iter().filter(|f| f.log_likelihood.is_finite()).collect()) {
        Some(b) => Err(BwError::Convergence(format!(
            "no start converged for {model}; best point {:?} with log-likelihood {} and gradient norm {:e}",
            b.params, b.log_likelihood, b.gradient_norm_at_solution
        ))),
        None => Err(BwError::Convergence(format!("no start produced a finite log-likelihood for {model}"))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub model: Model,
    pub fit: Option<FitResult>,
    pub error: Option<String>,
}

/// All three models fitted to the same data, ordered by AIC; failed fits last.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub n: usize,
    pub rows: Vec<ComparisonRow>,
}

pub fn compare_models(x: &[f64], opts: &FitOptions) -> Result<Comparison> {
    check_data(x)?;
    opts.validate()?;
    let mut rows: Vec<ComparisonRow> = Model::ALL
        .iter()
        .map(|&m| match fit_mle(x, m, opts) {
            Ok(f) => ComparisonRow {
                model: m,
                fit: Some(f),
                error: None,
            },
            Err(e) => ComparisonRow {
                model: m,
                fit: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    rows.sort_by(|a, b| {
        let ka = a.fit.as_ref().map_or(f64::INFINITY, |f| f.aic);
        let kb = b.fit.as_ref().map_or(f64::INFINITY, |f| f.aic);
        ka.total_cmp(&kb)
    });
    Ok(Comparison { n: x.len(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::kevlar_dataset;

    fn fd_check(model: Model, theta: &[f64], x: &[f64]) {
        let g = model_score(model, theta, x).unwrap();
        for i in 0..theta.len() {
            let h = 1e-6 * theta[i];
            let mut up = theta.to_vec();
            let mut dn = theta.to_vec();
            up[i] += h;
            dn[i] -= h;
            let fd = (model_log_likelihood(model, &up, x).unwrap() - model_log_likelihood(model, &dn, x).unwrap())
                / (2.0 * h);
            let scale = fd.abs().max(1.0);
            assert!((g[i] - fd).abs() / scale < 1e-5, "{model} {i}: {} vs {fd}", g[i]);
        }
    }

    #[test]
    fn score_matches_differences() {
        let x = kevlar_dataset();
        fd_check(Model::Bw, &[2.3858890, 2.4533820, 1.7572900, 0.6791234], x.values());
        fd_check(Model::Bw, &[0.3, 8.0, 1.2, 2.0], x.values());
        fd_check(Model::BurrIII, &[1.8321566, 0.5343506], x.values());
        fd_check(Model::Weibull, &[0.9899448, 0.9258876], x.values());
    }

    #[test]
    fn score_far_tails() {
        let p = BwParams::new(5.0, 2.0, 1.0, 1.5).unwrap();
        let g = score(&p, &[1e-200, 1e150]).unwrap();
        assert!(g.iter().all(|v| v.is_finite()), "{g:?}");
    }

    #[test]
    fn kevlar_table_values() {
        let x = kevlar_dataset();
        let p = BwParams::new(2.3858890, 2.4533820, 1.7572900, 0.6791234).unwrap();
        assert!((log_likelihood(&p, x.values()).unwrap() + 98.66771).abs() < 0.01);
        let w = SubModelParams::weibull(0.9899448, 0.9258876).unwrap();
        assert!((submodel_log_likelihood(&w, x.values()).unwrap() + 102.9768).abs() < 0.01);
        let g = score(&p, x.values()).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-2), "{g:?}");
    }

    #[test]
    fn single_datum_and_domain() {
        let p = BwParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let l = log_likelihood(&p, &[0.7]).unwrap();
        assert_eq!(l, crate::dist::log_pdf(&p, 0.7).unwrap());
        assert!(matches!(log_likelihood(&p, &[1.0, -1.0]), Err(BwError::Domain(_))));
        assert!(matches!(log_likelihood(&p, &[]), Err(BwError::Domain(_))));
    }

    #[test]
    fn criteria_arithmetic() {
        let ic = information_criteria(0.0, 1, 3).unwrap();
        assert_eq!((ic.aic, ic.aicc), (2.0, 6.0));
        let ic = information_criteria(-98.66771, 4, 101).unwrap();
        assert!((ic.aic - 205.3354).abs() < 1e-3);
        assert!((ic.bic - 215.7959).abs() < 1e-3);
        assert!((ic.aicc - 205.7521).abs() < 1e-3);
        assert!(matches!(information_criteria(0.0, 4, 5), Err(BwError::Domain(_))));
    }

    #[test]
    fn fit_weibull_kevlar() {
        let x = kevlar_dataset();
        let f = fit_mle(x.values(), Model::Weibull, &FitOptions::default()).unwrap();
        assert!(f.converged);
        assert!((f.log_likelihood + 102.9768).abs() < 0.01, "{f:?}");
        assert!((f.params[0] - 0.9899448).abs() < 1e-3 && (f.params[1] - 0.9258876).abs() < 1e-3);
    }

    #[test]
    fn model_names() {
        for m in Model::ALL {
            assert_eq!(m.to_string().parse::<Model>().unwrap(), m);
        }
        assert!("gamma".parse::<Model>().is_err());
    }
}
