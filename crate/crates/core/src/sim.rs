//! Monte Carlo study of the maximum likelihood estimator: repeated sampling
//! from known parameters, refitting, and mean/bias/MSE per sample size.

use rand_distr::{Distribution, LogNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::CurveTable;
use crate::error::{BwError, Result};
use crate::estimation::{fit_mle, FitOptions, FitResult, Model};
use crate::params::BwParams;
use crate::quantile::sample;
use crate::rng::{mix64, replicate_stream_id, SeededStream};

pub const PARAM_NAMES: [&str; 4] = ["c", "k", "lambda", "beta"];

/// Replicates whose fits fail are dropped; above this share a cell is rejected.
pub const MAX_FAILURE_SHARE: f64 = 0.2;

/// A replicate whose estimate leaves `[1/ESTIMATE_BOUND, ESTIMATE_BOUND]` in any
/// coordinate has run off toward a sub-model limit and counts as non-converged.
pub const ESTIMATE_BOUND: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub true_params: BwParams,
    pub sample_sizes: Vec<usize>,
    pub replicates: usize,
    pub master_seed: u64,
    pub fit_options: FitOptions,
    /// Log-scale standard deviation of the multiplicative noise on the truth
    /// used as the first start of every replicate.
    pub start_noise: f64,
}

impl SimConfig {
    pub fn new(true_params: BwParams, sample_sizes: Vec<usize>, replicates: usize, master_seed: u64) -> Self {
        SimConfig {
            true_params,
            sample_sizes,
            replicates,
            master_seed,
            fit_options: FitOptions::default(),
            start_noise: 0.25,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates < 1 {
            return Err(BwError::domain("replicates must be >= 1"));
        }
        if self.sample_sizes.is_empty() || self.sample_sizes.iter().any(|&n| n < 6) {
            return Err(BwError::domain("sample sizes must be nonempty and each at least 6"));
        }
        if !(self.start_noise >= 0.0 && self.start_noise.is_finite()) {
            return Err(BwError::domain("start_noise must be finite and >= 0"));
        }
        self.fit_options.validate()
    }
}

/// Outcome of one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct Replicate {
    pub n: usize,
    pub index: usize,
    pub fit: std::result::Result<FitResult, String>,
}

/// Summary of one (sample size, parameter) cell over converged replicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimCell {
    pub n: usize,
    pub parameter: &'static str,
    pub true_value: f64,
    pub mean_estimate: f64,
    pub bias: f64,
    pub mse: f64,
    pub variance: f64,
    pub replicates_used: usize,
    pub failure_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub true_params: [f64; 4],
    pub replicates: usize,
    pub master_seed: u64,
    pub cells: Vec<SimCell>,
}

impl SimReport {
    pub fn cell(&self, n: usize, parameter: &str) -> Option<&SimCell> {
        self.cells.iter().find(|c| c.n == n && c.parameter == parameter)
    }
}

fn run_one(cfg: &SimConfig, n: usize, i: usize) -> Replicate {
    let stream_id = replicate_stream_id(n, i);
    let fit = (|| -> Result<FitResult> {
        let x = sample(&cfg.true_params, n, SeededStream::new(cfg.master_seed, stream_id))?;
        let mut rng = SeededStream::new(cfg.master_seed, mix64(stream_id ^ 0x5741_5254)).rng();
        let noise = LogNormal::new(0.0, cfg.start_noise).map_err(|e| BwError::domain(e.to_string()))?;
        let start: Vec<f64> = cfg.true_params.to_array().iter().map(|t| t * noise.sample(&mut rng)).collect();
        let mut opts = cfg.fit_options.clone();
        let mut starts = vec![start];
        starts.extend(opts.starting_points.take().into_iter().flatten());
        opts.starting_points = Some(starts);
        opts.seed = mix64(cfg.fit_options.seed ^ stream_id);
        let fit = fit_mle(&x, Model::Bw, &opts)?;
        if let Some(j) = fit.params.iter().position(|v| !(1.0 / ESTIMATE_BOUND..=ESTIMATE_BOUND).contains(v)) {
            return Err(BwError::Convergence(format!(
                "estimate {} = {:e} is on the way to the parameter boundary",
                PARAM_NAMES[j], fit.params[j]
            )));
        }
        Ok(fit)
    })();
    Replicate {
        n,
        index: i,
        fit: fit.map_err(|e| e.to_string()),
    }
}

/// Every replicate of every cell, ordered by `(n, i)` regardless of scheduling.
pub fn run_replicates(cfg: &SimConfig) -> Result<Vec<Replicate>> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = cfg
        .sample_sizes
        .iter()
        .flat_map(|&n| (0..cfg.replicates).map(move |i| (n, i)))
        .collect();
    Ok(jobs.par_iter().map(|&(n, i)| run_one(cfg, n, i)).collect())
}

/// Mean, bias and MSE per cell from finished replicates.
pub fn summarize(cfg: &SimConfig, reps: &[Replicate]) -> Result<SimReport> {
    let truth = cfg.true_params.to_array();
    let mut cells = Vec::new();
    for &n in &cfg.sample_sizes {
        let cell_reps: Vec<&Replicate> = reps.iter().filter(|r| r.n == n).collect();
        let est: Vec<&FitResult> = cell_reps.iter().filter_map(|r| r.fit.as_ref().ok()).collect();
        let failures = cell_reps.len() - est.len();
        if failures as f64 > MAX_FAILURE_SHARE * cell_reps.len() as f64 || est.is_empty() {
            return Err(BwError::Report(format!(
                "{failures} of {} replicates failed at n = {n}",
                cell_reps.len()
            )));
        }
        let m = est.len() as f64;
        for (j, name) in PARAM_NAMES.iter().enumerate() {
            let vals: Vec<f64> = est.iter().map(|f| f.params[j]).collect();
            let mean = vals.iter().sum::<f64>() / m;
            let mse = vals.iter().map(|v| (v - truth[j]).powi(2)).sum::<f64>() / m;
            let variance = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / m;
            cells.push(SimCell {
                n,
                parameter: name,
                true_value: truth[j],
                mean_estimate: mean,
                bias: mean - truth[j],
                mse,
                variance,
                replicates_used: est.len(),
                failure_count: failures,
            });
        }
    }
    Ok(SimReport {
        true_params: truth,
        replicates: cfg.replicates,
        master_seed: cfg.master_seed,
        cells,
    })
}

pub fn run_simulation(cfg: &SimConfig) -> Result<SimReport> {
    let reps = run_replicates(cfg)?;
    summarize(cfg, &reps)
}

/// One row per (sample size, parameter); `param` is the index into
/// `c, k, lambda, beta`.
pub fn sim_report_to_table(rep: &SimReport) -> CurveTable {
    let columns = ["n", "param", "mean", "bias", "mse"].map(String::from).to_vec();
    let rows = rep
        .cells
        .iter()
        .map(|c| {
            let j = PARAM_NAMES.iter().position(|p| *p == c.parameter).unwrap_or(0);
            vec![c.n as f64, j as f64, c.mean_estimate, c.bias, c.mse]
        })
        .collect();
    CurveTable::new(columns, rows).expect("fixed arity")
}

fn parse_list<T: std::str::FromStr>(v: &str, line: usize, key: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(j, t)| {
            t.parse::<T>().map_err(|_| BwError::Parse {
                line,
                column: j + 1,
                message: format!("bad value {t:?} for {key}"),
            })
        })
        .collect()
}

/// Reads a `key = value` config. Keys: `true_params` (`c,k,lambda,beta`),
/// `sample_sizes`, `replicates`, `seed`, and optionally `multistart`,
/// `start_noise`, `max_iterations`.
pub fn parse_sim_config(text: &str) -> Result<SimConfig> {
    let mut truth = None;
    let mut sizes = vec![25, 200, 400, 600];
    let mut replicates = 200;
    let mut seed = 0;
    let mut multistart = None;
    let mut noise = None;
    let mut max_iter = None;
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| BwError::Parse {
            line,
            column: 1,
            message: "expected key = value".into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let one = |v: Vec<f64>| -> Result<f64> {
            match v.as_slice() {
                [x] => Ok(*x),
                _ => Err(BwError::Parse {
                    line,
                    column: 1,
                    message: format!("{key} takes one value"),
                }),
            }
        };
        match key {
            "true_params" => {
                let v: Vec<f64> = parse_list(value, line, key)?;
                truth = Some(BwParams::from_slice(&v)?);
            }
            "sample_sizes" => sizes = parse_list(value, line, key)?,
            "replicates" => replicates = one(parse_list(value, line, key)?)? as usize,
            "seed" => {
                seed = value.parse().map_err(|_| BwError::Parse {
                    line,
                    column: 1,
                    message: format!("bad seed {value:?}"),
                })?
            }
            "multistart" => multistart = Some(one(parse_list(value, line, key)?)? as usize),
            "start_noise" => noise = Some(one(parse_list(value, line, key)?)?),
            "max_iterations" => max_iter = Some(one(parse_list(value, line, key)?)? as u64),
            _ => {
                return Err(BwError::Parse {
                    line,
                    column: 1,
                    message: format!("unknown key {key:?}"),
                })
            }
        }
    }
    let truth = truth.ok_or_else(|| BwError::domain("config is missing true_params"))?;
    let mut cfg = SimConfig::new(truth, sizes, replicates, seed);
    if let Some(m) = multistart {
        cfg.fit_options.multistart_count = m;
    }
    if let Some(s) = noise {
        cfg.start_noise = s;
    }
    if let Some(m) = max_iter {
        cfg.fit_options.max_iterations = m;
    }
    cfg.validate()?;
    Ok(cfg)
}
