use std::path::PathBuf;
use std::process::ExitCode;

use bw_core::curves::{emit_curves, CurveKind, CurveTable, Precision};
use bw_core::data::{kevlar_dataset, load_dataset, DataFormat, Dataset};
use bw_core::dist::{cdf, hazard, pdf, reversed_hazard, survival};
use bw_core::entropy::{renyi_entropy, shannon_entropy};
use bw_core::estimation::{compare_models, fit_mle, FitOptions, FitResult, Model};
use bw_core::measures::{bonferroni, lorenz, mean_deviation_about_mean, mean_deviation_about_median};
use bw_core::moments::{moment_summary, raw_moment_series};
use bw_core::order_stats::order_statistic_pdf;
use bw_core::quantile::{median, quantile, sample};
use bw_core::rng::SeededStream;
use bw_core::sim::{parse_sim_config, run_simulation, sim_report_to_table, SimConfig};
use bw_core::{BwError, BwParams};
use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

#[derive(Parser)]
#[command(name = "bwdist", version, about = "Burr III-Weibull distribution toolkit")]
struct Cli {
    /// Print numbers with full round-trip precision instead of 6 significant digits.
    #[arg(long, global = true)]
    full_precision: bool,
    /// Worker threads for sampling and simulation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pointwise pdf, cdf, survival, hazard and reversed hazard.
    Eval {
        #[arg(long, value_parser = parse_params, allow_hyphen_values = true)]
        params: BwParams,
        /// Abscissae, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
    },
    /// Quantiles at the given probability levels.
    Quantile {
        #[arg(long, value_parser = parse_params, allow_hyphen_values = true)]
        params: BwParams,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        u: Vec<f64>,
    },
    /// Random variates by inverse transform, one per line.
    Sample {
        #[arg(long, value_parser = parse_params, allow_hyphen_values = true)]
        params: BwParams,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Raw moments and shape statistics.
    Moments {
        #[arg(long, value_parser = parse_params, allow_hyphen_values = true)]
        params: BwParams,
        /// Also report the series partial sum for this moment order.
        #[arg(long)]
        series: Option<u32>,
        #[arg(long, default_value_t = 64)]
        terms: usize,
    },
    /// Mean deviations, inequality curves, entropies and order statistics.
    Measures {
        #[arg(long, value_parser = parse_params, allow_hyphen_values = true)]
        params: BwParams,
        /// Probability levels for the Lorenz and Bonferroni curves.
        #[arg(long, value_delimiter = ',')]
        prob: Vec<f64>,
        /// Rényi orders.
        #[arg(long, value_delimiter = ',')]
        renyi: Vec<f64>,
        /// Order statistic `i,m` evaluated at `--x`.
        #[arg(long, value_delimiter = ',')]
        order: Vec<usize>,
        #[arg(long)]
        x: Option<f64>,
    },
    /// Rényi and Shannon entropies.
    Entropy {
        #[arg(long, value_parser = parse_params, allow_hyphen_values = true)]
        params: BwParams,
        #[arg(long, value_delimiter = ',')]
        v: Vec<f64>,
    },
    /// Maximum likelihood fit of one model.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "bw")]
        model: String,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long)]
        json: bool,
    },
    /// Fit all three models and rank them by AIC.
    Compare {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo study of the estimator.
    Simulate {
        /// `key = value` config file; flags below override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_parser = parse_params)]
        params: Option<BwParams>,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Curve grids as CSV.
    Curves {
        #[arg(long, value_parser = parse_params, allow_hyphen_values = true)]
        params: BwParams,
        #[arg(long, value_delimiter = ',', default_value = "pdf,cdf,survival,hazard")]
        which: Vec<String>,
        /// `lo,hi,n_points`
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 5.0, 100.0])]
        grid: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DataArgs {
    /// `kevlar` for the embedded dataset, otherwise a file path.
    #[arg(long, default_value = "kevlar")]
    data: String,
    #[arg(long, default_value = "whitespace")]
    format: String,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long, default_value_t = 8)]
    starts: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

impl FitArgs {
    fn options(&self) -> FitOptions {
        FitOptions {
            multistart_count: self.starts,
            seed: self.seed,
            ..FitOptions::default()
        }
    }
}

fn parse_params(s: &str) -> Result<BwParams, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad number {t:?}")))
        .collect::<Result<_, _>>()?;
    if v.len() != 4 {
        return Err(format!("expected c,k,lambda,beta, got {} values", v.len()));
    }
    BwParams::from_slice(&v).map_err(|e| e.to_string())
}

fn load(d: &DataArgs) -> bw_core::Result<Dataset> {
    if d.data == "kevlar" {
        return Ok(kevlar_dataset());
    }
    let format: DataFormat = d.format.parse()?;
    load_dataset(&PathBuf::from(&d.data), format)
}

struct Out {
    precision: Precision,
}

impl Out {
    fn num(&self, v: f64) -> String {
        self.precision.format(v)
    }

    fn kv(&self, key: &str, v: f64) {
        println!("{key:<22}{}", self.num(v));
    }
}

fn fit_table(out: &Out, fits: &[&FitResult]) {
    println!("{:<9}{:>12}{:>12}{:>12}{:>12}  params", "model", "logL", "AIC", "BIC", "AICC");
    for f in fits {
        let ps: Vec<String> = f
            .model
            .param_names()
            .iter()
            .zip(&f.params)
            .map(|(n, v)| format!("{n}={}", out.num(*v)))
            .collect();
        println!(
            "{:<9}{:>12}{:>12}{:>12}{:>12}  {}{}",
            f.model.to_string(),
            out.num(f.log_likelihood),
            out.num(f.aic),
            out.num(f.bic),
            out.num(f.aicc),
            ps.join(" "),
            if f.converged { "" } else { "  (not converged)" }
        );
    }
}

fn fit_json(f: &FitResult) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("model".into(), f.model.to_string().into());
    for (n, v) in f.model.param_names().iter().zip(&f.params) {
        m.insert(format!("params.{n}"), (*v).into());
    }
    for (k, v) in [
        ("log_likelihood", f.log_likelihood),
        ("aic", f.aic),
        ("bic", f.bic),
        ("aicc", f.aicc),
        ("gradient_norm_at_solution", f.gradient_norm_at_solution),
    ] {
        m.insert(k.into(), v.into());
    }
    m.insert("n".into(), f.n.into());
    m.insert("iterations".into(), f.iterations.into());
    m.insert("converged".into(), f.converged.into());
    m
}

fn print_json(m: Map<String, Value>) {
    println!("{}", serde_json::to_string_pretty(&Value::Object(m)).expect("json"));
}

fn run(cli: Cli) -> bw_core::Result<()> {
    let out = Out {
        precision: if cli.full_precision { Precision::Full } else { Precision::Short },
    };
    match cli.cmd {
        Cmd::Eval { params, x } => {
            let mut lines = vec!["x,pdf,cdf,survival,hazard,reversed_hazard".to_string()];
            for xi in x {
                let row = [
                    pdf(&params, xi)?,
                    cdf(&params, xi)?,
                    survival(&params, xi)?,
                    hazard(&params, xi)?,
                    reversed_hazard(&params, xi)?,
                ];
                let cells: Vec<String> = std::iter::once(xi).chain(row).map(|v| out.num(v)).collect();
                lines.push(cells.join(","));
            }
            println!("{}", lines.join("\n"));
        }
        Cmd::Quantile { params, u } => {
            for ui in u {
                println!("{}", out.num(quantile(&params, ui)?));
            }
        }
        Cmd::Sample { params, n, seed, stream } => {
            let xs = sample(&params, n, SeededStream::new(seed, stream))?;
            let mut s = String::with_capacity(n * 12);
            for x in xs {
                s.push_str(&out.num(x));
                s.push('\n');
            }
            print!("{s}");
        }
        Cmd::Moments { params, series, terms } => {
            let m = moment_summary(&params)?;
            for (r, v) in m.raw_moments.iter().enumerate() {
                out.kv(&format!("mu'{}", r + 1), *v);
            }
            out.kv("sd", m.sd);
            out.kv("cv", m.cv);
            out.kv("skewness", m.skewness);
            out.kv("kurtosis", m.kurtosis);
            if let Some(r) = series {
                let (v, d) = raw_moment_series(&params, r, terms)?;
                out.kv(&format!("series mu'{r}"), v);
                out.kv("series error bound", d.truncation_error);
                println!("{:<22}{}", "series terms", d.terms_used);
                if let Some(m) = d.validity_violated_at_term {
                    println!("{:<22}{m}", "series stopped at m");
                }
            }
        }
        Cmd::Measures { params, prob, renyi, order, x } => {
            out.kv("median", median(&params)?);
            out.kv("delta1 (about mean)", mean_deviation_about_mean(&params)?);
            out.kv("delta2 (about median)", mean_deviation_about_median(&params)?);
            out.kv("shannon entropy", shannon_entropy(&params)?);
            for p in prob {
                out.kv(&format!("lorenz({p})"), lorenz(&params, p)?);
                out.kv(&format!("bonferroni({p})"), bonferroni(&params, p)?);
            }
            for v in renyi {
                out.kv(&format!("renyi({v})"), renyi_entropy(&params, v)?);
            }
            if !order.is_empty() && order.len() != 2 {
                return Err(BwError::Domain("--order takes i,m".into()));
            }
            if let [i, m] = order[..] {
                let x = x.ok_or_else(|| BwError::Domain("--order needs --x".into()))?;
                out.kv(&format!("f_{i}:{m}({x})"), order_statistic_pdf(&params, i, m, x)?);
            }
        }
        Cmd::Entropy { params, v } => {
            out.kv("shannon", shannon_entropy(&params)?);
            for vi in v {
                out.kv(&format!("renyi({vi})"), renyi_entropy(&params, vi)?);
            }
        }
        Cmd::Fit { data, model, fit, json } => {
            let d = load(&data)?;
            let model: Model = model.parse()?;
            let f = fit_mle(d.values(), model, &fit.options())?;
            if json {
                print_json(fit_json(&f));
            } else {
                println!("{} (n = {})", d.label(), d.len());
                fit_table(&out, &[&f]);
            }
        }
        Cmd::Compare { data, fit, json } => {
            let d = load(&data)?;
            let c = compare_models(d.values(), &fit.options())?;
            if json {
                let mut m = Map::new();
                m.insert("n".into(), c.n.into());
                let order: Vec<String> = c.rows.iter().map(|r| r.model.to_string()).collect();
                m.insert("order".into(), order.join(",").into());
                for r in &c.rows {
                    let name = r.model.to_string();
                    if let Some(f) = &r.fit {
                        for (k, v) in fit_json(f) {
                            m.insert(format!("{name}.{k}"), v);
                        }
                    }
                    if let Some(e) = &r.error {
                        m.insert(format!("{name}.error"), e.clone().into());
                    }
                }
                print_json(m);
            } else {
                println!("{} (n = {}), ranked by AIC", d.label(), d.len());
                let fits: Vec<&FitResult> = c.rows.iter().filter_map(|r| r.fit.as_ref()).collect();
                fit_table(&out, &fits);
                for r in c.rows.iter().filter(|r| r.fit.is_none()) {
                    println!("{:<9}failed: {}", r.model.to_string(), r.error.as_deref().unwrap_or(""));
                }
            }
        }
        Cmd::Simulate { config, params, sizes, replicates, seed, starts, json } => {
            let mut cfg = match (&config, params) {
                (Some(path), _) => parse_sim_config(&std::fs::read_to_string(path)?)?,
                (None, Some(p)) => SimConfig::new(p, vec![25, 200, 400, 600], 200, 0),
                (None, None) => return Err(BwError::Domain("simulate needs --config or --params".into())),
            };
            if let Some(p) = params {
                cfg.true_params = p;
            }
            if let Some(s) = sizes {
                cfg.sample_sizes = s;
            }
            if let Some(r) = replicates {
                cfg.replicates = r;
            }
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            if let Some(s) = starts {
                cfg.fit_options.multistart_count = s;
            }
            let rep = run_simulation(&cfg)?;
            if json {
                let mut m = Map::new();
                m.insert("replicates".into(), rep.replicates.into());
                m.insert("master_seed".into(), rep.master_seed.into());
                for c in &rep.cells {
                    let key = format!("n{}.{}", c.n, c.parameter);
                    for (k, v) in [
                        ("true_value", c.true_value),
                        ("mean_estimate", c.mean_estimate),
                        ("bias", c.bias),
                        ("mse", c.mse),
                    ] {
                        m.insert(format!("{key}.{k}"), v.into());
                    }
                    m.insert(format!("{key}.failure_count"), c.failure_count.into());
                }
                print_json(m);
            } else {
                print!("{}", sim_report_to_table(&rep).to_csv(out.precision));
            }
        }
        Cmd::Curves { params, which, grid, out: path } => {
            let kinds: Vec<CurveKind> = which.iter().map(|w| w.parse()).collect::<bw_core::Result<_>>()?;
            if grid.len() != 3 {
                return Err(BwError::Domain("--grid takes lo,hi,n_points".into()));
            }
            let n = grid[2];
            if !(n >= 2.0 && n.fract() == 0.0) {
                return Err(BwError::Domain(format!("grid size must be an integer >= 2, got {n}")));
            }
            let t: CurveTable = emit_curves(&params, &kinds, grid[0], grid[1], n as usize)?;
            let csv = t.to_csv(out.precision);
            match path {
                Some(p) => std::fs::write(p, csv)?,
                None => print!("{csv}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("bwdist: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bwdist: {e}");
            ExitCode::from(1)
        }
    }
}
