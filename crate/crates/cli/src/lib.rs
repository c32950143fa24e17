//! Argument handling and command bodies for the `meinardus` binary.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use meinardus::asym::{build_model, error_exponent_fit, evaluate, two_pole_constants_for};
use meinardus::exact::{coeffs_cached, coeffs_conv, coeffs_oracle, coeffs_pentagonal, CoeffTable};
use meinardus::model::{exponent_sets, pole_constant, preset_lspec, AsymptoticModel, LSpec, WeightFunction};
use meinardus::saddle::{cauchy_count, rho_asymptotic, solve_saddle};
use meinardus::witten::{
    mt2_auto_m, mt2_mellin_barnes, so5_params_for, zeta_mt2_direct, zeta_pk_direct, zeta_so5_continued,
    zeta_so5_direct, zeta_su3_continued, zeta_su3_direct, MbParams, ZetaEval,
};
use meinardus::{Error, C64};
use num_rational::Rational64;
use serde_json::{json, Value};

/// Largest grid point for general presets.
pub const GENERAL_CAP: usize = 20_000;
/// Largest grid point for the pentagonal path.
pub const ONES_CAP: usize = 100_000;
/// Environment variable naming a cache directory.
pub const CACHE_ENV: &str = "MEINARDUS_CACHE";

#[derive(Debug, Parser)]
#[command(name = "meinardus", version, about = "Weighted partition counts and their asymptotics")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub output: Format,
    /// Requested tolerance for numerical evaluations, in (0, 1e-6].
    #[arg(long, default_value_t = 1e-10, global = true)]
    pub tol: f64,
    /// Directory for cached coefficient tables.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads; 0 lets rayon decide.
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,
    /// JSON file with L-function data, required for explicit presets.
    #[arg(long, global = true)]
    pub lspec: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    Auto,
    Convolution,
    Oracle,
    Pentagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaMethod {
    Auto,
    Direct,
    Mb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaName {
    So5,
    Su3,
    Mt2,
    Pk,
}

/// Preset given either positionally or with `--preset`.
#[derive(Debug, Clone, Args)]
pub struct PresetArg {
    #[arg(value_name = "PRESET")]
    pub preset_pos: Option<String>,
    /// ones, plane, polygonal:k, su3, so5 or explicit:<path>.
    #[arg(long = "preset")]
    pub preset_flag: Option<String>,
}

impl PresetArg {
    fn get(&self) -> Result<String, CliError> {
        self.preset_flag
            .clone()
            .or_else(|| self.preset_pos.clone())
            .ok_or_else(|| CliError::usage("a preset is required"))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact table p_f(0..=N).
    Count {
        #[command(flatten)]
        preset: PresetArg,
        #[arg(value_name = "N")]
        n_pos: Option<usize>,
        #[arg(long = "n")]
        n_flag: Option<usize>,
        #[arg(long, value_enum, default_value_t = CountMethod::Auto)]
        method: CountMethod,
    },
    /// Exact counts against the asymptotic main term on a grid.
    Compare {
        #[command(flatten)]
        preset: PresetArg,
        /// Grid: a,b (ten log-spaced points), a,b,step, a,b,log[K], or a list of four or more values.
        #[arg(value_name = "GRID")]
        grid_pos: Option<String>,
        #[arg(long = "n-grid")]
        grid_flag: Option<String>,
    },
    /// Constants of the asymptotic formula.
    Constants {
        #[command(flatten)]
        preset: PresetArg,
    },
    /// Witten, Mordell-Tornheim and polygonal zeta values.
    Zeta {
        #[arg(value_enum)]
        name: ZetaName,
        /// Argument "re[,im]"; mt2 takes three, separated by ';'.
        #[arg(value_name = "S", allow_hyphen_values = true)]
        s_pos: Option<String>,
        #[arg(long = "s", allow_hyphen_values = true)]
        s_flag: Option<String>,
        #[arg(long, value_enum, default_value_t = ZetaMethod::Auto)]
        method: ZetaMethod,
        /// Polygon order for pk; contour shift K for so5.
        #[arg(long)]
        k: Option<usize>,
        /// Smallest contour shift M of the double zeta.
        #[arg(long)]
        m: Option<usize>,
        /// Offset of the contours left of an integer, in (0, 1).
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Saddle point of the generating function.
    Saddle {
        #[command(flatten)]
        preset: PresetArg,
        #[arg(value_name = "N")]
        n_pos: Option<f64>,
        #[arg(long = "n")]
        n_flag: Option<f64>,
    },
    /// A coefficient from the Cauchy integral.
    Cauchy {
        #[command(flatten)]
        preset: PresetArg,
        #[arg(value_name = "N")]
        n_pos: Option<usize>,
        #[arg(long = "n")]
        n_flag: Option<usize>,
    },
}

/// Failure with its exit code: 2 for usage, 3 for numerical trouble.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self { code: 2, kind: "usage".into(), message: msg.into() }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": self.kind, "code": self.code, "message": self.message }).to_string()
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::UnknownPreset(_) => (2, "unknown_preset"),
            Error::Parse(_) => (2, "parse"),
            Error::Domain(_) => (2, "domain"),
            Error::Unsupported(_) => (2, "unsupported"),
            Error::Pole(_) => (3, "pole"),
            Error::NonConvergence(_) => (3, "non_convergence"),
            Error::Tolerance { .. } => (3, "tolerance"),
            Error::Io(_) => (3, "io"),
            Error::Cache(_) => (3, "cache"),
        };
        Self { code, kind: kind.into(), message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Validated settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub output: Format,
    pub tol: f64,
    pub cache_dir: Option<PathBuf>,
    pub threads: usize,
    pub lspec: Option<PathBuf>,
}

impl RunConfig {
    /// Apply the cache precedence `--cache-dir`, then the environment.
    pub fn from_opts(g: &GlobalOpts, env_cache: Option<String>) -> CliResult<Self> {
        if !(g.tol > 0.0 && g.tol <= 1e-6) {
            return Err(CliError::usage(format!("--tol must lie in (0, 1e-6], got {}", g.tol)));
        }
        let cache_dir = g.cache_dir.clone().or_else(|| env_cache.filter(|s| !s.is_empty()).map(PathBuf::from));
        Ok(Self { output: g.output, tol: g.tol, cache_dir, threads: g.threads, lspec: g.lspec.clone() })
    }
}

/// Parse and run, returning the text for stdout.
pub fn run(cli: Cli) -> CliResult<String> {
    let cfg = RunConfig::from_opts(&cli.global, std::env::var(CACHE_ENV).ok())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(&cli.command, &cfg))
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> CliResult<String> {
    match cmd {
        Command::Count { preset, n_pos, n_flag, method } => {
            let n = n_flag.or(*n_pos).ok_or_else(|| CliError::usage("count needs N"))?;
            cmd_count(&preset.get()?, n, *method, cfg)
        }
        Command::Compare { preset, grid_pos, grid_flag } => {
            let g = grid_flag.clone().or_else(|| grid_pos.clone()).ok_or_else(|| CliError::usage("compare needs a grid"))?;
            cmd_compare(&preset.get()?, &parse_grid(&g)?, cfg)
        }
        Command::Constants { preset } => cmd_constants(&preset.get()?, cfg),
        Command::Zeta { name, s_pos, s_flag, method, k, m, eps } => {
            let s = s_flag.clone().or_else(|| s_pos.clone()).ok_or_else(|| CliError::usage("zeta needs --s"))?;
            cmd_zeta(*name, &s, *method, *k, *m, *eps, cfg)
        }
        Command::Saddle { preset, n_pos, n_flag } => {
            let n = n_flag.or(*n_pos).ok_or_else(|| CliError::usage("saddle needs N"))?;
            cmd_saddle(&preset.get()?, n, cfg)
        }
        Command::Cauchy { preset, n_pos, n_flag } => {
            let n = n_flag.or(*n_pos).ok_or_else(|| CliError::usage("cauchy needs N"))?;
            cmd_cauchy(&preset.get()?, n, cfg)
        }
    }
}

fn weight(preset: &str) -> CliResult<WeightFunction> {
    Ok(WeightFunction::from_preset(preset)?)
}

fn cap_for(w: &WeightFunction) -> usize {
    if *w == WeightFunction::Ones {
        ONES_CAP
    } else {
        GENERAL_CAP
    }
}

fn check_cap(w: &WeightFunction, n: usize) -> CliResult<()> {
    if n < 1 {
        return Err(CliError::usage("N must be at least 1"));
    }
    let cap = cap_for(w);
    if n > cap {
        return Err(CliError::usage(format!("N = {n} exceeds the limit {cap} for {w}")));
    }
    Ok(())
}

fn lspec_for(w: &WeightFunction, cfg: &RunConfig) -> CliResult<LSpec> {
    match &cfg.lspec {
        Some(path) => read_lspec(path),
        None => Ok(preset_lspec(w)?),
    }
}

/// Read and validate an L-spec JSON file.
pub fn read_lspec(path: &Path) -> CliResult<LSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let spec: LSpec = serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    spec.validate()?;
    Ok(spec)
}

/// Parse `a,b`, `a,b,step`, `a,b,log[K]` or a list of four or more values.
pub fn parse_grid(text: &str) -> CliResult<Vec<usize>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |t: &str| -> CliResult<usize> {
        let v: f64 = t.parse().map_err(|_| CliError::usage(format!("bad grid value '{t}'")))?;
        if !(v >= 1.0 && v.fract() == 0.0 && v < 1e12) {
            return Err(CliError::usage(format!("grid values must be positive integers, got '{t}'")));
        }
        Ok(v as usize)
    };
    let log_grid = |a: usize, b: usize, k: usize| -> Vec<usize> {
        if k < 2 || a == b {
            return vec![a, b];
        }
        let (la, lb) = ((a as f64).ln(), (b as f64).ln());
        (0..k).map(|i| (la + (lb - la) * i as f64 / (k - 1) as f64).exp().round() as usize).collect()
    };
    let mut grid = match parts.len() {
        0 | 1 => return Err(CliError::usage(format!("grid needs at least two values, got '{text}'"))),
        2 => log_grid(num(parts[0])?, num(parts[1])?, 10),
        3 => {
            let (a, b) = (num(parts[0])?, num(parts[1])?);
            if let Some(k) = parts[2].strip_prefix("log") {
                let k = if k.is_empty() { 10 } else { k.parse().map_err(|_| CliError::usage(format!("bad grid '{text}'")))? };
                log_grid(a, b, k)
            } else {
                let step = num(parts[2])?;
                if a > b {
                    return Err(CliError::usage("grid start exceeds its end"));
                }
                (a..=b).step_by(step).collect()
            }
        }
        _ => parts.iter().map(|t| num(t)).collect::<CliResult<Vec<_>>>()?,
    };
    grid.sort_unstable();
    grid.dedup();
    Ok(grid)
}

fn count_table(w: &WeightFunction, n: usize, method: CountMethod, cfg: &RunConfig) -> CliResult<CoeffTable> {
    Ok(match method {
        CountMethod::Auto => coeffs_cached(w, n, cfg.cache_dir.as_deref())?,
        CountMethod::Convolution => coeffs_conv(w, n)?,
        CountMethod::Oracle => coeffs_oracle(w, n)?,
        CountMethod::Pentagonal => {
            if *w != WeightFunction::Ones {
                return Err(CliError::usage("the pentagonal method only applies to ones"));
            }
            coeffs_pentagonal(n)
        }
    })
}

pub fn cmd_count(preset: &str, n: usize, method: CountMethod, cfg: &RunConfig) -> CliResult<String> {
    let w = weight(preset)?;
    check_cap(&w, n)?;
    let t = count_table(&w, n, method, cfg)?;
    Ok(match cfg.output {
        Format::Csv => t.to_csv(),
        Format::Json => {
            let values: Vec<String> = t.values.iter().map(|v| v.to_string()).collect();
            json!({ "preset": t.preset, "n_max": n, "values": values }).to_string() + "\n"
        }
    })
}

fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        String::new()
    }
}

fn model_for(w: &WeightFunction, cfg: &RunConfig) -> CliResult<(LSpec, AsymptoticModel)> {
    let spec = lspec_for(w, cfg)?;
    let model = build_model(&w.to_string(), &spec)?;
    Ok((spec, model))
}

pub fn cmd_compare(preset: &str, grid: &[usize], cfg: &RunConfig) -> CliResult<String> {
    let w = weight(preset)?;
    let top = *grid.last().ok_or_else(|| CliError::usage("empty grid"))?;
    check_cap(&w, top)?;
    let (_, model) = model_for(&w, cfg)?;
    let table = coeffs_cached(&w, top, cfg.cache_dir.as_deref())?;
    let fit = if grid.len() >= 2 { error_exponent_fit(&model, &table, grid).ok() } else { None };
    let rows: Vec<Value> = grid
        .iter()
        .map(|&n| {
            let exact_ln = table.ln(n);
            let est = evaluate(&model, n as u64);
            let log_error = exact_ln - est.log_value;
            json!({
                "n": n,
                "p_f_n": table.values[n].to_string(),
                "log_p_hat": est.log_value,
                "p_hat": est.value,
                "ratio": log_error.exp(),
                "log_error": log_error,
            })
        })
        .collect();
    Ok(match cfg.output {
        Format::Json => json!({ "preset": w.to_string(), "model": model, "rows": rows, "fit": fit }).to_string() + "\n",
        Format::Csv => {
            let mut out = String::from("n,p_f_n,p_hat,ratio,log_error\n");
            for r in &rows {
                let p_hat = match r["p_hat"].as_f64() {
                    Some(v) => fmt_f64(v),
                    None => format!("exp({})", fmt_f64(r["log_p_hat"].as_f64().unwrap_or(f64::NAN))),
                };
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r["n"],
                    r["p_f_n"].as_str().unwrap_or(""),
                    p_hat,
                    fmt_f64(r["ratio"].as_f64().unwrap_or(f64::NAN)),
                    fmt_f64(r["log_error"].as_f64().unwrap_or(f64::NAN)),
                ));
            }
            if let Some(f) = fit {
                out.push_str(&format!("slope,,,,{}\n", fmt_f64(f.slope)));
            }
            out
        }
    })
}

/// Small-denominator fraction within `tol` of `x`, if any.
pub fn recognize_rational(x: f64, max_den: i64, tol: f64) -> Option<Rational64> {
    for d in 1..=max_den {
        let n = (x * d as f64).round();
        if (n / d as f64 - x).abs() <= tol {
            return Some(Rational64::new(n as i64, d));
        }
    }
    None
}

pub fn cmd_constants(preset: &str, cfg: &RunConfig) -> CliResult<String> {
    let w = weight(preset)?;
    let (spec, model) = model_for(&w, cfg)?;
    let sets = exponent_sets(&spec);
    let pole_consts: Vec<f64> = spec.positive_poles.iter().map(pole_constant).collect();
    let k: Vec<f64> = if spec.positive_poles.len() == 2 {
        two_pole_constants_for(&spec)?.k[1..].to_vec()
    } else {
        vec![pole_consts[0].powf(1.0 / (spec.alpha() + 1.0))]
    };
    let b_rat = recognize_rational(model.b, 1000, 1e-9).map(|r| r.to_string());
    let rats = |v: &[Rational64]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>();
    let terms: Vec<Value> = model
        .exp_terms
        .iter()
        .zip(sets.exponential_exponents())
        .map(|((a, e), er)| json!({ "A": a, "exponent": e, "exponent_rational": er.to_string() }))
        .collect();
    Ok(match cfg.output {
        Format::Json => json!({
            "preset": model.preset,
            "alpha": model.alpha,
            "exp_terms": terms,
            "C": model.c,
            "b": model.b,
            "b_rational": b_rat,
            "K": k,
            "c": pole_consts,
            "L0": spec.l0,
            "L0_prime": spec.l0_prime,
            "next_error_exponent": model.next_error_exponent,
            "next_error_exponent_rational": sets.next_error_exponent().map(|r| r.to_string()),
            "exponent_sets": { "L": rats(&sets.l_set), "M": rats(&sets.m_set), "N": rats(&sets.n_set) },
        })
        .to_string()
            + "\n",
        Format::Csv => {
            let mut out = String::from("name,value,exact\n");
            for (j, ((a, e), er)) in model.exp_terms.iter().zip(sets.exponential_exponents()).enumerate() {
                out.push_str(&format!("A{},{},\n", j + 1, fmt_f64(*a)));
                out.push_str(&format!("alpha{},{},{}\n", j + 1, fmt_f64(*e), er));
            }
            out.push_str(&format!("C,{},\n", fmt_f64(model.c)));
            out.push_str(&format!("b,{},{}\n", fmt_f64(model.b), b_rat.unwrap_or_default()));
            for (j, kj) in k.iter().enumerate() {
                out.push_str(&format!("K{},{},\n", j + 1, fmt_f64(*kj)));
            }
            for (j, cj) in pole_consts.iter().enumerate() {
                out.push_str(&format!("c{},{},\n", j + 1, fmt_f64(*cj)));
            }
            out
        }
    })
}

/// Parse `re[,im]`.
pub fn parse_complex(text: &str) -> CliResult<C64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let p = |t: &str| t.parse::<f64>().map_err(|_| CliError::usage(format!("bad number '{t}' in '{text}'")));
    match parts.as_slice() {
        [re] => Ok(C64::new(p(re)?, 0.0)),
        [re, im] => Ok(C64::new(p(re)?, p(im)?)),
        _ => Err(CliError::usage(format!("expected re[,im], got '{text}'"))),
    }
}

fn mb_params(k: Option<usize>, m: Option<usize>, eps: Option<f64>, tol: f64) -> MbParams {
    let d = MbParams::default();
    MbParams { k: k.unwrap_or(d.k), m: m.unwrap_or(d.m), eps: eps.unwrap_or(d.eps), tol }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_zeta(
    name: ZetaName,
    s_text: &str,
    method: ZetaMethod,
    k: Option<usize>,
    m: Option<usize>,
    eps: Option<f64>,
    cfg: &RunConfig,
) -> CliResult<String> {
    let tol = cfg.tol;
    let (args, eval): (Vec<C64>, ZetaEval) = match name {
        ZetaName::So5 => {
            let s = parse_complex(s_text)?;
            let direct_ok = s.re > 1.0 / 3.0 + 0.05;
            let e = match (method, direct_ok) {
                (ZetaMethod::Direct, _) | (ZetaMethod::Auto, true) => zeta_so5_direct(s, tol)?,
                _ => {
                    let p = mb_params(k, m, eps, tol);
                    let p = if k.is_some() { p } else { so5_params_for(s, &p) };
                    zeta_so5_continued(s, &p)?
                }
            };
            (vec![s], e)
        }
        ZetaName::Su3 => {
            let s = parse_complex(s_text)?;
            let direct_ok = s.re > 0.55;
            let e = match (method, direct_ok) {
                (ZetaMethod::Direct, _) | (ZetaMethod::Auto, true) => zeta_su3_direct(s, tol)?,
                _ => zeta_su3_continued(s, &mb_params(k, m, eps, tol))?,
            };
            (vec![s], e)
        }
        ZetaName::Mt2 => {
            let v: Vec<C64> = s_text.split(';').map(parse_complex).collect::<CliResult<_>>()?;
            if v.len() != 3 {
                return Err(CliError::usage("mt2 needs three arguments 's1;s2;s3'"));
            }
            let convergent = (v[0] + v[2]).re > 1.0 && (v[1] + v[2]).re > 1.0 && (v[0] + v[1] + v[2]).re > 2.0;
            let e = match (method, convergent) {
                (ZetaMethod::Direct, _) | (ZetaMethod::Auto, true) => zeta_mt2_direct(v[0], v[1], v[2], tol)?,
                _ => {
                    let eps = eps.unwrap_or(MbParams::default().eps);
                    let m = match m {
                        Some(m) => m,
                        None => mt2_auto_m(v[0], v[1], v[2], eps, 1)?,
                    };
                    mt2_mellin_barnes(v[0], v[1], v[2], m, eps, tol)?
                }
            };
            (v, e)
        }
        ZetaName::Pk => {
            let s = parse_complex(s_text)?;
            let order = k.ok_or_else(|| CliError::usage("pk needs --k"))?;
            if method == ZetaMethod::Mb {
                return Err(CliError::usage("pk has no Mellin-Barnes evaluator"));
            }
            let order = u32::try_from(order).map_err(|_| CliError::usage("--k too large"))?;
            (vec![s], zeta_pk_direct(s, order, tol)?)
        }
    };
    let name_str = format!("{name:?}").to_lowercase();
    let method_str = serde_json::to_value(eval.method).unwrap_or(Value::Null);
    Ok(match cfg.output {
        Format::Json => json!({
            "name": name_str,
            "s": args.iter().map(|a| [a.re, a.im]).collect::<Vec<_>>(),
            "value": [eval.value.re, eval.value.im],
            "err_estimate": eval.err_estimate,
            "method": method_str,
        })
        .to_string()
            + "\n",
        Format::Csv => format!(
            "name,value_re,value_im,err_estimate,method\n{},{},{},{},{}\n",
            name_str,
            fmt_f64(eval.value.re),
            fmt_f64(eval.value.im),
            fmt_f64(eval.err_estimate),
            method_str.as_str().unwrap_or("")
        ),
    })
}

/// Presets whose L-data is available without evaluating a zeta numerically.
fn cheap_lspec(w: &WeightFunction) -> bool {
    matches!(w, WeightFunction::Ones | WeightFunction::PlanePartition | WeightFunction::Polygonal(_))
}

pub fn cmd_saddle(preset: &str, n: f64, cfg: &RunConfig) -> CliResult<String> {
    let w = weight(preset)?;
    if !(n >= 1.0) {
        return Err(CliError::usage("N must be at least 1"));
    }
    let spec = if cfg.lspec.is_some() || cheap_lspec(&w) { Some(lspec_for(&w, cfg)?) } else { None };
    let sp = solve_saddle(&w, spec.as_ref(), n)?;
    let asym = match &spec {
        Some(s) => Some(rho_asymptotic(s, n)?),
        None => None,
    };
    Ok(match cfg.output {
        Format::Json => json!({
            "preset": w.to_string(),
            "n": n,
            "rho": sp.rho,
            "residual": sp.residual,
            "iterations": sp.iterations,
            "rho_asymptotic": asym,
        })
        .to_string()
            + "\n",
        Format::Csv => format!(
            "n,rho,residual,iterations,rho_asymptotic\n{},{},{},{},{}\n",
            n,
            fmt_f64(sp.rho),
            fmt_f64(sp.residual),
            sp.iterations,
            asym.map(fmt_f64).unwrap_or_default()
        ),
    })
}

pub fn cmd_cauchy(preset: &str, n: usize, cfg: &RunConfig) -> CliResult<String> {
    let w = weight(preset)?;
    check_cap(&w, n.max(1))?;
    let cc = cauchy_count(&w, n)?;
    Ok(match cfg.output {
        Format::Json => json!({
            "preset": w.to_string(),
            "n": n,
            "value": cc.value,
            "nearest": cc.nearest.to_string(),
            "frac": cc.frac,
            "rho": cc.rho,
            "points": cc.points,
            "err_estimate": cc.err_estimate,
        })
        .to_string()
            + "\n",
        Format::Csv => format!(
            "n,value,nearest,frac,rho,points,err_estimate\n{},{},{},{},{},{},{}\n",
            n,
            fmt_f64(cc.value),
            cc.nearest,
            fmt_f64(cc.frac),
            fmt_f64(cc.rho),
            cc.points,
            fmt_f64(cc.err_estimate)
        ),
    })
}
