//! Main-term asymptotics `p_f(n) ~ C n^{-b} exp(sum A_j n^{e_j})` built from
//! an [`LSpec`], plus evaluation and empirical fits of the correction size.

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::CoeffTable;
use crate::model::{exponent_sets, pole_constant, to_f64, AsymptoticModel, LSpec};
use crate::saddle::{rho_coefficients, two_pole_ell};
use crate::special::ln_gamma_real;

/// Constants of the two-pole expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoPoleConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// `K_1 .. K_5` of the saddle point expansion.
    pub k: Vec<f64>,
    /// `A_1 .. A_{l+1}`.
    pub a: Vec<f64>,
    pub ell: usize,
}

/// `binom(-x, m)` for `x > 0` as `(-1)^m Gamma(x+m) / (Gamma(x) m!)`.
pub fn binom_neg(x: f64, m: usize) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    sign * (ln_gamma_real(x + m as f64) - ln_gamma_real(x) - ln_gamma_real(m as f64 + 1.0)).exp()
}

/// All `(j_1..j_len)` with `sum j_i = parts` and `sum i j_i = weight`.
fn weighted_compositions(len: usize, parts: usize, weight: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, len: usize, parts: usize, weight: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i > len {
            if parts == 0 && weight == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for j in 0..=parts.min(weight / i) {
            cur.push(j);
            go(i + 1, len, parts - j, weight - i * j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, len, parts, weight, &mut Vec::with_capacity(len), &mut out);
    out
}

fn multinomial(parts: &[usize]) -> f64 {
    let mut fact = [1u128; 33];
    for i in 1..fact.len() {
        fact[i] = fact[i - 1] * i as u128;
    }
    let m: usize = parts.iter().sum();
    let den: u128 = parts.iter().map(|&j| fact[j]).product();
    (fact[m] / den) as f64
}

/// `sum_m binom(-x, m) sum_j multinom(m; j) prod K_{i+1}^{j_i} / c1^{m/(alpha+1)}`
/// restricted to `sum i j_i = weight`.
fn composition_sum(x: f64, weight: usize, ell: usize, k: &[f64], c1: f64, a1: f64) -> f64 {
    let mut total = 0.0;
    for m in 1..=ell {
        let mut inner = 0.0;
        for j in weighted_compositions(ell, m, weight) {
            let mut prod = multinomial(&j);
            for (i, &ji) in j.iter().enumerate() {
                prod *= k[i + 1].powi(ji as i32);
            }
            inner += prod;
        }
        total += binom_neg(x, m) * inner / c1.powf(m as f64 / a1);
    }
    total
}

/// Two-pole constants from `alpha > beta > 0` and `c_1, c_2, c_3`.
pub fn two_pole_constants(alpha: Rational64, beta: Rational64, c1: f64, c2: f64, c3: f64) -> Result<TwoPoleConstants> {
    let ell = two_pole_ell(alpha, beta)?;
    if ell > 4 {
        return Err(Error::Unsupported(format!("l = {ell} needs saddle coefficients past K_5")));
    }
    if !(c1 > 0.0) {
        return Err(Error::Domain("leading pole constant must be positive".into()));
    }
    let (a, b) = (to_f64(alpha), to_f64(beta));
    let a1 = a + 1.0;
    let k = rho_coefficients(a, b, c1, c2).to_vec();
    let lead = c1.powf(1.0 / a1);
    let second = c2 / (b * c1.powf(b / a1));
    let mut coeffs = vec![(1.0 + 1.0 / a) * lead, second];
    for idx in 3..=ell + 1 {
        let first = lead / a * composition_sum(a, idx - 1, ell, &k, c1, a1);
        let cross = second * composition_sum(b, idx - 2, ell, &k, c1, a1);
        coeffs.push(k[idx - 1] + first + cross);
    }
    Ok(TwoPoleConstants { c1, c2, c3, k, a: coeffs, ell })
}

fn prefactor(spec: &LSpec, c1: f64) -> (f64, f64) {
    let a = spec.alpha();
    let a1 = a + 1.0;
    let c = spec.l0_prime.exp() * c1.powf((0.5 - spec.l0) / a1) / (2.0 * std::f64::consts::PI * a1).sqrt();
    let b = (1.0 - spec.l0 + a / 2.0) / a1;
    (c, b)
}

fn next_error(spec: &LSpec) -> f64 {
    exponent_sets(spec).next_error_exponent().map(to_f64).unwrap_or(f64::NAN)
}

/// Model for an `L_f` with a single positive pole.
pub fn one_pole_model(preset: &str, spec: &LSpec) -> Result<AsymptoticModel> {
    if spec.positive_poles.len() != 1 {
        return Err(Error::Domain(format!("expected one positive pole, got {}", spec.positive_poles.len())));
    }
    let a = spec.alpha();
    let c1 = pole_constant(&spec.positive_poles[0]);
    let (c, b) = prefactor(spec, c1);
    Ok(AsymptoticModel {
        preset: preset.to_string(),
        alpha: a,
        exp_terms: vec![((1.0 + 1.0 / a) * c1.powf(1.0 / (a + 1.0)), a / (a + 1.0))],
        c,
        b,
        next_error_exponent: next_error(spec),
    })
}

/// Exponent of `A_k` in the two-pole expansion, exactly.
pub fn two_pole_exponent(alpha: Rational64, beta: Rational64, k: usize) -> Rational64 {
    let one = Rational64::from_integer(1);
    match k {
        1 => alpha / (alpha + one),
        2 => beta / (alpha + one),
        _ => {
            let k = k as i64;
            (beta * (k - 1) - alpha * (k - 2)) / (alpha + one)
        }
    }
}

/// Two-pole constants for a spec with exactly two positive poles.
pub fn two_pole_constants_for(spec: &LSpec) -> Result<TwoPoleConstants> {
    if spec.positive_poles.len() != 2 {
        return Err(Error::Domain(format!("expected two positive poles, got {}", spec.positive_poles.len())));
    }
    let (p, q) = (&spec.positive_poles[0], &spec.positive_poles[1]);
    two_pole_constants(p.at, q.at, pole_constant(p), pole_constant(q), spec.l0)
}

/// Model for an `L_f` with exactly two positive poles.
pub fn two_pole_model(preset: &str, spec: &LSpec) -> Result<AsymptoticModel> {
    let tc = two_pole_constants_for(spec)?;
    let (alpha, beta) = (spec.positive_poles[0].at, spec.positive_poles[1].at);
    let exp_terms = tc.a.iter().enumerate().map(|(i, &a)| (a, to_f64(two_pole_exponent(alpha, beta, i + 1)))).collect();
    let (c, b) = prefactor(spec, tc.c1);
    Ok(AsymptoticModel { preset: preset.to_string(), alpha: spec.alpha(), exp_terms, c, b, next_error_exponent: next_error(spec) })
}

/// Pick the one- or two-pole construction.
pub fn build_model(preset: &str, spec: &LSpec) -> Result<AsymptoticModel> {
    match spec.positive_poles.len() {
        1 => one_pole_model(preset, spec),
        2 => two_pole_model(preset, spec),
        n => Err(Error::Unsupported(format!("{n} positive poles"))),
    }
}

/// Value of the main term at one `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub log_value: f64,
    /// `exp(log_value)` when it is a finite double.
    pub value: Option<f64>,
}

pub fn evaluate(model: &AsymptoticModel, n: u64) -> Estimate {
    let log_value = model.log_estimate(n as f64);
    let v = log_value.exp();
    Estimate { log_value, value: (v.is_finite() && v > 0.0).then_some(v) }
}

/// Least-squares line through `(x_i, y_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return Err(Error::Domain("need at least two points".into()));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("degenerate grid".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LineFit { slope, intercept: my - slope * mx, r2, points: n })
}

/// `log |p_f(n)/p_hat(n) - 1|` for each `n` of the grid.
pub fn log_relative_errors(model: &AsymptoticModel, table: &CoeffTable, grid: &[usize]) -> Result<Vec<f64>> {
    grid.iter()
        .map(|&n| {
            if n == 0 || n > table.max_n() {
                return Err(Error::Domain(format!("n = {n} outside the table")));
            }
            let d = table.ln(n) - model.log_estimate(n as f64);
            let rel = d.exp_m1().abs();
            if rel == 0.0 {
                return Err(Error::Domain(format!("exact agreement at n = {n}")));
            }
            Ok(rel.ln())
        })
        .collect()
}

/// Slope of `log |p_f/p_hat - 1|` against `log n`.
pub fn error_exponent_fit(model: &AsymptoticModel, table: &CoeffTable, grid: &[usize]) -> Result<LineFit> {
    let ys = log_relative_errors(model, table, grid)?;
    let xs: Vec<f64> = grid.iter().map(|&n| (n as f64).ln()).collect();
    fit_line(&xs, &ys)
}
