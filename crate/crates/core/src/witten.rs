//! Witten zeta functions of so(5) and su(3), the Mordell-Tornheim double
//! zeta `zeta_MT(s1, s2, s3) = sum m^{-s1} n^{-s2} (m+n)^{-s3}`, and the zeta
//! function of polygonal numbers.
//!
//! Two evaluators are provided. Lattice sums are summed directly over a
//! finite box, and the rest is expanded asymptotically into Hurwitz tails.
//! Those tails are meromorphic, so the same code continues a little past the
//! abscissa of convergence. Mellin-Barnes integrals along vertical lines give
//! the continuation to the left, down to `s = 0` and below.

use std::f64::consts::PI;
use std::sync::Mutex;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{LSpec, Pole};
use crate::quad::{decay_window, integrate, pairwise_sum, QuadOpts};
use crate::special::{binom, hurwitz_tail, hurwitz_tail_batch, ln_gamma_raw, rgamma, zeta_raw};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    DirectSum,
    MellinBarnes,
}

/// A value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaEval {
    pub value: C64,
    pub err_estimate: f64,
    pub method: Method,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn finite(v: C64) -> bool {
    v.re.is_finite() && v.im.is_finite()
}

/// `f(x0)` from symmetric pairs `f(x0 +- j d)`, `j = 1, 2, 3`, for `f`
/// analytic at `x0` but awkward to evaluate there. Error `O(d^6)`.
fn symmetric_limit<F>(f: F, x0: C64, d: f64) -> Result<(C64, f64)>
where
    F: Fn(C64) -> Result<(C64, f64)> + Sync,
{
    let pts: Vec<C64> = (1..=3).flat_map(|j| [x0 + d * j as f64, x0 - d * j as f64]).collect();
    let vals: Vec<Result<(C64, f64)>> = pts.par_iter().map(|&x| f(x)).collect();
    let mut v = Vec::with_capacity(6);
    let mut err = 0.0f64;
    for r in vals {
        let (val, e) = r?;
        v.push(val);
        err = err.max(e);
    }
    let avg: Vec<C64> = (0..3).map(|j| (v[2 * j] + v[2 * j + 1]) * 0.5).collect();
    let value = (avg[0] * 15.0 - avg[1] * 6.0 + avg[2]) / 10.0;
    let lower = (avg[0] * 4.0 - avg[1]) / 3.0;
    let round = 16.0 * f64::EPSILON * v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    Ok((value, 3.0 * err + (value - lower).norm() + round))
}

// ---------------------------------------------------------------------------
// Lattice sums
// ---------------------------------------------------------------------------

const ROW_CUTS: [usize; 2] = [40, 56];
const SERIES_TERMS: usize = 64;
const TAIL_TERMS: usize = 48;

/// `sum_{m,n >= 1} m^{-a} n^{-b} prod_i (m + lam_i n)^{-e_i}`.
#[derive(Debug, Clone)]
struct Lattice {
    a: C64,
    b: C64,
    lam: Vec<f64>,
    e: Vec<C64>,
}

/// Coefficients of `(1 + scale y)^{-e}`.
fn binom_series(e: C64, scale: f64, count: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(count);
    let mut t = c(1.0, 0.0);
    for k in 0..count {
        out.push(t);
        t = t * (-e - k as f64) / (k + 1) as f64 * scale;
    }
    out
}

fn mul_series(x: &[C64], y: &[C64]) -> Vec<C64> {
    let n = x.len().min(y.len());
    (0..n).map(|k| (0..=k).map(|i| x[i] * y[k - i]).sum()).collect()
}

impl Lattice {
    fn total_e(&self) -> C64 {
        self.e.iter().sum()
    }

    fn lam_min(&self) -> f64 {
        self.lam.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn lam_max(&self) -> f64 {
        self.lam.iter().copied().fold(0.0, f64::max)
    }

    /// Taylor coefficients at 0 of `psi(x) = prod (x + lam_i)^{-e_i}`.
    fn psi_coeffs(&self, count: usize) -> Vec<C64> {
        let mut acc = vec![c(0.0, 0.0); count];
        acc[0] = c(1.0, 0.0);
        for (l, e) in self.lam.iter().zip(&self.e) {
            let lead = (-*e * l.ln()).exp();
            let ser: Vec<C64> = binom_series(*e, 1.0 / l, count).into_iter().map(|v| v * lead).collect();
            acc = mul_series(&acc, &ser);
        }
        acc
    }

    /// Coefficients of `prod (1 + lam_i u)^{-e_i}`.
    fn psi_hat_coeffs(&self, count: usize) -> Vec<C64> {
        let mut acc = vec![c(0.0, 0.0); count];
        acc[0] = c(1.0, 0.0);
        for (l, e) in self.lam.iter().zip(&self.e) {
            acc = mul_series(&acc, &binom_series(*e, *l, count));
        }
        acc
    }

    fn psi(&self, x: f64) -> C64 {
        let mut ln = c(0.0, 0.0);
        for (l, e) in self.lam.iter().zip(&self.e) {
            ln -= *e * (x + l).ln();
        }
        ln.exp()
    }

    fn term(&self, m: f64, n: f64) -> C64 {
        let mut ln = -self.a * m.ln();
        for (l, e) in self.lam.iter().zip(&self.e) {
            ln -= *e * (m + l * n).ln();
        }
        ln.exp()
    }

    /// Full row `n^{-b} sum_m m^{-a} prod (m + lam_i n)^{-e_i}`.
    fn row(&self, n: usize, hat: &[C64]) -> Result<(C64, f64)> {
        let nf = n as f64;
        let ln_n = nf.ln();
        let m0 = (2.0 * self.lam_max() * nf).ceil() as u64 + 8;
        let terms: Vec<C64> = (1..m0).map(|m| self.term(m as f64, nf)).collect();
        let direct = pairwise_sum(&terms);
        let sigma = self.a + self.total_e();
        let hz = hurwitz_tail_batch(sigma, m0, hat.len())?;
        let mut tail = c(0.0, 0.0);
        let mut err = 0.0;
        let mut nj = 1.0;
        let mut last = 0.0;
        for (d, (h, he)) in hat.iter().zip(&hz) {
            let t = *d * nj * *h;
            tail += t;
            err += d.norm() * nj * he;
            last = t.norm();
            nj *= nf;
        }
        let nb = (-self.b * ln_n).exp();
        let mag = terms.iter().map(|t| t.norm()).sum::<f64>();
        let value = nb * (direct + tail);
        Ok((value, nb.norm() * (err + last + 4.0 * f64::EPSILON * (mag + tail.norm()))))
    }

    /// `int_0^inf x^{-a} psi(x) dx`, continued in `a` and `e`.
    fn mellin_psi(&self, a: C64) -> Result<(C64, f64)> {
        let x0 = 0.5 * self.lam_min();
        let x1 = 2.0 * self.lam_max();
        let coeffs = self.psi_coeffs(SERIES_TERMS);
        let mut low = c(0.0, 0.0);
        for (k, ck) in coeffs.iter().enumerate() {
            let p = -a + (k + 1) as f64;
            low += *ck * (p * x0.ln()).exp() / p;
        }
        let f = |x: f64| (-a * x.ln()).exp() * self.psi(x);
        let opts = QuadOpts { abs_tol: 1e-16, rel_tol: 1e-14, max_panels: 2000, initial_panels: 4 };
        let mid = integrate(&f, x0, x1, opts)?;
        let hat = self.psi_hat_coeffs(SERIES_TERMS);
        let u0 = 1.0 / x1;
        let shift = a + self.total_e() - 1.0;
        let mut high = c(0.0, 0.0);
        for (j, dj) in hat.iter().enumerate() {
            let p = shift + j as f64;
            high += *dj * (p * u0.ln()).exp() / p;
        }
        let value = low + mid.value + high;
        let err = mid.err + 8.0 * f64::EPSILON * (low.norm() + high.norm() + mid.value.norm());
        Ok((value, err))
    }

    /// `sum_{n > n0} n^{-b} sum_m ...` from the Mellin asymptotics of the
    /// rows, as a function of the `m` exponent.
    fn outer_tail_at(&self, a: C64, n0: usize) -> Result<(C64, f64)> {
        let e = self.total_e();
        let (phi, phi_err) = self.mellin_psi(a)?;
        let (h0, h0_err) = hurwitz_tail(a + self.b + e - 1.0, n0 as u64 + 1)?;
        let coeffs = self.psi_coeffs(TAIL_TERMS);
        let hz = hurwitz_tail_batch(self.b + e, n0 as u64 + 1, TAIL_TERMS)?;
        let mut total = phi * h0;
        let mut err = phi_err * h0.norm() + phi.norm() * h0_err;
        let mut last = f64::INFINITY;
        for k in 0..TAIL_TERMS {
            let z = zeta_raw(a - k as f64);
            let t = coeffs[k] * z * hz[k].0;
            total += t;
            err += (coeffs[k] * z).norm() * hz[k].1;
            last = t.norm();
        }
        Ok((total, err + last + 8.0 * f64::EPSILON * total.norm()))
    }

    fn outer_tail(&self, n0: usize) -> Result<(C64, f64)> {
        let r = self.a.re.round();
        let near_int = r >= 1.0 && r <= TAIL_TERMS as f64 && (self.a - r).norm() < 1e-3;
        if near_int {
            symmetric_limit(|a| self.outer_tail_at(a, n0), self.a, 2e-3)
        } else {
            self.outer_tail_at(self.a, n0)
        }
    }

    fn sum(&self, n0: usize) -> Result<(C64, f64)> {
        let hat = self.psi_hat_coeffs(SERIES_TERMS);
        let rows: Vec<Result<(C64, f64)>> = (1..=n0).into_par_iter().map(|n| self.row(n, &hat)).collect();
        let mut vals = Vec::with_capacity(n0);
        let mut err = 0.0;
        for r in rows {
            let (v, e) = r?;
            vals.push(v);
            err += e;
        }
        let (tail, tail_err) = self.outer_tail(n0)?;
        Ok((pairwise_sum(&vals) + tail, err + tail_err))
    }

    /// Value at the larger cut, error from the disagreement of two cuts.
    fn eval(&self) -> Result<(C64, f64)> {
        let (v1, e1) = self.sum(ROW_CUTS[0])?;
        let (v2, e2) = self.sum(ROW_CUTS[1])?;
        if !finite(v1) || !finite(v2) {
            return Err(Error::NonConvergence("lattice sum is not finite".into()));
        }
        Ok((v2, (v1 - v2).norm() + e1.max(e2)))
    }
}

fn check_tol(v: C64, err: f64, tol: f64) -> Result<()> {
    if err > tol * v.norm().max(1.0) {
        return Err(Error::Tolerance { requested: tol, achieved: err / v.norm().max(1.0) });
    }
    Ok(())
}

fn direct(value: C64, err: f64) -> ZetaEval {
    ZetaEval { value, err_estimate: err, method: Method::DirectSum }
}

/// `zeta_MT(s1, s2, s3)` by summation where the double series converges.
/// `tol` bounds the error relative to `max(1, |value|)`.
pub fn zeta_mt2_direct(s1: C64, s2: C64, s3: C64, tol: f64) -> Result<ZetaEval> {
    if !((s1 + s3).re > 1.0 && (s2 + s3).re > 1.0 && (s1 + s2 + s3).re > 2.0) {
        return Err(Error::Domain(format!("double series diverges at ({s1}, {s2}, {s3})")));
    }
    let (v, e) = Lattice { a: s1, b: s2, lam: vec![1.0], e: vec![s3] }.eval()?;
    check_tol(v, e, tol)?;
    Ok(direct(v, e))
}

fn near(s: C64, x: f64, d: f64) -> bool {
    (s - x).norm() < d
}

/// `zeta_so5(s) = 6^s sum m^{-s} n^{-s} (m+n)^{-s} (m+2n)^{-s}`. The
/// accelerated tails continue the sum into `1/3 < Re s <= 1/2`.
pub fn zeta_so5_direct(s: C64, tol: f64) -> Result<ZetaEval> {
    if s.re <= 1.0 / 3.0 + 1e-3 {
        return Err(Error::Domain(format!("lattice evaluation needs Re s > 1/3, got {s}")));
    }
    if near(s, 0.5, 1e-3) {
        return Err(Error::Pole(format!("{s} is within 1e-3 of the pole at 1/2")));
    }
    let (v, e) = Lattice { a: s, b: s, lam: vec![1.0, 2.0], e: vec![s, s] }.eval()?;
    let six = (s * 6f64.ln()).exp();
    let (v, e) = (v * six, e * six.norm());
    check_tol(v, e, tol)?;
    Ok(direct(v, e))
}

/// `zeta_su3(s) = 2^s zeta_MT(s, s, s)`, continued into `1/2 < Re s`.
pub fn zeta_su3_direct(s: C64, tol: f64) -> Result<ZetaEval> {
    if s.re <= 0.5 + 1e-3 {
        return Err(Error::Domain(format!("lattice evaluation needs Re s > 1/2, got {s}")));
    }
    if near(s, 2.0 / 3.0, 1e-3) {
        return Err(Error::Pole(format!("{s} is within 1e-3 of the pole at 2/3")));
    }
    let (v, e) = Lattice { a: s, b: s, lam: vec![1.0], e: vec![s] }.eval()?;
    let two = (s * 2f64.ln()).exp();
    let (v, e) = (v * two, e * two.norm());
    check_tol(v, e, tol)?;
    Ok(direct(v, e))
}

fn pk_sum(s: C64, k: u32, cut: u64) -> Result<(C64, f64)> {
    let kf = k as f64;
    let shift = (kf - 4.0) / (kf - 2.0);
    let terms: Vec<C64> =
        (1..cut).map(|n| (-s * (crate::model::polygonal_number(k, n) as f64).ln()).exp()).collect();
    let head = pairwise_sum(&terms);
    let count = 24;
    let hz = hurwitz_tail_batch(s * 2.0, cut, count)?;
    let mut tail = c(0.0, 0.0);
    let mut err = 0.0;
    let mut pw = 1.0;
    for (j, (h, he)) in hz.iter().enumerate() {
        let coef = binom(-s, j) * pw;
        tail += coef * *h;
        err += coef.norm() * he;
        pw *= -shift;
    }
    let scale = (-s * ((kf - 2.0) / 2.0).ln()).exp();
    let value = head + scale * tail;
    Ok((value, err * scale.norm() + 4.0 * f64::EPSILON * (head.norm() + value.norm())))
}

/// `Z_{P_k}(s) = sum_n P_k(n)^{-s}` over the k-gonal numbers.
pub fn zeta_pk_direct(s: C64, k: u32, tol: f64) -> Result<ZetaEval> {
    if k < 3 {
        return Err(Error::Domain(format!("polygonal order must be >= 3, got {k}")));
    }
    if s.re <= 0.5 {
        return Err(Error::Domain(format!("series diverges for Re s <= 1/2, got {s}")));
    }
    let (v1, e1) = pk_sum(s, k, 32)?;
    let (v2, e2) = pk_sum(s, k, 48)?;
    let err = (v1 - v2).norm() + e1.max(e2);
    check_tol(v2, err, tol)?;
    Ok(direct(v2, err))
}

// ---------------------------------------------------------------------------
// Mellin-Barnes continuations
// ---------------------------------------------------------------------------

/// Settings of the contour integrals. `k` is the shift of the outer so(5)
/// contour, `m` the smallest shift used for the double zeta, `eps` the offset
/// of both lines to the left of an integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MbParams {
    pub k: usize,
    pub m: usize,
    pub eps: f64,
    pub tol: f64,
}

impl Default for MbParams {
    fn default() -> Self {
        Self { k: 3, m: 1, eps: 0.5, tol: 1e-12 }
    }
}

const LINE_MARGIN: f64 = 0.05;
const MAX_HEIGHT: f64 = 400.0;

/// Whether the line `Re w = m - eps` separates the poles as the formula needs.
pub fn mt2_window_ok(s1: C64, s2: C64, s3: C64, m: usize, eps: f64) -> bool {
    let line = m as f64 - eps;
    s2.re - 1.0 < line - LINE_MARGIN && 1.0 - (s1 + s3).re < line - LINE_MARGIN && -s3.re < line - LINE_MARGIN
}

/// Smallest admissible shift `>= min_m`.
pub fn mt2_auto_m(s1: C64, s2: C64, s3: C64, eps: f64, min_m: usize) -> Result<usize> {
    (min_m.max(1)..=64)
        .find(|&m| mt2_window_ok(s1, s2, s3, m, eps))
        .ok_or_else(|| Error::Domain(format!("no admissible contour for ({s1}, {s2}, {s3})")))
}

fn ln_gamma_pair(x: C64, y: C64) -> C64 {
    ln_gamma_raw(x) + ln_gamma_raw(y)
}

fn mt2_mb_raw(s1: C64, s2: C64, s3: C64, m: usize, eps: f64, tol: f64) -> Result<(C64, f64)> {
    let rg = rgamma(s3);
    let closed = ln_gamma_pair(s2 + s3 - 1.0, c(1.0, 0.0) - s2).exp() * rg * zeta_raw(s1 + s2 + s3 - 1.0);
    let mut partial = closed;
    let mut mag = closed.norm();
    for j in 0..m {
        let t = binom(-s3, j) * zeta_raw(s1 + s3 + j as f64) * zeta_raw(s2 - j as f64);
        partial += t;
        mag += t.norm();
    }
    let line = m as f64 - eps;
    let f = |t: f64| {
        let w = c(line, t);
        ln_gamma_pair(s3 + w, -w).exp() * rg * zeta_raw(s1 + s3 + w) * zeta_raw(s2 - w) / (2.0 * PI)
    };
    let scale = mag.max(1e-300);
    let tail_tol = tol * scale / 10.0;
    let center = -0.5 * s3.im;
    let (lo, hi, tail) = decay_window(&f, center, PI, tail_tol, MAX_HEIGHT)?;
    let (a, b) = (center - lo, center + hi);
    let opts = QuadOpts {
        abs_tol: tail_tol,
        rel_tol: tol / 10.0,
        max_panels: 4000,
        initial_panels: ((b - a) / 1.5).ceil() as usize,
    };
    let q = integrate(&f, a, b, opts)?;
    let value = partial + q.value;
    if !finite(value) {
        return Err(Error::Pole(format!("double zeta is singular at ({s1}, {s2}, {s3})")));
    }
    Ok((value, q.err + tail + 16.0 * f64::EPSILON * (mag + q.value.norm())))
}

/// `zeta_MT(s1, s2, s3)` by the Mellin-Barnes formula with the line at
/// `Re w = m - eps`.
pub fn mt2_mellin_barnes(s1: C64, s2: C64, s3: C64, m: usize, eps: f64, tol: f64) -> Result<ZetaEval> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !mt2_window_ok(s1, s2, s3, m, eps) {
        return Err(Error::Domain(format!("contour Re w = {} outside the window for ({s1}, {s2}, {s3})", m as f64 - eps)));
    }
    let r = s2.re.round();
    let removable = r >= 1.0 && r <= m as f64 && (s2 - r).norm() < 1e-3;
    let (value, err) = if removable {
        symmetric_limit(|x| mt2_mb_raw(s1, x, s3, m, eps, tol), s2, 2e-3)?
    } else {
        mt2_mb_raw(s1, s2, s3, m, eps, tol)?
    };
    Ok(ZetaEval { value, err_estimate: err, method: Method::MellinBarnes })
}

fn mt2_auto(s1: C64, s2: C64, s3: C64, eps: f64, min_m: usize, tol: f64) -> Result<ZetaEval> {
    let m = mt2_auto_m(s1, s2, s3, eps, min_m)?;
    mt2_mellin_barnes(s1, s2, s3, m, eps, tol)
}

/// `zeta_MT(s, s - z, 2s + z)`, the family appearing in the so(5) formula.
pub fn zeta_mt2_continued(s: C64, z: C64, m: usize, eps: f64) -> Result<ZetaEval> {
    mt2_mellin_barnes(s, s - z, s * 2.0 + z, m, eps, 1e-12)
}

fn so5_pole(s: C64) -> Option<String> {
    if near(s, 0.5, 1e-3) {
        return Some("1/2".into());
    }
    let d = (3.0 * s.re).round();
    let odd = (d as i64).rem_euclid(2) == 1;
    let integral = (d as i64) % 3 == 0;
    if d <= 1.0 && odd && !integral && near(s, d / 3.0, 1e-3) {
        return Some(format!("{}/3", d as i64));
    }
    None
}

fn so5_mb_raw(s: C64, p: &MbParams) -> Result<(C64, f64)> {
    let inner_tol = p.tol / 10.0;
    let mut sum = c(0.0, 0.0);
    let mut mag = 0.0;
    let mut err = 0.0;
    let mut coef = c(1.0, 0.0);
    for k in 0..p.k {
        let mt = mt2_auto(s, s - k as f64, s * 2.0 + k as f64, p.eps, p.m, inner_tol)?;
        let t = coef * mt.value;
        sum += t;
        mag += t.norm();
        err += coef.norm() * mt.err_estimate;
        coef = -coef * (s + k as f64) / (k + 1) as f64;
    }
    let line = p.k as f64 - p.eps;
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let worst: Mutex<f64> = Mutex::new(0.0);
    let f = |t: f64| {
        let z = c(line, t);
        let g = ln_gamma_pair(s + z, -z).exp();
        match mt2_auto(s, s - z, s * 2.0 + z, p.eps, p.m, inner_tol) {
            Ok(mt) => {
                let mut w = worst.lock().expect("poisoned");
                *w = w.max(g.norm() * mt.err_estimate / (2.0 * PI));
                g * mt.value / (2.0 * PI)
            }
            Err(e) => {
                failure.lock().expect("poisoned").get_or_insert(e);
                c(f64::NAN, f64::NAN)
            }
        }
    };
    let rg = rgamma(s);
    let scale = mag.max(1e-300);
    let tail_tol = p.tol * scale / (10.0 * rg.norm().max(1e-300));
    let center = -0.5 * s.im;
    let window = decay_window(&f, center, PI, tail_tol, MAX_HEIGHT);
    if let Some(e) = failure.lock().expect("poisoned").take() {
        return Err(e);
    }
    let (lo, hi, tail) = window?;
    let (a, b) = (center - lo, center + hi);
    let opts = QuadOpts {
        abs_tol: tail_tol,
        rel_tol: p.tol,
        max_panels: 2000,
        initial_panels: ((b - a) / 1.5).ceil() as usize,
    };
    let q = integrate(&f, a, b, opts);
    if let Some(e) = failure.lock().expect("poisoned").take() {
        return Err(e);
    }
    let q = q?;
    let inner = *worst.lock().expect("poisoned") * (b - a);
    let six = (s * 6f64.ln()).exp();
    let value = six * (sum + rg * q.value);
    let err = six.norm()
        * (err + rg.norm() * (q.err + tail + inner) + 16.0 * f64::EPSILON * (mag + (rg * q.value).norm()));
    Ok((value, err))
}

/// `zeta_so5(s)` through the Mellin-Barnes continuation, valid for
/// `Re s > (1 - k + eps)/3` away from the poles `1/2` and `d/3`, `d <= 1`
/// odd and `d/3` not an integer.
pub fn zeta_so5_continued(s: C64, p: &MbParams) -> Result<ZetaEval> {
    if let Some(at) = so5_pole(s) {
        return Err(Error::Pole(format!("{s} is within 1e-3 of the pole at {at}")));
    }
    let bound = (1.0 - p.k as f64 + p.eps) / 3.0;
    if s.re <= bound + 0.02 {
        return Err(Error::Domain(format!("Re s must exceed {bound:.4} for k = {}, eps = {}", p.k, p.eps)));
    }
    let d = (3.0 * s.re).round();
    let singular_pieces = d <= 1.0 && (s * 3.0 - d).norm() < 3e-3;
    let (value, err) =
        if singular_pieces { symmetric_limit(|x| so5_mb_raw(x, p), s, 2e-3)? } else { so5_mb_raw(s, p)? };
    Ok(ZetaEval { value, err_estimate: err, method: Method::MellinBarnes })
}

/// Smallest admissible outer shift for `s`, at least `p.k`.
pub fn so5_params_for(s: C64, p: &MbParams) -> MbParams {
    let mut q = *p;
    while s.re <= (1.0 - q.k as f64 + q.eps) / 3.0 + 0.02 {
        q.k += 1;
    }
    q
}

/// `zeta_su3(s) = 2^s zeta_MT(s, s, s)` through the Mellin-Barnes formula.
pub fn zeta_su3_continued(s: C64, p: &MbParams) -> Result<ZetaEval> {
    if near(s, 2.0 / 3.0, 1e-3) || near(s, 0.5, 1e-3) {
        return Err(Error::Pole(format!("{s} is within 1e-3 of a pole")));
    }
    let raw = |x: C64| -> Result<(C64, f64)> {
        let v = mt2_auto(x, x, x, p.eps, p.m, p.tol)?;
        let two = (x * 2f64.ln()).exp();
        Ok((two * v.value, two.norm() * v.err_estimate))
    };
    let d = (2.0 * s.re).round();
    let singular_pieces = d <= 0.0 && (s * 2.0 - d).norm() < 2e-3;
    let (value, err) = if singular_pieces { symmetric_limit(raw, s, 2e-3)? } else { raw(s)? };
    Ok(ZetaEval { value, err_estimate: err, method: Method::MellinBarnes })
}

// ---------------------------------------------------------------------------
// Residues and derivatives
// ---------------------------------------------------------------------------

/// A limit obtained by polynomial extrapolation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrapolation {
    pub value: f64,
    pub err_estimate: f64,
}

/// `{0.2, 0.1, 0.05, 0.025}`.
pub fn default_h_grid() -> Vec<f64> {
    geometric_grid(0.2, 4)
}

pub fn geometric_grid(h0: f64, points: usize) -> Vec<f64> {
    (0..points).map(|j| h0 / 2f64.powi(j as i32)).collect()
}

/// Interpolating polynomial through `(h_i, v_i)`, `i <= last`, at 0.
fn lagrange_at_zero(hs: &[f64], vs: &[f64], last: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..=last {
        let mut w = 1.0;
        for k in 0..=last {
            if k != i {
                w *= hs[k] / (hs[k] - hs[i]);
            }
        }
        acc += w * vs[i];
    }
    acc
}

/// Extrapolate `v(h)` to `h = 0` from the grid.
pub fn extrapolate(hs: &[f64], vs: &[f64]) -> Result<Extrapolation> {
    if hs.len() < 2 || hs.len() != vs.len() {
        return Err(Error::Domain("extrapolation needs at least two points".into()));
    }
    let est: Vec<f64> = (0..hs.len()).map(|j| lagrange_at_zero(hs, vs, j)).collect();
    let n = est.len();
    let last = (est[n - 1] - est[n - 2]).abs();
    if n >= 3 {
        let prev = (est[n - 2] - est[n - 3]).abs();
        if last > prev && last > 1e-9 * est[n - 1].abs().max(1.0) {
            return Err(Error::NonConvergence(format!("extrapolants diverge: {prev:e} then {last:e}")));
        }
    }
    Ok(Extrapolation { value: est[n - 1], err_estimate: last })
}

/// Residue of `g` at a simple pole `s0` from `h g(s0 + h)` on the grid.
pub fn residue_extract<G>(g: G, s0: f64, h_grid: &[f64]) -> Result<Extrapolation>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    let vals: Vec<Result<f64>> = h_grid.par_iter().map(|&h| g(s0 + h).map(|v| v * h)).collect();
    let vs = vals.into_iter().collect::<Result<Vec<f64>>>()?;
    extrapolate(h_grid, &vs)
}

/// Central differences at `x0` over decreasing steps, Richardson-combined
/// pairwise. The value uses the two largest steps; the error is the spread
/// against the combination one step further down.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Derivative {
    pub value: f64,
    pub err_estimate: f64,
    /// Plain central differences, one per step.
    pub differences: Vec<f64>,
    /// Richardson combinations of consecutive steps.
    pub combined: Vec<f64>,
}

pub fn central_derivative<G>(g: G, x0: f64, steps: &[f64]) -> Result<Derivative>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    if steps.len() < 2 {
        return Err(Error::Domain("central_derivative needs at least two steps".into()));
    }
    let pts: Vec<f64> = steps.iter().flat_map(|&h| [x0 + h, x0 - h]).collect();
    let vals: Vec<Result<f64>> = pts.par_iter().map(|&x| g(x)).collect();
    let v = vals.into_iter().collect::<Result<Vec<f64>>>()?;
    let differences: Vec<f64> = steps.iter().enumerate().map(|(i, h)| (v[2 * i] - v[2 * i + 1]) / (2.0 * h)).collect();
    let combined: Vec<f64> = steps
        .windows(2)
        .zip(differences.windows(2))
        .map(|(h, d)| (h[0] * h[0] * d[1] - h[1] * h[1] * d[0]) / (h[0] * h[0] - h[1] * h[1]))
        .collect();
    let value = combined[0];
    let err_estimate = match combined.get(1) {
        Some(next) => (value - next).abs(),
        None => (value - differences[1]).abs(),
    };
    Ok(Derivative { value, err_estimate, differences, combined })
}

/// Steps for derivatives of the continued zetas at 0.
pub const DERIV_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// `zeta_so5'(0)` from the continuation on [`DERIV_STEPS`].
pub fn zeta_so5_deriv0(p: &MbParams) -> Result<Derivative> {
    central_derivative(|x| zeta_so5_continued(c(x, 0.0), p).map(|v| v.value.re), 0.0, &DERIV_STEPS)
}

/// Residue of `zeta_so5` at `1/2` from the lattice sum on `h_grid`.
pub fn so5_residue_half(h_grid: &[f64]) -> Result<Extrapolation> {
    residue_extract(|x| zeta_so5_direct(c(x, 0.0), 1e-8).map(|v| v.value.re), 0.5, h_grid)
}

/// Residue of `zeta_so5` at `1/3` from the continuation, after removing the
/// pole at `1/2` with residue `res_half`.
pub fn so5_residue_third(p: &MbParams, res_half: f64, h_grid: &[f64]) -> Result<Extrapolation> {
    residue_extract(
        |x| zeta_so5_continued(c(x, 0.0), p).map(|v| v.value.re - res_half / (x - 0.5)),
        1.0 / 3.0,
        h_grid,
    )
}

/// Residues of `zeta_su3` at `2/3` and `1/2` from the lattice sum.
pub fn su3_residues() -> Result<(Extrapolation, Extrapolation)> {
    let g = |x: f64| zeta_su3_direct(c(x, 0.0), 1e-8).map(|v| v.value.re);
    let upper = residue_extract(g, 2.0 / 3.0, &geometric_grid(0.04, 5))?;
    let lower = residue_extract(|x| g(x).map(|v| v - upper.value / (x - 2.0 / 3.0)), 0.5, &default_h_grid())?;
    Ok((upper, lower))
}

/// Dirichlet-series data of the su(3) weights, all computed numerically.
pub fn su3_lspec() -> Result<LSpec> {
    let p = MbParams::default();
    let (upper, lower) = su3_residues()?;
    let l0 = zeta_su3_continued(c(0.0, 0.0), &p)?.value.re;
    let d = central_derivative(|x| zeta_su3_continued(c(x, 0.0), &p).map(|v| v.value.re), 0.0, &DERIV_STEPS)?;
    let r = |a, b| Rational64::new(a, b);
    LSpec::new(
        vec![Pole { at: r(2, 3), residue: upper.value }, Pole { at: r(1, 2), residue: lower.value }],
        vec![r(2, 3), r(1, 2), r(0, 1), r(-1, 2)],
        l0,
        d.value,
        r(3, 4),
    )
}
