//! The log generating function `Phi_f(z) = -sum f(m) log(1 - e^{-mz})`,
//! its saddle point, the asymptotic expansion of that saddle point, and an
//! exact-by-rounding Cauchy integral.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64 as C64;
use num_rational::Rational64;
use num_traits::{FromPrimitive, Zero};
use rayon::prelude::*;

use crate::dd::{root_of_unity, Cdd, Dd};
use crate::error::{Error, Result};
use crate::mp;
use crate::model::{pole_constant, to_f64, LSpec, WeightFunction};

/// Value of a derivative of `Phi_f` with a bound on the dropped tail.
#[derive(Debug, Clone, Copy)]
pub struct PhiValue {
    pub value: C64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Precomputed weights for evaluating `Phi_f^{(k)}` on `Re z >= min_re`.
#[derive(Debug, Clone)]
pub struct PhiSeries {
    weights: Vec<u64>,
    degree: u32,
    min_re: f64,
    rel_tol: f64,
}

fn needed_terms(min_re: f64, degree: u32) -> usize {
    let lg = (1.0 / min_re).max(std::f64::consts::E).ln();
    ((45.0 + (degree as f64 + 5.0) * lg) / min_re).ceil() as usize + 16
}

/// `sum_{j>=1} j^{k-1} x^j`, with `k = 0` meaning `-log(1-x)`.
fn polylog_neg(x: C64, k: u32) -> C64 {
    let one = C64::new(1.0, 0.0);
    match k {
        0 => {
            if x.norm() < 1e-2 {
                let mut acc = C64::new(0.0, 0.0);
                let mut p = x;
                for j in 1..9 {
                    acc += p / j as f64;
                    p *= x;
                }
                acc
            } else {
                -(one - x).ln()
            }
        }
        1 => x / (one - x),
        2 => x / ((one - x) * (one - x)),
        3 => x * (one + x) / (one - x).powu(3),
        _ => x * (one + 4.0 * x + x * x) / (one - x).powu(4),
    }
}

impl PhiSeries {
    pub fn for_min_re(w: &WeightFunction, min_re: f64, rel_tol: f64) -> Result<Self> {
        if !(min_re > 0.0) {
            return Err(Error::Domain("Phi needs Re z > 0".into()));
        }
        let degree = w.growth_degree();
        let m = needed_terms(min_re, degree);
        if m > 50_000_000 {
            return Err(Error::Domain(format!("Re z = {min_re:e} needs too many terms")));
        }
        Ok(Self { weights: w.table(m), degree, min_re, rel_tol })
    }

    /// `Phi_f^{(k)}(z)` for `k <= 4`.
    pub fn eval(&self, z: C64, k: u32) -> Result<PhiValue> {
        if k > 4 {
            return Err(Error::Domain("derivative order above 4".into()));
        }
        if !(z.re > 0.0) {
            return Err(Error::Domain("Phi needs Re z > 0".into()));
        }
        if z.re < self.min_re * (1.0 - 1e-12) {
            return Err(Error::Domain(format!("series prepared for Re z >= {}, got {}", self.min_re, z.re)));
        }
        let rho = z.re;
        let dk = [2.0, 2.0, 4.0, 16.0, 96.0][k as usize];
        let power = (self.degree + k) as f64;
        let m_star = (2.0 * power / rho).ceil() as usize + 1;
        let shrink = 1.0 - (-rho / 2.0).exp();
        let mut sum = C64::new(0.0, 0.0);
        let mut bound = f64::INFINITY;
        let mut used = 0;
        for m in 1..self.weights.len() {
            let f = self.weights[m];
            if f != 0 {
                let x = (-(m as f64) * z).exp();
                let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
                sum += polylog_neg(x, k) * (f as f64 * sign * (m as f64).powi(k as i32));
            }
            used = m;
            if m >= m_star {
                let next = (m + 1) as f64;
                bound = dk * next.powf(power) * (-next * rho).exp() / shrink;
                if bound <= self.rel_tol * 1e-2 * sum.norm() {
                    break;
                }
            }
        }
        Ok(PhiValue { value: sum, tail_bound: bound, terms: used })
    }
}

/// One-off evaluation of `Phi_f^{(k)}(z)`.
pub fn phi(w: &WeightFunction, z: C64, k: u32) -> Result<PhiValue> {
    PhiSeries::for_min_re(w, z.re, 1e-14)?.eval(z, k)
}

#[derive(Debug, Clone, Copy)]
pub struct SaddlePoint {
    pub rho: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Solve `-Phi_f'(rho) = n` by safeguarded Newton.
pub fn solve_saddle(w: &WeightFunction, spec: Option<&LSpec>, n: f64) -> Result<SaddlePoint> {
    if !(n > 0.0) {
        return Err(Error::Domain("saddle point needs n > 0".into()));
    }
    let guess = match spec {
        Some(s) => {
            let c1 = pole_constant(&s.positive_poles[0]);
            (c1 / n).powf(1.0 / (s.alpha() + 1.0))
        }
        None => rough_guess(w, n)?,
    };
    let mut lo = guess / 10.0;
    let mut hi = guess * 10.0;
    let g = |series: &PhiSeries, r: f64| -> Result<(f64, f64)> {
        let d1 = series.eval(C64::new(r, 0.0), 1)?.value.re;
        let d2 = series.eval(C64::new(r, 0.0), 2)?.value.re;
        Ok((-d1 - n, -d2))
    };
    let mut series = PhiSeries::for_min_re(w, lo, 1e-14)?;
    for _ in 0..6 {
        let glo = g(&series, lo)?.0;
        let ghi = g(&series, hi)?.0;
        if glo > 0.0 && ghi < 0.0 {
            break;
        }
        if glo <= 0.0 {
            lo /= 10.0;
            series = PhiSeries::for_min_re(w, lo, 1e-14)?;
        }
        if ghi >= 0.0 {
            hi *= 10.0;
        }
    }
    let mut rho = guess.clamp(lo, hi);
    for it in 1..=100 {
        let (val, der) = g(&series, rho)?;
        if val.abs() <= 1e-9 * n {
            return Ok(SaddlePoint { rho, residual: val.abs(), iterations: it });
        }
        if val > 0.0 {
            lo = rho;
        } else {
            hi = rho;
        }
        let mut next = rho - val / der;
        if !(next > lo && next < hi) {
            next = (lo * hi).sqrt();
        }
        if (next - rho).abs() <= 1e-16 * rho {
            return Err(Error::NonConvergence(format!("saddle stalled at residual {val:e}")));
        }
        rho = next;
    }
    Err(Error::NonConvergence("saddle point: iteration limit".into()))
}

fn rough_guess(w: &WeightFunction, n: f64) -> Result<f64> {
    let mut r = 1.0;
    for _ in 0..80 {
        let v = -phi(w, C64::new(r, 0.0), 1)?.value.re;
        if v < n {
            r /= 2.0;
        } else {
            return Ok(r);
        }
    }
    Err(Error::NonConvergence("no saddle bracket".into()))
}

/// Data of the two-pole saddle expansion.
#[derive(Debug, Clone)]
pub struct TwoPoleData {
    pub alpha: Rational64,
    pub beta: Rational64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// `l` with `(l+1)/l beta < alpha <= l/(l-1) beta`.
    pub ell: usize,
    /// `K_1 .. K_{l+1}`.
    pub k: Vec<f64>,
}

/// The `l` attached to a pair of poles `beta < alpha`.
pub fn two_pole_ell(alpha: Rational64, beta: Rational64) -> Result<usize> {
    if !(beta < alpha) || beta <= Rational64::zero() {
        return Err(Error::Domain("need 0 < beta < alpha".into()));
    }
    for ell in 1..=64i64 {
        let lower = Rational64::new(ell + 1, ell) * beta;
        let upper_ok = ell == 1 || alpha <= Rational64::new(ell, ell - 1) * beta;
        if lower < alpha && upper_ok {
            return Ok(ell as usize);
        }
    }
    Err(Error::Domain("poles too close".into()))
}

/// `K_1 .. K_5` of the saddle expansion in closed form.
pub fn rho_coefficients(alpha: f64, beta: f64, c1: f64, c2: f64) -> [f64; 5] {
    let a1 = alpha + 1.0;
    let (a, b) = (alpha, beta);
    let k1 = c1.powf(1.0 / a1);
    let k2 = c2 / (a1 * c1.powf(b / a1));
    let k3 = c2 * c2 * (a - 2.0 * b) / (2.0 * a1 * a1 * c1.powf((2.0 * b + 1.0) / a1));
    let k4 = c2.powi(3) * (2.0 * a * a - 9.0 * a * b - 2.0 * a + 9.0 * b * b + 3.0 * b)
        / (6.0 * a1.powi(3) * c1.powf((3.0 * b + 2.0) / a1));
    let k5 = c2.powi(4)
        * (6.0 * a.powi(3) - 44.0 * a * a * b - 15.0 * a * a + 96.0 * a * b * b + 56.0 * a * b + 6.0 * a
            - 64.0 * b.powi(3)
            - 48.0 * b * b
            - 8.0 * b)
        / (24.0 * a1.powi(4) * c1.powf((4.0 * b + 3.0) / a1));
    [k1, k2, k3, k4, k5]
}

impl TwoPoleData {
    pub fn from_spec(spec: &LSpec) -> Result<Self> {
        if spec.positive_poles.len() != 2 {
            return Err(Error::Domain("two-pole data needs exactly two positive poles".into()));
        }
        let alpha = spec.positive_poles[0].at;
        let beta = spec.positive_poles[1].at;
        let ell = two_pole_ell(alpha, beta)?;
        if ell > 4 {
            return Err(Error::Unsupported(format!("l = {ell} needs saddle coefficients past K_5")));
        }
        let c1 = pole_constant(&spec.positive_poles[0]);
        let c2 = pole_constant(&spec.positive_poles[1]);
        let all = rho_coefficients(to_f64(alpha), to_f64(beta), c1, c2);
        Ok(Self { alpha, beta, c1, c2, c3: spec.l0, ell, k: all[..=ell].to_vec() })
    }

    /// Exponent `e_j` of `n^{-e_j}` attached to `K_j`.
    pub fn k_exponent(&self, j: usize) -> f64 {
        let a1 = to_f64(self.alpha) + 1.0;
        (j as f64 - 1.0) * (1.0 - (to_f64(self.beta) + 1.0) / a1) + 1.0 / a1
    }
}

/// Leading terms of the saddle point for large `n`.
pub fn rho_asymptotic(spec: &LSpec, n: f64) -> Result<f64> {
    let a1 = spec.alpha() + 1.0;
    match spec.positive_poles.len() {
        1 => {
            let k1 = pole_constant(&spec.positive_poles[0]).powf(1.0 / a1);
            Ok(k1 * n.powf(-1.0 / a1) + spec.l0 / (a1 * n))
        }
        2 => {
            let d = TwoPoleData::from_spec(spec)?;
            let mut rho = d.c3 / (a1 * n);
            for (i, kj) in d.k.iter().enumerate() {
                rho += kj * n.powf(-d.k_exponent(i + 1));
            }
            Ok(rho)
        }
        _ => Err(Error::Unsupported("more than two positive poles".into())),
    }
}

/// Decimal digits of `p_f(n)` below which double-double still rounds cleanly.
const DD_SAFE_DIGITS: f64 = 24.0;

/// Result of the circle integral for one coefficient.
#[derive(Debug, Clone)]
pub struct CauchyCount {
    /// The integral as a double.
    pub value: f64,
    /// Nearest integer to the integral, from the extended-precision sum.
    pub nearest: BigUint,
    /// Distance of the integral from `nearest`.
    pub frac: f64,
    pub rho: f64,
    pub points: usize,
    pub err_estimate: f64,
}

fn circle_average(n: usize, weights: &[u64], r_pows: &[Dd], scale: Dd, points: usize) -> Cdd {
    let roots: Vec<Cdd> = (0..points).into_par_iter().map(|k| root_of_unity(k, points)).collect();
    let terms: Vec<Cdd> = (0..points)
        .into_par_iter()
        .map(|j| {
            let mut prod = Cdd::ONE;
            for m in 1..=n {
                let f = weights[m];
                if f == 0 {
                    continue;
                }
                let w = roots[(j * m) % points];
                let q = w.scale(r_pows[m]);
                prod = prod * (Cdd::ONE - q).powu(f);
            }
            (roots[(points - (j * n) % points) % points] * prod.recip()).scale(scale)
        })
        .collect();
    let mut acc = Cdd::default();
    for t in terms {
        acc = acc + t;
    }
    let inv = Dd::ONE / Dd::new(points as f64);
    acc.scale(inv)
}

/// `p_f(n)` as `(1/2pi) int exp(n z + Phi_f(z)) dt` on `z = rho + it`.
///
/// Factors with `m > n` cannot touch the n-th coefficient, so the product is
/// truncated there. The periodic integrand is summed with the trapezoid rule
/// in double-double, doubling the node count until two levels agree. Past
/// about 24 digits the sum switches to arbitrary precision.
pub fn cauchy_count(w: &WeightFunction, n: usize) -> Result<CauchyCount> {
    if n == 0 {
        return Ok(CauchyCount { value: 1.0, nearest: BigUint::from(1u32), frac: 0.0, rho: 0.0, points: 0, err_estimate: 0.0 });
    }
    let rho = solve_saddle(w, None, n as f64)?.rho;
    let weights = w.table(n);
    let start = (4 * n + 64).next_power_of_two();
    // log of the integrand at t = 0, an upper bound for log p_f(n)
    let log_peak = n as f64 * rho - (1..=n).map(|m| weights[m] as f64 * (-(-(m as f64) * rho).exp()).ln_1p()).sum::<f64>();
    if log_peak > DD_SAFE_DIGITS * std::f64::consts::LN_10 {
        let bits = ((log_peak / std::f64::consts::LN_2) as usize + 128).next_multiple_of(64);
        let c = mp::circle_coefficient(n, &weights, rho, bits, start)?;
        if c.frac > 0.4 {
            return Err(Error::Tolerance { requested: 0.4, achieved: c.frac });
        }
        return Ok(CauchyCount { value: c.value, nearest: c.nearest, frac: c.frac, rho, points: c.points, err_estimate: c.diff });
    }
    let r = Dd::new(-rho).exp();
    let mut r_pows = vec![Dd::ONE; n + 1];
    for m in 1..=n {
        r_pows[m] = r_pows[m - 1] * r;
    }
    let scale = Dd::new(rho).mul_f64(n as f64).exp();
    let mut points = start;
    let mut prev = circle_average(n, &weights, &r_pows, scale, points);
    loop {
        let next_points = points * 2;
        let cur = circle_average(n, &weights, &r_pows, scale, next_points);
        let diff = (cur.re - prev.re).to_f64().abs() + (cur.im - prev.im).to_f64().abs();
        points = next_points;
        if diff < 0.05 {
            let (h, adj, frac) = cur.re.round_parts();
            let big = BigInt::from_f64(h).ok_or_else(|| Error::NonConvergence("non-finite integral".into()))?
                + BigInt::from_f64(adj).unwrap_or_default();
            let nearest = big.to_biguint().ok_or_else(|| Error::NonConvergence("negative integral".into()))?;
            let err_estimate = diff + cur.im.to_f64().abs();
            if frac.abs() > 0.4 || err_estimate > 0.4 {
                return Err(Error::Tolerance { requested: 0.4, achieved: frac.abs().max(err_estimate) });
            }
            return Ok(CauchyCount { value: cur.re.to_f64(), nearest, frac: frac.abs(), rho, points, err_estimate });
        }
        if points >= 1 << 20 {
            return Err(Error::NonConvergence("circle sum did not settle".into()));
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::preset_lspec;

    #[test]
    fn phi_ones_at_one() {
        let v = phi(&WeightFunction::Ones, C64::new(1.0, 0.0), 0).unwrap();
        assert!((v.value.re - 0.684_328_866_976_887_035_2).abs() < 1e-13);
    }

    #[test]
    fn saddle_ones() {
        let spec = preset_lspec(&WeightFunction::Ones).unwrap();
        let s = solve_saddle(&WeightFunction::Ones, Some(&spec), 1e4).unwrap();
        let approx = (std::f64::consts::PI.powi(2) / 6.0 / 1e4).sqrt() - 1.0 / (4.0 * 1e4);
        assert!((s.rho - approx).abs() / s.rho < 1e-4);
        assert!(s.residual <= 1e-9 * 1e4);
    }

    #[test]
    fn ell_selection() {
        assert_eq!(two_pole_ell(Rational64::new(1, 2), Rational64::new(1, 3)).unwrap(), 3);
        assert_eq!(two_pole_ell(Rational64::new(2, 3), Rational64::new(1, 2)).unwrap(), 4);
        assert_eq!(two_pole_ell(Rational64::new(1, 1), Rational64::new(1, 3)).unwrap(), 1);
    }

    #[test]
    fn so5_k_shapes() {
        let (a, b, c1, c2) = (0.5, 1.0 / 3.0, 3.7, -1.3);
        let k = rho_coefficients(a, b, c1, c2);
        assert!((k[1] - 2.0 * c2 / (3.0 * c1.powf(2.0 / 9.0))).abs() < 1e-14);
        assert!((k[2] + c2 * c2 / (27.0 * c1.powf(10.0 / 9.0))).abs() < 1e-14);
    }

    #[test]
    fn cauchy_small_ones() {
        let c = cauchy_count(&WeightFunction::Ones, 30).unwrap();
        assert_eq!(c.nearest, BigUint::from(5604u32));
    }
}
