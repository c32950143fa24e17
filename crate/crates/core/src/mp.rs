//! Circle sums in arbitrary precision, for coefficients too large for
//! double-double to pin down to the nearest integer.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone)]
struct Cmp {
    re: BigFloat,
    im: BigFloat,
}

impl Cmp {
    fn mul(&self, o: &Cmp, p: usize) -> Cmp {
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        Cmp { re, im }
    }

    fn powu(&self, mut e: u64, p: usize) -> Cmp {
        let mut base = self.clone();
        let mut acc: Option<Cmp> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base, p),
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, p);
            }
        }
        acc.unwrap_or(Cmp { re: BigFloat::from_u64(1, p), im: BigFloat::from_u64(0, p) })
    }
}

fn consts() -> Result<Consts> {
    Consts::new().map_err(|e| Error::NonConvergence(format!("precision constants: {e:?}")))
}

/// Nearest double to `x`, enough for error estimates.
pub(crate) fn to_f64(x: &BigFloat) -> f64 {
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else { return f64::NAN };
    let Some(&top) = words.last() else { return 0.0 };
    if top == 0 {
        return 0.0;
    }
    let next = if words.len() > 1 { words[words.len() - 2] } else { 0 };
    let mag = (top as f64 + next as f64 * 2f64.powi(-64)) * 2f64.powi(exp - 64);
    if sign == Sign::Neg {
        -mag
    } else {
        mag
    }
}

/// Integer nearest to a non-negative `x`, and `|x - nearest|`.
pub(crate) fn round_to_biguint(x: &BigFloat, p: usize) -> Result<(BigUint, f64)> {
    let nearest = x.round(0, RM);
    let frac = to_f64(&x.sub(&nearest, p, RM)).abs();
    let Some((words, _, sign, exp, _)) = nearest.as_raw_parts() else {
        return Err(Error::NonConvergence("non-finite integral".into()));
    };
    if sign == Sign::Neg && words.iter().any(|&w| w != 0) {
        return Err(Error::NonConvergence("negative integral".into()));
    }
    let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    let mantissa = BigUint::from_bytes_le(&bytes);
    let width = (words.len() * 64) as i64;
    let shift = exp as i64 - width;
    let value = if shift >= 0 { mantissa << shift as u64 } else { mantissa >> (-shift) as u64 };
    Ok((value, frac))
}

/// `e^{2 pi i k / points}` for all `k`.
fn roots(points: usize, p: usize, cc: &mut Consts) -> Vec<Cmp> {
    let two_pi = cc.pi(p, RM).mul(&BigFloat::from_u64(2, p), p, RM);
    let step = two_pi.div(&BigFloat::from_u64(points as u64, p), p, RM);
    (0..points)
        .map(|k| {
            let t = step.mul(&BigFloat::from_u64(k as u64, p), p, RM);
            Cmp { re: t.cos(p, RM, cc), im: t.sin(p, RM, cc) }
        })
        .collect()
}

/// Real part of the trapezoid node `j`: `w^{-jn} / prod_m (1 - w^{jm} r^m)^{f(m)}`.
fn node(j: usize, n: usize, weights: &[u64], r_pows: &[BigFloat], roots: &[Cmp], p: usize) -> BigFloat {
    let points = roots.len();
    let one = BigFloat::from_u64(1, p);
    let mut prod = Cmp { re: one.clone(), im: BigFloat::from_u64(0, p) };
    for m in 1..=n {
        let f = weights[m];
        if f == 0 {
            continue;
        }
        let w = &roots[(j * m) % points];
        let factor = Cmp { re: one.sub(&w.re.mul(&r_pows[m], p, RM), p, RM), im: w.im.mul(&r_pows[m], p, RM).neg() };
        prod = prod.mul(&factor.powu(f, p), p);
    }
    let a = &roots[(points - (j * n) % points) % points];
    // Re(a / prod) = Re(a conj(prod)) / |prod|^2
    let num = a.re.mul(&prod.re, p, RM).add(&a.im.mul(&prod.im, p, RM), p, RM);
    let den = prod.re.mul(&prod.re, p, RM).add(&prod.im.mul(&prod.im, p, RM), p, RM);
    num.div(&den, p, RM)
}

/// Sum of the nodes `j` in `js`, using that nodes `j` and `points - j` are
/// conjugate. `js` must be closed under `j -> points - j`.
fn half_sum(js: &[usize], n: usize, weights: &[u64], r_pows: &[BigFloat], roots: &[Cmp], p: usize) -> BigFloat {
    let points = roots.len();
    let parts: Vec<BigFloat> = js
        .par_iter()
        .filter(|&&j| 2 * j <= points)
        .map(|&j| {
            let v = node(j, n, weights, r_pows, roots, p);
            if j == 0 || 2 * j == points {
                v
            } else {
                v.mul(&BigFloat::from_u64(2, p), p, RM)
            }
        })
        .collect();
    parts.iter().fold(BigFloat::from_u64(0, p), |acc, v| acc.add(v, p, RM))
}

/// Outcome of [`circle_coefficient`].
pub(crate) struct MpCircle {
    pub nearest: BigUint,
    pub frac: f64,
    pub value: f64,
    pub points: usize,
    pub diff: f64,
}

/// `[q^n] prod_{m <= n} (1 - q^m)^{-f(m)}` on the circle `|q| = e^{-rho}`,
/// with `bits` of working precision. Node counts double from `points` until
/// two levels agree to within `0.05`.
pub(crate) fn circle_coefficient(n: usize, weights: &[u64], rho: f64, bits: usize, mut points: usize) -> Result<MpCircle> {
    let p = bits;
    let mut cc = consts()?;
    let r = BigFloat::from_f64(-rho, p).exp(p, RM, &mut cc);
    let mut r_pows = vec![BigFloat::from_u64(1, p); n + 1];
    for m in 1..=n {
        r_pows[m] = r_pows[m - 1].mul(&r, p, RM);
    }
    let scale = BigFloat::from_f64(rho, p).mul(&BigFloat::from_u64(n as u64, p), p, RM).exp(p, RM, &mut cc);
    let all: Vec<usize> = (0..points).collect();
    let mut total = half_sum(&all, n, weights, &r_pows, &roots(points, p, &mut cc), p);
    let mut prev = total.div(&BigFloat::from_u64(points as u64, p), p, RM).mul(&scale, p, RM);
    loop {
        points *= 2;
        let odd: Vec<usize> = (1..points).step_by(2).collect();
        total = total.add(&half_sum(&odd, n, weights, &r_pows, &roots(points, p, &mut cc), p), p, RM);
        let cur = total.div(&BigFloat::from_u64(points as u64, p), p, RM).mul(&scale, p, RM);
        let diff = to_f64(&cur.sub(&prev, p, RM)).abs();
        if diff < 0.05 {
            let (nearest, frac) = round_to_biguint(&cur, p)?;
            return Ok(MpCircle { nearest, frac, value: to_f64(&cur), points, diff });
        }
        if points >= 1 << 16 {
            return Err(Error::NonConvergence("circle sum did not settle".into()));
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_recovers_large_integers() {
        let p = 256;
        let big: BigUint = "123456789012345678901234567890123456789".parse().unwrap();
        let x = BigFloat::parse("123456789012345678901234567890123456789.25", astro_float::Radix::Dec, p, RM, &mut consts().unwrap());
        let (n, frac) = round_to_biguint(&x, p).unwrap();
        assert_eq!(n, big);
        assert!((frac - 0.25).abs() < 1e-12);
        assert!((to_f64(&x) - 1.2345678901234568e38).abs() < 1e23);
    }

    #[test]
    fn ordinary_partitions_of_ten() {
        let weights = vec![1u64; 11];
        let c = circle_coefficient(10, &weights, 0.4, 128, 64).unwrap();
        assert_eq!(c.nearest, BigUint::from(42u32));
        // aliasing from q^{n + points} terms leaves about e^{-0.4 * 128} p(138)
        assert!(c.frac < 1e-9, "{}", c.frac);
    }
}
