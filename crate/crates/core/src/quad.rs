//! Adaptive Gauss-Kronrod (7/15) quadrature for complex integrands and
//! order-stable summation helpers.
//!
//! Refinement proceeds in rounds. All panels flagged in a round are
//! evaluated in parallel and collected in position order, so results do not
//! depend on the number of worker threads.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Gauss-Kronrod panel: (kronrod estimate, |kronrod - gauss|).
pub fn gk15<F: Fn(f64) -> C64 + ?Sized>(f: &F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).norm())
}

/// Pairwise summation in index order.
pub fn pairwise_sum(v: &[C64]) -> C64 {
    match v.len() {
        0 => C64::new(0.0, 0.0),
        1 => v[0],
        n if n <= 8 => v.iter().fold(C64::new(0.0, 0.0), |a, b| a + b),
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

pub fn pairwise_sum_real(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        n if n <= 8 => v.iter().sum(),
        n => pairwise_sum_real(&v[..n / 2]) + pairwise_sum_real(&v[n / 2..]),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOpts {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    pub initial_panels: usize,
}

impl Default for QuadOpts {
    fn default() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-12, max_panels: 4000, initial_panels: 8 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: C64,
    pub err: f64,
    /// Panels in the final partition.
    pub panels: usize,
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F>(f: &F, a: f64, b: f64, opts: QuadOpts) -> Result<QuadResult>
where
    F: Fn(f64) -> C64 + Sync + ?Sized,
{
    let n0 = opts.initial_panels.max(1);
    let mut bounds: Vec<(f64, f64)> = (0..n0)
        .map(|i| {
            let lo = a + (b - a) * i as f64 / n0 as f64;
            let hi = if i + 1 == n0 { b } else { a + (b - a) * (i + 1) as f64 / n0 as f64 };
            (lo, hi)
        })
        .collect();
    let mut est: Vec<(C64, f64)> = bounds.par_iter().map(|&(lo, hi)| gk15(f, lo, hi)).collect();
    loop {
        let vals: Vec<C64> = est.iter().map(|e| e.0).collect();
        let total = pairwise_sum(&vals);
        let err: f64 = pairwise_sum_real(&est.iter().map(|e| e.1).collect::<Vec<_>>());
        let target = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err <= target {
            return Ok(QuadResult { value: total, err, panels: bounds.len() });
        }
        if bounds.len() >= opts.max_panels {
            return Err(Error::Tolerance { requested: target, achieved: err });
        }
        let width = b - a;
        let mut next_bounds = Vec::with_capacity(bounds.len() * 2);
        let mut next_est: Vec<Option<(C64, f64)>> = Vec::with_capacity(bounds.len() * 2);
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            let share = target * (hi - lo) / width;
            if est[i].1 > share && hi - lo > width * 1e-12 {
                let mid = 0.5 * (lo + hi);
                next_bounds.push((lo, mid));
                next_bounds.push((mid, hi));
                next_est.push(None);
                next_est.push(None);
            } else {
                next_bounds.push((lo, hi));
                next_est.push(Some(est[i]));
            }
        }
        if next_bounds.len() == bounds.len() {
            return Err(Error::Tolerance { requested: target, achieved: err });
        }
        let fresh_idx: Vec<usize> = (0..next_est.len()).filter(|&i| next_est[i].is_none()).collect();
        let fresh: Vec<(C64, f64)> = fresh_idx
            .par_iter()
            .map(|&i| {
                let (lo, hi) = next_bounds[i];
                gk15(f, lo, hi)
            })
            .collect();
        for (k, &i) in fresh_idx.iter().enumerate() {
            next_est[i] = Some(fresh[k]);
        }
        let next_est: Vec<(C64, f64)> = next_est.into_iter().map(|e| e.expect("filled")).collect();
        bounds = next_bounds;
        est = next_est;
    }
}

/// Find a symmetric truncation `[center - t_lo, center + t_hi]` for an
/// integrand decaying like `exp(-rate |t|)`, such that the neglected tails
/// are below `tail_tol`. Returns the two half-widths and the tail bound.
pub fn decay_window<F>(f: &F, center: f64, rate: f64, tail_tol: f64, max_t: f64) -> Result<(f64, f64, f64)>
where
    F: Fn(f64) -> C64 + ?Sized,
{
    let mut out = [0.0; 2];
    let mut bound = 0.0;
    for (side, dir) in [(0usize, -1.0f64), (1, 1.0)] {
        let mut t = 2.0;
        loop {
            let v0 = f(center + dir * t).norm();
            let v1 = f(center + dir * (t + 1.0)).norm();
            let tail = v1.max(v0) / rate * 2.0;
            if tail < tail_tol && v1 <= v0 * 1.01 + tail_tol {
                out[side] = t + 1.0;
                bound += tail;
                break;
            }
            t += 1.0;
            if t > max_t {
                return Err(Error::NonConvergence(format!("integrand not decaying by |t| = {max_t}")));
            }
        }
    }
    Ok((out[0], out[1], bound))
}
