//! Complex Gamma and Riemann zeta in double precision.
//!
//! Gamma uses a 15 term Lanczos sum (g = 607/128) with reflection for
//! `Re s < 1/2`. Zeta and Hurwitz sums use Euler-Maclaurin with a start
//! index chosen from `|s|`; the functional equation covers `Re s < 1/2`.

use std::f64::consts::PI;
use std::sync::LazyLock;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

/// Named constants, kept as decimal strings and parsed once.
pub mod consts {
    use super::LazyLock;

    pub const EULER_GAMMA: &str = "0.57721566490153286060651209008240243104";
    pub const ZETA_PRIME_0: &str = "-0.91893853320467274178032973640561763986";
    pub const ZETA_PRIME_M1: &str = "-0.16542114370045092921391966024278064276";
    pub const GAMMA_QUARTER: &str = "3.6256099082219083119306851558676720030";
    pub const GAMMA_THIRD: &str = "2.6789385347077476336556929409746776441";
    pub const ZETA_3: &str = "1.2020569031595942853997381615114499908";
    pub const ZETA_3_2: &str = "2.6123753486854883433485675679240716303";
    pub const ZETA_1_3: &str = "-0.97336024835078271546888686244789657077";
    pub const ZETA_4_3: &str = "3.6009377504588624212922075784754112776";

    fn parse(s: &str) -> f64 {
        s.parse().expect("constant literal")
    }

    pub static EULER: LazyLock<f64> = LazyLock::new(|| parse(EULER_GAMMA));
    pub static ZP0: LazyLock<f64> = LazyLock::new(|| parse(ZETA_PRIME_0));
    pub static ZPM1: LazyLock<f64> = LazyLock::new(|| parse(ZETA_PRIME_M1));
    pub static G14: LazyLock<f64> = LazyLock::new(|| parse(GAMMA_QUARTER));
    pub static G13: LazyLock<f64> = LazyLock::new(|| parse(GAMMA_THIRD));
    pub static Z3: LazyLock<f64> = LazyLock::new(|| parse(ZETA_3));
    pub static Z32: LazyLock<f64> = LazyLock::new(|| parse(ZETA_3_2));
    pub static Z13: LazyLock<f64> = LazyLock::new(|| parse(ZETA_1_3));
    pub static Z43: LazyLock<f64> = LazyLock::new(|| parse(ZETA_4_3));
}

fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln sin(pi z)` on a branch that is stable for large `|Im z|`.
pub(crate) fn ln_sin_pi(z: C64) -> C64 {
    let n = z.re.round();
    let r = C64::new(z.re - n, z.im);
    let sign_flip = (n as i64).rem_euclid(2) == 1;
    let base = if r.im.abs() < 8.0 {
        (r * PI).sin().ln()
    } else {
        // sin(pi r) = -e^{-i pi r} (1 - e^{2 i pi r}) / (2i) for Im r > 0
        let (rr, conj) = if r.im > 0.0 { (r, false) } else { (r.conj(), true) };
        let i = C64::i();
        let tail = (C64::new(1.0, 0.0) - (i * 2.0 * PI * rr).exp()).ln();
        let v = -i * PI * rr + C64::new(-(2.0f64.ln()), PI / 2.0) + tail;
        if conj {
            v.conj()
        } else {
            v
        }
    };
    if sign_flip {
        base + C64::new(0.0, PI)
    } else {
        base
    }
}

fn ln_gamma_lanczos(z: C64) -> C64 {
    let zm = z - 1.0;
    let mut acc = C64::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += *c / (zm + k as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (zm + 0.5) * t.ln() - t + acc.ln()
}

/// `ln Gamma(z)` without pole checks. The branch is not the principal one;
/// only `exp` of sums of these values is meaningful.
pub(crate) fn ln_gamma_raw(z: C64) -> C64 {
    if z.re < 0.5 {
        C64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_lanczos(1.0 - z)
    } else {
        ln_gamma_lanczos(z)
    }
}

pub(crate) fn gamma_raw(z: C64) -> C64 {
    if is_nonpositive_integer(z) {
        return C64::new(f64::INFINITY, 0.0);
    }
    if z.re < 0.5 && z.im.abs() < 8.0 {
        let s = (z * PI).sin();
        return PI / (s * ln_gamma_lanczos(1.0 - z).exp());
    }
    ln_gamma_raw(z).exp()
}

/// Complex Gamma.
pub fn gamma(z: C64) -> Result<C64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("Gamma at {}", z.re)));
    }
    Ok(gamma_raw(z))
}

/// Log Gamma on a continuous (non principal) branch.
pub fn ln_gamma(z: C64) -> Result<C64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("lnGamma at {}", z.re)));
    }
    Ok(ln_gamma_raw(z))
}

pub fn gamma_real(x: f64) -> f64 {
    gamma_raw(C64::new(x, 0.0)).re
}

pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma_raw(C64::new(x, 0.0)).re
}

/// `1/Gamma(z)`, zero at the poles of Gamma.
pub(crate) fn rgamma(z: C64) -> C64 {
    if is_nonpositive_integer(z) {
        return C64::new(0.0, 0.0);
    }
    (-ln_gamma_raw(z)).exp()
}

const EM_TERMS: usize = 12;

static EM_COEFFS: LazyLock<[f64; EM_TERMS]> = LazyLock::new(|| {
    // B_{2k} as exact rationals, divided by (2k)!
    const B: [(f64, f64); EM_TERMS] = [
        (1.0, 6.0),
        (-1.0, 30.0),
        (1.0, 42.0),
        (-1.0, 30.0),
        (5.0, 66.0),
        (-691.0, 2730.0),
        (7.0, 6.0),
        (-3617.0, 510.0),
        (43867.0, 798.0),
        (-174611.0, 330.0),
        (854513.0, 138.0),
        (-236364091.0, 2730.0),
    ];
    let mut out = [0.0; EM_TERMS];
    let mut fact = 1.0f64;
    for k in 1..=EM_TERMS {
        fact *= ((2 * k - 1) * (2 * k)) as f64;
        out[k - 1] = B[k - 1].0 / B[k - 1].1 / fact;
    }
    out
});

fn em_start(norm: f64, q: u64) -> u64 {
    let need = ((norm + 2.0 * EM_TERMS as f64 + 1.0) / (2.0 * PI * 0.2)).ceil() as u64;
    q.max(need).max(8)
}

/// Euler-Maclaurin remainder `sum_{m >= start} m^{-a}` with the size of the
/// last correction kept.
fn em_tail(a: C64, start: u64) -> (C64, f64) {
    let qf = start as f64;
    let q_pow = (-a * qf.ln()).exp();
    let mut sum = q_pow * qf / (a - 1.0) + q_pow * 0.5;
    let mut rising = a;
    let mut pow = q_pow / qf;
    let mut last = 0.0;
    for (k, c) in EM_COEFFS.iter().enumerate() {
        let term = *c * rising * pow;
        sum += term;
        last = term.norm();
        let j = 2 * k + 1;
        rising = rising * (a + j as f64) * (a + (j + 1) as f64);
        pow /= qf * qf;
    }
    (sum, last)
}

/// Tail sum `sum_{m >= q} m^{-a}` for integer `q >= 1`, continued in `a`.
/// Returns the value and a bound on the dropped Euler-Maclaurin term.
pub fn hurwitz_tail(a: C64, q: u64) -> Result<(C64, f64)> {
    if a.re == 1.0 && a.im == 0.0 {
        return Err(Error::Pole("Hurwitz tail at a = 1".into()));
    }
    let q = q.max(1);
    let start = em_start(a.norm(), q);
    let mut direct = C64::new(0.0, 0.0);
    let mut comp = C64::new(0.0, 0.0);
    for m in q..start {
        let y = (-a * (m as f64).ln()).exp() - comp;
        let t = direct + y;
        comp = (t - direct) - y;
        direct = t;
    }
    let (sum, last) = em_tail(a, start);
    let total = direct + sum;
    let err = last + 4.0 * f64::EPSILON * (direct.norm() + sum.norm());
    Ok((total, err))
}

/// `sum_{m >= q} m^{-(a+j)}` for `j = 0 .. count`, sharing the powers.
pub fn hurwitz_tail_batch(a: C64, q: u64, count: usize) -> Result<Vec<(C64, f64)>> {
    for j in 0..count {
        if a.re + j as f64 == 1.0 && a.im == 0.0 {
            return Err(Error::Pole("Hurwitz tail at a = 1".into()));
        }
    }
    let q = q.max(1);
    let start = em_start(a.norm() + count as f64, q);
    let mut direct = vec![C64::new(0.0, 0.0); count];
    for m in q..start {
        let inv = 1.0 / m as f64;
        let mut p = (-a * (m as f64).ln()).exp();
        for d in direct.iter_mut() {
            *d += p;
            p *= inv;
        }
    }
    Ok(direct
        .into_iter()
        .enumerate()
        .map(|(j, d)| {
            let (sum, last) = em_tail(a + j as f64, start);
            (d + sum, last + 8.0 * f64::EPSILON * (d.norm() + sum.norm()))
        })
        .collect())
}

fn zeta_em(s: C64) -> C64 {
    hurwitz_tail(s, 1).map(|v| v.0).unwrap_or(C64::new(f64::INFINITY, 0.0))
}

/// Riemann zeta via Euler-Maclaurin, valid on the whole plane but only
/// well conditioned for `Re s >= -1`. Exposed for functional-equation checks.
pub fn zeta_euler_maclaurin(s: C64) -> Result<C64> {
    if s == C64::new(1.0, 0.0) {
        return Err(Error::Pole("zeta at s = 1".into()));
    }
    Ok(zeta_em(s))
}

pub(crate) fn zeta_raw(s: C64) -> C64 {
    if s.re >= 0.5 || s.norm() < 0.1 {
        return zeta_em(s);
    }
    if s.im == 0.0 && s.re == s.re.round() && (s.re as i64) % 2 == 0 {
        return C64::new(0.0, 0.0);
    }
    let one_minus = C64::new(1.0, 0.0) - s;
    let ln_factor = s * 2.0f64.ln() + (s - 1.0) * PI.ln() + ln_sin_pi(s * 0.5) + ln_gamma_raw(one_minus);
    ln_factor.exp() * zeta_em(one_minus)
}

/// Complex Riemann zeta.
pub fn zeta(s: C64) -> Result<C64> {
    if s == C64::new(1.0, 0.0) {
        return Err(Error::Pole("zeta at s = 1".into()));
    }
    Ok(zeta_raw(s))
}

pub fn zeta_real(x: f64) -> f64 {
    zeta_raw(C64::new(x, 0.0)).re
}

/// `binom(x, m) = x (x-1) ... (x-m+1) / m!` for complex `x`.
pub fn binom(x: C64, m: usize) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for j in 0..m {
        acc = acc * (x - j as f64) / (j + 1) as f64;
    }
    acc
}
