//! Double-double arithmetic (about 32 significant digits), just enough for
//! evaluating truncated generating functions on a circle.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };
    pub const TWO_PI: Dd = Dd { hi: std::f64::consts::TAU, lo: 2.449_293_598_294_706_4e-16 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn ldexp(self, k: i32) -> Dd {
        let s = 2f64.powi(k);
        Dd { hi: self.hi * s, lo: self.lo * s }
    }

    /// `e^x` by reduction modulo `ln 2` and a Taylor series.
    pub fn exp(self) -> Dd {
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = self - Dd::LN2.mul_f64(k);
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for i in 1..40 {
            term = (term * r) / Dd::new(i as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        sum.ldexp(k as i32)
    }

    /// `(cos x, sin x)` for `|x| <= pi/2` by Taylor series.
    pub fn cos_sin_small(self) -> (Dd, Dd) {
        let x2 = self * self;
        let mut c = Dd::ONE;
        let mut s = self;
        let mut tc = Dd::ONE;
        let mut ts = self;
        for i in 1..40 {
            tc = -((tc * x2) / Dd::new(((2 * i - 1) * (2 * i)) as f64));
            ts = -((ts * x2) / Dd::new(((2 * i) * (2 * i + 1)) as f64));
            c = c + tc;
            s = s + ts;
            if tc.hi.abs() < 1e-34 && ts.hi.abs() < 1e-34 {
                break;
            }
        }
        (c, s)
    }

    /// Split into `(h, adj, frac)` with `h`, `adj` integral and
    /// `self = h + adj + frac`, `|frac| <= 1/2`.
    pub fn round_parts(self) -> (f64, f64, f64) {
        let h = self.hi.round();
        let rest = (self.hi - h) + self.lo;
        let adj = rest.round();
        (h, adj, rest - adj)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ONE: Cdd = Cdd { re: Dd::ONE, im: Dd::ZERO };

    pub fn scale(self, r: Dd) -> Cdd {
        Cdd { re: self.re * r, im: self.im * r }
    }

    pub fn powu(self, mut e: u64) -> Cdd {
        let mut base = self;
        let mut acc = Cdd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }

    pub fn recip(self) -> Cdd {
        let d = self.re * self.re + self.im * self.im;
        Cdd { re: self.re / d, im: -(self.im / d) }
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, b: Cdd) -> Cdd {
        Cdd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, b: Cdd) -> Cdd {
        Cdd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, b: Cdd) -> Cdd {
        Cdd { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

/// `e^{2 pi i k / n}` for `k < n`, `n` a multiple of 4.
pub fn root_of_unity(k: usize, n: usize) -> Cdd {
    let quarter = n / 4;
    let q = k / quarter;
    let rem = k % quarter;
    let angle = Dd::TWO_PI.mul_f64(rem as f64) / Dd::new(n as f64);
    let (c, s) = angle.cos_sin_small();
    let (re, im) = match q {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    };
    Cdd { re, im }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_matches_f64() {
        for x in [-3.0, -0.1, 0.0, 0.7, 12.5, 60.0] {
            let e = Dd::new(x).exp().to_f64();
            assert!((e - f64::exp(x)).abs() <= 4e-16 * e);
        }
    }

    #[test]
    fn exp_is_more_precise_than_f64() {
        // e^1 to 30 digits: 2.718281828459045235360287471352
        let e = Dd::new(1.0).exp();
        let want_hi = std::f64::consts::E;
        let want_lo = 1.445_646_891_729_250_2e-16;
        let diff = (e - Dd { hi: want_hi, lo: want_lo }).to_f64();
        assert!(diff.abs() < 1e-30, "{diff:e}");
    }

    #[test]
    fn roots_of_unity_are_unit() {
        let n = 64;
        for k in 0..n {
            let w = root_of_unity(k, n);
            let m = w.re * w.re + w.im * w.im - Dd::ONE;
            assert!(m.to_f64().abs() < 1e-30);
        }
        let w = root_of_unity(8, 64);
        assert!((w.re.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
    }

    #[test]
    fn division_round_trip() {
        let a = Dd::new(1.0) / Dd::new(3.0);
        let b = a.mul_f64(3.0) - Dd::ONE;
        assert!(b.to_f64().abs() < 1e-31);
    }
}
