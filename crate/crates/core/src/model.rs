//! Weight functions, their Dirichlet-series data, and the exponent sets
//! that govern the shape of the asymptotic expansion.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{consts, gamma_real, ln_gamma_real};
use crate::witten;

/// A multiplicity rule `f: N -> N0`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFunction {
    Ones,
    PlanePartition,
    /// Indicator of the k-gonal numbers, `k >= 3`.
    Polygonal(u32),
    /// Number of `(j, k)` in N^2 with `jk(j+k)/2 = n`.
    Su3,
    /// Number of `(j, k)` in N^2 with `jk(j+k)(j+2k)/6 = n`.
    So5,
    /// Finite table, optionally continued by another rule past its end.
    Explicit { name: String, table: Vec<(u64, u64)>, tail: Option<Box<WeightFunction>> },
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFunction::Ones => write!(f, "ones"),
            WeightFunction::PlanePartition => write!(f, "plane"),
            WeightFunction::Polygonal(k) => write!(f, "polygonal:{k}"),
            WeightFunction::Su3 => write!(f, "su3"),
            WeightFunction::So5 => write!(f, "so5"),
            WeightFunction::Explicit { name, .. } => write!(f, "explicit:{name}"),
        }
    }
}

/// k-th polygonal number of index m.
pub fn polygonal_number(k: u32, m: u64) -> u64 {
    let k = k as u128;
    let m = m as u128;
    (((k - 2) * m * m + 4 * m - k * m) / 2) as u64
}

impl WeightFunction {
    /// Parse one of `ones`, `plane`, `polygonal:k`, `su3`, `so5`,
    /// `explicit:<path>`.
    pub fn from_preset(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "ones" => return Ok(Self::Ones),
            "plane" => return Ok(Self::PlanePartition),
            "su3" => return Ok(Self::Su3),
            "so5" => return Ok(Self::So5),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("polygonal:") {
            let k: u32 = k.parse().map_err(|_| Error::UnknownPreset(s.into()))?;
            if k < 3 {
                return Err(Error::Domain(format!("polygonal order must be >= 3, got {k}")));
            }
            return Ok(Self::Polygonal(k));
        }
        if let Some(path) = s.strip_prefix("explicit:") {
            return Self::from_file(Path::new(path));
        }
        Err(Error::UnknownPreset(s.into()))
    }

    /// Read an explicit table: lines `n f(n)`, `#` comments, and an optional
    /// `tail <preset>` line.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_table(&path.display().to_string(), &text)
    }

    pub fn parse_table(name: &str, text: &str) -> Result<Self> {
        let mut table = Vec::new();
        let mut tail = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let a = parts.next().unwrap_or("");
            let b = parts.next().ok_or_else(|| Error::Parse(format!("line {}: expected two fields", lineno + 1)))?;
            if a == "tail" {
                tail = Some(Box::new(Self::from_preset(b)?));
                continue;
            }
            let n: u64 = a.parse().map_err(|_| Error::Parse(format!("line {}: bad index '{a}'", lineno + 1)))?;
            let v: u64 = b.parse().map_err(|_| Error::Parse(format!("line {}: bad value '{b}'", lineno + 1)))?;
            if n == 0 {
                return Err(Error::Parse(format!("line {}: index must be positive", lineno + 1)));
            }
            table.push((n, v));
        }
        table.sort_unstable();
        table.dedup_by_key(|e| e.0);
        Ok(Self::Explicit { name: name.to_string(), table, tail })
    }

    /// `f(n)` for a single n.
    pub fn eval(&self, n: u64) -> u64 {
        if n == 0 {
            return 0;
        }
        match self {
            Self::Explicit { .. } => {
                let t = self.table(n as usize);
                t[n as usize]
            }
            _ => self.table(n as usize)[n as usize],
        }
    }

    /// `[0, f(1), ..., f(n_max)]`.
    pub fn table(&self, n_max: usize) -> Vec<u64> {
        let mut t = vec![0u64; n_max + 1];
        let cap = n_max as u128;
        match self {
            Self::Ones => t.iter_mut().skip(1).for_each(|v| *v = 1),
            Self::PlanePartition => t.iter_mut().enumerate().skip(1).for_each(|(i, v)| *v = i as u64),
            Self::Polygonal(k) => {
                let mut m = 1u64;
                loop {
                    let p = polygonal_number(*k, m) as usize;
                    if p > n_max {
                        break;
                    }
                    t[p] += 1;
                    m += 1;
                }
            }
            Self::Su3 => {
                let mut j = 1u128;
                while j * (j + 1) / 2 <= cap {
                    let mut k = 1u128;
                    loop {
                        let v = j * k * (j + k) / 2;
                        if v > cap {
                            break;
                        }
                        t[v as usize] += 1;
                        k += 1;
                    }
                    j += 1;
                }
            }
            Self::So5 => {
                let mut j = 1u128;
                while j * (j + 1) * (j + 2) / 6 <= cap {
                    let mut k = 1u128;
                    loop {
                        let v = j * k * (j + k) * (j + 2 * k) / 6;
                        if v > cap {
                            break;
                        }
                        t[v as usize] += 1;
                        k += 1;
                    }
                    j += 1;
                }
            }
            Self::Explicit { table, tail, .. } => {
                let last = table.last().map(|e| e.0).unwrap_or(0) as usize;
                if let Some(rule) = tail {
                    if n_max > last {
                        let rest = rule.table(n_max);
                        t[last + 1..].copy_from_slice(&rest[last + 1..]);
                    }
                }
                for &(n, v) in table {
                    if (n as usize) <= n_max {
                        t[n as usize] = v;
                    }
                }
            }
        }
        t
    }

    /// Polynomial envelope `f(n) <= n^d` used by tail bounds.
    pub fn growth_degree(&self) -> u32 {
        match self {
            Self::Ones | Self::Polygonal(_) => 0,
            _ => 1,
        }
    }
}

/// A pole of the Dirichlet series at a rational point with its residue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    #[serde(with = "ratio_serde")]
    pub at: Rational64,
    pub residue: f64,
}

/// Data of `L_f(s) = sum f(n) n^{-s}` needed by the asymptotic engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LSpec {
    /// Positive poles in decreasing order; the first is the abscissa `alpha`.
    pub positive_poles: Vec<Pole>,
    /// Poles of `Gamma(s) zeta(s+1) L_f(s)` in `(-R, alpha]`, always with 0.
    #[serde(with = "ratio_vec_serde")]
    pub lstar_poles: Vec<Rational64>,
    pub l0: f64,
    pub l0_prime: f64,
    #[serde(with = "ratio_serde")]
    pub r: Rational64,
}

impl LSpec {
    pub fn new(positive_poles: Vec<Pole>, lstar_poles: Vec<Rational64>, l0: f64, l0_prime: f64, r: Rational64) -> Result<Self> {
        let mut poles = positive_poles;
        poles.sort_by(|a, b| b.at.cmp(&a.at));
        let spec = Self { positive_poles: poles, lstar_poles, l0, l0_prime, r };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let first = self.positive_poles.first().ok_or_else(|| Error::Domain("no positive pole".into()))?;
        if !first.at.is_positive() {
            return Err(Error::Domain("abscissa must be positive".into()));
        }
        if !(first.residue > 0.0) {
            return Err(Error::Domain("residue at the abscissa must be positive".into()));
        }
        if self.positive_poles.iter().skip(1).any(|p| !p.at.is_positive()) {
            return Err(Error::Domain("positive poles must be positive".into()));
        }
        if !self.lstar_poles.contains(&Rational64::zero()) {
            return Err(Error::Domain("pole set must contain 0".into()));
        }
        if self.lstar_poles.iter().any(|p| *p > first.at) {
            return Err(Error::Domain("pole set extends past the abscissa".into()));
        }
        if !self.r.is_positive() {
            return Err(Error::Domain("R must be positive".into()));
        }
        Ok(())
    }

    pub fn alpha_exact(&self) -> Rational64 {
        self.positive_poles[0].at
    }

    pub fn alpha(&self) -> f64 {
        to_f64(self.alpha_exact())
    }

    pub fn omega(&self) -> f64 {
        self.positive_poles[0].residue
    }
}

pub fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn ratio(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

mod ratio_serde {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_ratio(&text).map_err(serde::de::Error::custom)
    }
}

mod ratio_vec_serde {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|r| format!("{}/{}", r.numer(), r.denom())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational64>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|t| super::parse_ratio(t).map_err(serde::de::Error::custom)).collect()
    }
}

/// Parse `p/q` or an integer.
pub fn parse_ratio(t: &str) -> Result<Rational64> {
    let t = t.trim();
    let bad = || Error::Parse(format!("bad rational '{t}'"));
    match t.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(a, b))
        }
        None => Ok(Rational64::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Exponent sets of the expansion, truncated to finite windows.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSets {
    /// Lower part cut at `> -R/(alpha+1)`.
    pub l_set: Vec<Rational64>,
    /// Cut at `< (R+alpha)/(alpha+1)`.
    pub m_set: Vec<Rational64>,
    /// Cut at `< R/(alpha+1)`.
    pub n_set: Vec<Rational64>,
    /// Sums from `m_set` and `n_set` below the `m_set` cut.
    pub m_plus_n: Vec<Rational64>,
}

impl ExponentSets {
    /// Elements of the exponential part in `[0, alpha/(alpha+1)]`, decreasing.
    pub fn exponential_exponents(&self) -> Vec<Rational64> {
        let mut v: Vec<_> = self.l_set.iter().copied().filter(|x| !x.is_negative()).collect();
        v.reverse();
        v
    }

    /// Smallest positive element of `M + N`.
    pub fn next_error_exponent(&self) -> Option<Rational64> {
        self.m_plus_n.iter().copied().find(|x| x.is_positive())
    }
}

fn closure(seed: &[Rational64], steps: &[Rational64], keep: impl Fn(&Rational64) -> bool) -> BTreeSet<Rational64> {
    let mut out: BTreeSet<Rational64> = seed.iter().copied().filter(|x| keep(x)).collect();
    let mut frontier: Vec<Rational64> = out.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        for g in steps {
            let y = x + g;
            if keep(&y) && out.insert(y) {
                frontier.push(y);
            }
        }
    }
    out
}

/// Enumerate the exponent sets for `spec` with exact rational arithmetic.
pub fn exponent_sets(spec: &LSpec) -> ExponentSets {
    let alpha = spec.alpha_exact();
    let one = Rational64::from_integer(1);
    let a1 = alpha + one;
    let r = spec.r;
    let steps: Vec<Rational64> = spec
        .lstar_poles
        .iter()
        .map(|mu| (mu + one) / a1 - one)
        .filter(|g| g.is_negative())
        .collect();
    let neg_steps: Vec<Rational64> = steps.iter().map(|g| -g).collect();

    let l_lo = -r / a1;
    let base: Vec<Rational64> = spec.lstar_poles.iter().map(|mu| mu / a1).collect();
    let l_set = closure(&base, &steps, |x| *x > l_lo);

    let m_hi = (r + alpha) / a1;
    let lattice = closure(&[Rational64::zero()], &neg_steps, |x| *x < m_hi);
    let m_set = closure(&lattice.into_iter().collect::<Vec<_>>(), &[alpha / a1], |x| *x < m_hi);

    let n_hi = r / a1;
    let thetas: Vec<Rational64> =
        l_set.iter().map(|x| -x).filter(|t| t.is_positive() && *t < n_hi).collect();
    let n_set = closure(&[Rational64::zero()], &thetas, |x| *x < n_hi);

    let mut sums = BTreeSet::new();
    for a in &m_set {
        for b in &n_set {
            let c = a + b;
            if c < m_hi {
                sums.insert(c);
            }
        }
    }
    ExponentSets {
        l_set: l_set.into_iter().collect(),
        m_set: m_set.into_iter().collect(),
        n_set: n_set.into_iter().collect(),
        m_plus_n: sums.into_iter().collect(),
    }
}

/// `p_f(n) ~ C n^{-b} exp(sum A_j n^{e_j})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticModel {
    pub preset: String,
    pub alpha: f64,
    /// `(A_j, e_j)` with `e_1 = alpha/(alpha+1) > e_2 > ... >= 0`.
    pub exp_terms: Vec<(f64, f64)>,
    #[serde(rename = "C")]
    pub c: f64,
    pub b: f64,
    pub next_error_exponent: f64,
}

impl AsymptoticModel {
    /// `log C - b log n + sum A_j n^{e_j}`.
    pub fn log_estimate(&self, n: f64) -> f64 {
        let mut acc = self.c.ln() - self.b * n.ln();
        for (a, e) in &self.exp_terms {
            acc += a * n.powf(*e);
        }
        acc
    }
}

fn rats(v: &[(i64, i64)]) -> Vec<Rational64> {
    v.iter().map(|&(a, b)| Rational64::new(a, b)).collect()
}

static SO5_SPEC: OnceLock<std::result::Result<LSpec, Error>> = OnceLock::new();
static SU3_SPEC: OnceLock<std::result::Result<LSpec, Error>> = OnceLock::new();

/// Dirichlet-series data for the built-in presets. The Witten-zeta entries
/// are computed numerically once per process.
pub fn preset_lspec(w: &WeightFunction) -> Result<LSpec> {
    let pi = std::f64::consts::PI;
    match w {
        WeightFunction::Ones => LSpec::new(
            vec![Pole { at: ratio(1, 1), residue: 1.0 }],
            rats(&[(1, 1), (0, 1), (-1, 1)]),
            -0.5,
            *consts::ZP0,
            ratio(3, 2),
        ),
        WeightFunction::PlanePartition => LSpec::new(
            vec![Pole { at: ratio(2, 1), residue: 1.0 }],
            rats(&[(2, 1), (0, 1), (-2, 1)]),
            -1.0 / 12.0,
            *consts::ZPM1,
            ratio(5, 2),
        ),
        WeightFunction::Polygonal(k) => {
            let km2 = (*k - 2) as f64;
            let residue = (1.0 / (2.0 * km2)).sqrt();
            let l0 = 1.0 / (2.0 - *k as f64);
            let l0p = (km2 / 2.0).ln() / km2 + ln_gamma_real(2.0 / km2) - (2.0 * pi).ln();
            LSpec::new(
                vec![Pole { at: ratio(1, 2), residue }],
                rats(&[(1, 2), (0, 1), (-1, 2), (-1, 1)]),
                l0,
                l0p,
                ratio(5, 4),
            )
        }
        WeightFunction::So5 => SO5_SPEC
            .get_or_init(|| {
                let g14 = *consts::G14;
                let res_half = 3f64.sqrt() * g14 * g14 / (8.0 * pi.sqrt());
                let res_third = (2f64.powf(1.0 / 3.0) + 1.0) * 3f64.powf(-2.0 / 3.0) * *consts::Z13;
                let d0 = witten::zeta_so5_deriv0(&witten::MbParams::default())?;
                LSpec::new(
                    vec![Pole { at: ratio(1, 2), residue: res_half }, Pole { at: ratio(1, 3), residue: res_third }],
                    rats(&[(1, 2), (1, 3), (0, 1), (-1, 3)]),
                    3.0 / 8.0,
                    d0.value,
                    ratio(1, 1),
                )
            })
            .clone(),
        WeightFunction::Su3 => SU3_SPEC.get_or_init(witten::su3_lspec).clone(),
        WeightFunction::Explicit { .. } => {
            Err(Error::Unsupported("explicit weights need a caller supplied L-spec".into()))
        }
    }
}

/// `Gamma(alpha+1) zeta(alpha+1) omega` for a pole.
pub fn pole_constant(p: &Pole) -> f64 {
    let a = to_f64(p.at);
    p.residue * gamma_real(a + 1.0) * crate::special::zeta_real(a + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so5_support_small() {
        let t = WeightFunction::So5.table(16);
        let support: Vec<usize> = (1..=16).filter(|&n| t[n] > 0).collect();
        assert_eq!(support, vec![1, 4, 5, 10, 14, 16]);
        assert!(support.iter().all(|&n| t[n] == 1));
    }

    #[test]
    fn su3_small_values() {
        let t = WeightFunction::Su3.table(12);
        // jk(j+k)/2: (1,1)->1, (1,2),(2,1)->3, (1,3),(3,1)->6, (2,2)->8, (1,4),(4,1)->10
        assert_eq!(t[1], 1);
        assert_eq!(t[3], 2);
        assert_eq!(t[6], 2);
        assert_eq!(t[8], 1);
        assert_eq!(t[10], 2);
        assert_eq!(t[2] + t[4] + t[5] + t[7] + t[9] + t[11] + t[12], 0);
    }

    #[test]
    fn polygonal_numbers() {
        assert_eq!((1..6).map(|m| polygonal_number(3, m)).collect::<Vec<_>>(), vec![1, 3, 6, 10, 15]);
        assert_eq!((1..6).map(|m| polygonal_number(5, m)).collect::<Vec<_>>(), vec![1, 5, 12, 22, 35]);
    }

    #[test]
    fn presets_parse() {
        assert_eq!(WeightFunction::from_preset("polygonal:4").unwrap(), WeightFunction::Polygonal(4));
        assert!(WeightFunction::from_preset("polygonal:2").is_err());
        assert!(WeightFunction::from_preset("nope").is_err());
    }

    #[test]
    fn explicit_table_with_tail() {
        let w = WeightFunction::parse_table("t", "# demo\n1 2\n3 0\ntail ones\n").unwrap();
        assert_eq!(w.table(5), vec![0, 2, 0, 0, 1, 1]);
    }

    #[test]
    fn ones_exponents() {
        let spec = preset_lspec(&WeightFunction::Ones).unwrap();
        let e = exponent_sets(&spec);
        let pos: Vec<_> = e.l_set.iter().copied().filter(|x| x.is_positive()).collect();
        assert_eq!(pos, vec![ratio(1, 2)]);
        assert_eq!(e.next_error_exponent(), Some(ratio(1, 2)));
    }

    #[test]
    fn so5_exponents_without_numerics() {
        let spec = LSpec::new(
            vec![Pole { at: ratio(1, 2), residue: 1.6 }, Pole { at: ratio(1, 3), residue: -0.9 }],
            rats(&[(1, 2), (1, 3), (0, 1), (-1, 3)]),
            0.375,
            0.0,
            ratio(1, 1),
        )
        .unwrap();
        let e = exponent_sets(&spec);
        assert_eq!(e.exponential_exponents(), vec![ratio(1, 3), ratio(2, 9), ratio(1, 9), ratio(0, 1)]);
        assert_eq!(e.next_error_exponent(), Some(ratio(1, 9)));
    }

    #[test]
    fn validation_rejects_bad_specs() {
        let bad = LSpec::new(vec![Pole { at: ratio(1, 1), residue: 1.0 }], rats(&[(1, 1)]), 0.0, 0.0, ratio(1, 1));
        assert!(bad.is_err());
        let neg = LSpec::new(vec![Pole { at: ratio(1, 1), residue: -1.0 }], rats(&[(0, 1)]), 0.0, 0.0, ratio(1, 1));
        assert!(neg.is_err());
    }
}
