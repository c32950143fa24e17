//! Exact coefficient tables of `prod (1 - q^n)^{-f(n)}`.
//!
//! The main path is the divisor-sum convolution
//! `n p(n) = sum_k c(k) p(n-k)` with `c(k) = sum_{d|k} d f(d)`, run on raw
//! 64-bit limbs with 128-bit accumulators. For `f = 1` the pentagonal
//! recurrence is faster. The oracle multiplies the factors out directly.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::WeightFunction;

/// Bumped whenever a change could alter table contents.
pub const ALGORITHM_REVISION: &str = "coeff-v1";

/// `p_f(0..=N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    pub preset: String,
    pub values: Vec<BigUint>,
}

impl CoeffTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.values.get(n)
    }

    pub fn max_n(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// `ln p(n)`, or `-inf` when `p(n) = 0`.
    pub fn ln(&self, n: usize) -> f64 {
        ln_biguint(&self.values[n])
    }

    /// CSV with header `n,p_f_n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,p_f_n\n");
        for (n, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{n},{v}\n"));
        }
        out
    }
}

/// Natural log of a big integer to double precision.
pub fn ln_biguint(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 64 {
        return (v.to_u64().expect("fits") as f64).ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("fits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `f(1..=n_max)` with `f(0) = 0`.
pub fn weight_table(w: &WeightFunction, n_max: usize) -> Vec<u64> {
    w.table(n_max)
}

/// `c(k) = sum_{d | k} d f(d)` for `k <= n_max`.
pub fn divisor_weights(f: &[u64]) -> Vec<u128> {
    let n_max = f.len() - 1;
    let mut c = vec![0u128; n_max + 1];
    for d in 1..=n_max {
        if f[d] == 0 {
            continue;
        }
        let w = d as u128 * f[d] as u128;
        let mut k = d;
        while k <= n_max {
            c[k] += w;
            k += d;
        }
    }
    c
}

fn limbs_to_big(limbs: &[u64]) -> BigUint {
    let mut digits = Vec::with_capacity(limbs.len() * 2);
    for &l in limbs {
        digits.push(l as u32);
        digits.push((l >> 32) as u32);
    }
    BigUint::new(digits)
}

fn trim(limbs: &mut Vec<u64>) {
    while limbs.last() == Some(&0) {
        limbs.pop();
    }
}

/// Fold 128-bit column sums into 64-bit limbs.
fn normalize(acc: &mut [u128], out: &mut Vec<u64>) {
    out.clear();
    let mut carry: u128 = 0;
    for a in acc.iter_mut() {
        let v = *a + carry;
        out.push(v as u64);
        carry = v >> 64;
        *a = 0;
    }
    while carry > 0 {
        out.push(carry as u64);
        carry >>= 64;
    }
    trim(out);
}

/// In-place exact division of a limb vector by a small divisor.
fn div_small(limbs: &mut Vec<u64>, d: u64) -> u64 {
    let mut rem: u128 = 0;
    for l in limbs.iter_mut().rev() {
        let cur = (rem << 64) | *l as u128;
        *l = (cur / d as u128) as u64;
        rem = cur % d as u128;
    }
    trim(limbs);
    rem as u64
}

/// Divisor-sum convolution up to `n_max`.
pub fn coeffs_conv(w: &WeightFunction, n_max: usize) -> Result<CoeffTable> {
    let f = weight_table(w, n_max);
    let c = divisor_weights(&f);
    let cmax = c.iter().copied().max().unwrap_or(1).max(1);
    if cmax >> 63 != 0 {
        return Err(Error::Unsupported("divisor weights exceed 63 bits".into()));
    }
    let cbits = 128 - cmax.leading_zeros();
    // Columns hold sums of products below 2^(64 + cbits); flush before overflow.
    let flush_every: usize = if 64 + cbits >= 127 { 1 } else { 1usize << (127 - 64 - cbits).min(40) };
    let mut table: Vec<Vec<u64>> = Vec::with_capacity(n_max + 1);
    table.push(vec![1]);
    let mut acc: Vec<u128> = Vec::new();
    let mut tmp: Vec<u64> = Vec::new();
    let mut partial: Vec<u64> = Vec::new();
    for n in 1..=n_max {
        let width = table[n - 1].len() + 3;
        acc.clear();
        acc.resize(width, 0);
        partial.clear();
        let mut pending = 0usize;
        for k in 1..=n {
            let ck = c[k];
            if ck == 0 {
                continue;
            }
            let prev = &table[n - k];
            for (i, &l) in prev.iter().enumerate() {
                acc[i] += ck * l as u128;
            }
            pending += 1;
            if pending == flush_every {
                normalize(&mut acc, &mut tmp);
                add_into(&mut partial, &tmp);
                acc.resize(width.max(partial.len() + 1), 0);
                pending = 0;
            }
        }
        normalize(&mut acc, &mut tmp);
        add_into(&mut partial, &tmp);
        let rem = div_small(&mut partial, n as u64);
        if rem != 0 {
            return Err(Error::NonConvergence(format!("convolution not divisible at n = {n}")));
        }
        table.push(std::mem::take(&mut partial));
    }
    Ok(CoeffTable { preset: w.to_string(), values: table.iter().map(|l| limbs_to_big(l)).collect() })
}

fn add_into(dst: &mut Vec<u64>, src: &[u64]) {
    if dst.len() < src.len() {
        dst.resize(src.len(), 0);
    }
    let mut carry = 0u64;
    for i in 0..dst.len() {
        let s = if i < src.len() { src[i] } else { 0 };
        let (a, c1) = dst[i].overflowing_add(s);
        let (b, c2) = a.overflowing_add(carry);
        dst[i] = b;
        carry = (c1 as u64) + (c2 as u64);
        if carry == 0 && i >= src.len() {
            break;
        }
    }
    if carry > 0 {
        dst.push(carry);
    }
}

fn sub_into(dst: &mut Vec<u64>, src: &[u64]) {
    let mut borrow = 0u64;
    for i in 0..dst.len() {
        let s = if i < src.len() { src[i] } else { 0 };
        let (a, b1) = dst[i].overflowing_sub(s);
        let (b, b2) = a.overflowing_sub(borrow);
        dst[i] = b;
        borrow = (b1 as u64) + (b2 as u64);
    }
    debug_assert_eq!(borrow, 0, "pentagonal difference went negative");
    trim(dst);
}

/// Euler's pentagonal recurrence for ordinary partitions.
pub fn coeffs_pentagonal(n_max: usize) -> CoeffTable {
    let mut table: Vec<Vec<u64>> = Vec::with_capacity(n_max + 1);
    table.push(vec![1]);
    let mut pos: Vec<u128> = Vec::new();
    let mut neg: Vec<u128> = Vec::new();
    let mut pos_l = Vec::new();
    let mut neg_l = Vec::new();
    for n in 1..=n_max {
        let width = table[n - 1].len() + 2;
        pos.clear();
        pos.resize(width, 0);
        neg.clear();
        neg.resize(width, 0);
        let mut k = 1usize;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let target = if k % 2 == 1 { &mut pos } else { &mut neg };
            for (i, &l) in table[n - g1].iter().enumerate() {
                target[i] += l as u128;
            }
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                for (i, &l) in table[n - g2].iter().enumerate() {
                    target[i] += l as u128;
                }
            }
            k += 1;
        }
        normalize(&mut pos, &mut pos_l);
        normalize(&mut neg, &mut neg_l);
        let mut v = pos_l.clone();
        sub_into(&mut v, &neg_l);
        table.push(v);
    }
    CoeffTable { preset: "ones".into(), values: table.iter().map(|l| limbs_to_big(l)).collect() }
}

/// Pick the fastest exact method.
pub fn coeffs(w: &WeightFunction, n_max: usize) -> Result<CoeffTable> {
    match w {
        WeightFunction::Ones => Ok(coeffs_pentagonal(n_max)),
        _ => coeffs_conv(w, n_max),
    }
}

/// Direct expansion of the truncated product, one factor at a time.
/// Quadratic in `n_max`; intended for cross-checks with `n_max <= 2000`.
pub fn coeffs_oracle(w: &WeightFunction, n_max: usize) -> Result<CoeffTable> {
    if n_max > 2000 {
        return Err(Error::Domain(format!("oracle limited to N <= 2000, got {n_max}")));
    }
    let f = weight_table(w, n_max);
    let mut poly: Vec<BigUint> = vec![BigUint::zero(); n_max + 1];
    poly[0] = BigUint::one();
    for n in 1..=n_max {
        let mult = f[n];
        if mult == 0 {
            continue;
        }
        // (1 - q^n)^{-mult} = sum_m binom(mult + m - 1, m) q^{nm}
        let terms = n_max / n;
        let mut binoms = Vec::with_capacity(terms + 1);
        let mut b = BigUint::one();
        binoms.push(b.clone());
        for m in 1..=terms {
            b = b * BigUint::from(mult + m as u64 - 1) / BigUint::from(m as u64);
            binoms.push(b.clone());
        }
        let mut next = vec![BigUint::zero(); n_max + 1];
        for (i, pi) in poly.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (m, bm) in binoms.iter().enumerate() {
                let j = i + m * n;
                if j > n_max {
                    break;
                }
                next[j] += pi * bm;
            }
        }
        poly = next;
    }
    Ok(CoeffTable { preset: w.to_string(), values: poly })
}

fn cache_key(preset: &str, n_max: usize) -> String {
    let mut h = Sha256::new();
    h.update(preset.as_bytes());
    h.update((n_max as u64).to_le_bytes());
    h.update(ALGORITHM_REVISION.as_bytes());
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    hex(&h.finalize()[..12])
}

fn hex(b: &[u8]) -> String {
    b.iter().map(|x| format!("{x:02x}")).collect()
}

const MAGIC: &[u8; 8] = b"MNRDCOEF";

pub fn cache_path(dir: &Path, preset: &str, n_max: usize) -> PathBuf {
    dir.join(format!("coeffs-{}.bin", cache_key(preset, n_max)))
}

/// Serialize a table: magic, key, count, then length-prefixed little-endian
/// magnitudes, then a SHA-256 of everything before it.
pub fn write_cache(dir: &Path, table: &CoeffTable) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let n_max = table.max_n();
    let key = cache_key(&table.preset, n_max);
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(key.len() as u32).to_le_bytes());
    buf.extend_from_slice(key.as_bytes());
    buf.extend_from_slice(&(table.values.len() as u64).to_le_bytes());
    for v in &table.values {
        let bytes = v.to_bytes_le();
        buf.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
        buf.extend_from_slice(&bytes);
    }
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    let path = cache_path(dir, &table.preset, n_max);
    let tmp = path.with_extension("tmp");
    {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(&buf)?;
    }
    std::fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Load a cached table if present. Corrupt or mismatched files are errors.
pub fn read_cache(dir: &Path, preset: &str, n_max: usize) -> Result<Option<CoeffTable>> {
    let path = cache_path(dir, preset, n_max);
    if !path.exists() {
        return Ok(None);
    }
    let mut buf = Vec::new();
    std::fs::File::open(&path)?.read_to_end(&mut buf)?;
    let corrupt = |why: &str| Error::Cache(format!("{}: {why}", path.display()));
    if buf.len() < MAGIC.len() + 32 || &buf[..8] != MAGIC {
        return Err(corrupt("bad header"));
    }
    let (body, digest) = buf.split_at(buf.len() - 32);
    if Sha256::digest(body).as_slice() != digest {
        return Err(corrupt("checksum mismatch"));
    }
    let mut pos = 8;
    let take = |pos: &mut usize, n: usize| -> Result<&[u8]> {
        let s = body.get(*pos..*pos + n).ok_or_else(|| corrupt("truncated"))?;
        *pos += n;
        Ok(s)
    };
    let klen = u32::from_le_bytes(take(&mut pos, 4)?.try_into().expect("4 bytes")) as usize;
    let key = take(&mut pos, klen)?;
    if key != cache_key(preset, n_max).as_bytes() {
        return Err(corrupt("key mismatch"));
    }
    let count = u64::from_le_bytes(take(&mut pos, 8)?.try_into().expect("8 bytes")) as usize;
    if count != n_max + 1 {
        return Err(corrupt("length mismatch"));
    }
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        let len = u32::from_le_bytes(take(&mut pos, 4)?.try_into().expect("4 bytes")) as usize;
        values.push(BigUint::from_bytes_le(take(&mut pos, len)?));
    }
    if pos != body.len() {
        return Err(corrupt("trailing bytes"));
    }
    Ok(Some(CoeffTable { preset: preset.to_string(), values }))
}

/// Compute a table, going through the cache directory when given.
pub fn coeffs_cached(w: &WeightFunction, n_max: usize, cache_dir: Option<&Path>) -> Result<CoeffTable> {
    let preset = w.to_string();
    if let Some(dir) = cache_dir {
        if let Some(t) = read_cache(dir, &preset, n_max)? {
            return Ok(t);
        }
    }
    let t = coeffs(w, n_max)?;
    if let Some(dir) = cache_dir {
        write_cache(dir, &t)?;
    }
    Ok(t)
}
