//! Sequence convolution kernels backing the level merge.
//!
//! Three flavors share one shape (`out[k] = combine over i + j = k`):
//!
//! * `(max, +)` convolution on sequences over `Z ∪ {-inf}` — the optimization
//!   merge. Quadratic; no subquadratic algorithm is attempted.
//! * Boolean convolution (`OR` over `AND`s) — the feasibility merge. Runs as
//!   an exact integer convolution of 0/1 sequences followed by thresholding,
//!   so it inherits the transform speedup.
//! * Exact integer convolution — schoolbook below a cutoff, otherwise a
//!   number-theoretic transform over a prime modulus chosen so every true
//!   coefficient fits. No floating point, no wraparound.
//!
//! Minus infinity is a distinguished sentinel (`None`), never a large negative
//! number; arithmetic on finite values is checked.

use crate::error::{Error, Result};

/// A finite sequence over the `(max, +)` semiring. `None` is `-inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxPlusSeq {
    pub values: Vec<Option<i128>>,
}

impl MaxPlusSeq {
    pub fn new(values: Vec<Option<i128>>) -> Self {
        MaxPlusSeq { values }
    }

    /// All `-inf`.
    pub fn neg_inf(len: usize) -> Self {
        MaxPlusSeq {
            values: vec![None; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A finite 0/1 sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolSeq {
    pub bits: Vec<bool>,
}

impl BoolSeq {
    pub fn new(bits: Vec<bool>) -> Self {
        BoolSeq { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// `(max, +)` convolution: `out[k] = max_{i+j=k} (r[i] + s[j])`, length
/// `|r| + |s| - 1`. `[Some(0)]` is the identity; `-inf` absorbs.
pub fn maxplus_conv(r: &MaxPlusSeq, s: &MaxPlusSeq) -> Result<MaxPlusSeq> {
    if r.is_empty() || s.is_empty() {
        return Err(Error::internal("maxplus_conv requires nonempty sequences"));
    }
    let mut out: Vec<Option<i128>> = vec![None; r.len() + s.len() - 1];
    // Collect finite entries first: the loop below is then quadratic in the
    // finite count, not in the sequence length.
    let finite = |seq: &MaxPlusSeq| -> Vec<(usize, i128)> {
        seq.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .collect()
    };
    let rf = finite(r);
    let sf = finite(s);
    for &(i, a) in &rf {
        for &(j, b) in &sf {
            let sum = a
                .checked_add(b)
                .ok_or_else(|| Error::capacity("maxplus_conv value overflow"))?;
            let slot = &mut out[i + j];
            if slot.is_none() || sum > slot.unwrap() {
                *slot = Some(sum);
            }
        }
    }
    Ok(MaxPlusSeq::new(out))
}

/// Boolean convolution: `out[k] = OR_{i+j=k} (r[i] AND s[j])`.
pub fn boolean_conv(r: &BoolSeq, s: &BoolSeq) -> Result<BoolSeq> {
    if r.is_empty() || s.is_empty() {
        return Err(Error::internal("boolean_conv requires nonempty sequences"));
    }
    let ri: Vec<i128> = r.bits.iter().map(|&b| b as i128).collect();
    let si: Vec<i128> = s.bits.iter().map(|&b| b as i128).collect();
    let counts = exact_integer_conv(&ri, &si)?;
    Ok(BoolSeq::new(counts.into_iter().map(|v| v > 0).collect()))
}

/// Output length below which the schoolbook loop beats the transform.
const NAIVE_CUTOFF: usize = 512;

/// Transform-friendly primes, each with primitive root 3. The first handles
/// lengths to 2^23 with more coefficient headroom; the second trades headroom
/// for lengths to 2^26.
const NTT_PRIMES: [(u64, u32); 2] = [(998_244_353, 23), (469_762_049, 26)];

/// Exact convolution of nonnegative integer sequences:
/// `out[k] = sum_{i+j=k} r[i] * s[j]`.
///
/// Uses the schoolbook loop below [`NAIVE_CUTOFF`], otherwise a
/// number-theoretic transform with a modulus certified to exceed every
/// coefficient of the result; errors if no modulus qualifies.
pub fn exact_integer_conv(r: &[i128], s: &[i128]) -> Result<Vec<i128>> {
    if r.is_empty() || s.is_empty() {
        return Err(Error::internal(
            "exact_integer_conv requires nonempty sequences",
        ));
    }
    if r.iter().chain(s).any(|&v| v < 0) {
        return Err(Error::capacity(
            "exact_integer_conv requires nonnegative entries",
        ));
    }
    let out_len = r.len() + s.len() - 1;
    if out_len <= NAIVE_CUTOFF {
        return naive_conv(r, s);
    }

    // Certify that every output coefficient fits below a usable modulus.
    let max_r = *r.iter().max().unwrap() as u128;
    let max_s = *s.iter().max().unwrap() as u128;
    let overlap = r.len().min(s.len()) as u128;
    let coeff_bound = max_r
        .checked_mul(max_s)
        .and_then(|v| v.checked_mul(overlap))
        .ok_or_else(|| Error::capacity("exact_integer_conv coefficient bound overflow"))?;
    let transform_len = out_len.next_power_of_two();
    let chosen = NTT_PRIMES.iter().find(|&&(p, max_log)| {
        coeff_bound < p as u128 && transform_len <= 1usize << max_log
    });
    let Some(&(p, _)) = chosen else {
        return Err(Error::capacity(format!(
            "exact_integer_conv: length {out_len} with coefficient bound {coeff_bound} \
             exceeds every transform modulus"
        )));
    };

    let mut fa: Vec<u64> = Vec::with_capacity(transform_len);
    fa.extend(r.iter().map(|&v| (v as u128 % p as u128) as u64));
    fa.resize(transform_len, 0);
    let same = std::ptr::eq(r, s);
    let mut fb: Vec<u64> = if same {
        Vec::new()
    } else {
        let mut fb: Vec<u64> = Vec::with_capacity(transform_len);
        fb.extend(s.iter().map(|&v| (v as u128 % p as u128) as u64));
        fb.resize(transform_len, 0);
        fb
    };

    ntt(&mut fa, false, p);
    if same {
        for v in fa.iter_mut() {
            *v = mul_mod(*v, *v, p);
        }
    } else {
        ntt(&mut fb, false, p);
        for (a, &b) in fa.iter_mut().zip(fb.iter()) {
            *a = mul_mod(*a, b, p);
        }
    }
    ntt(&mut fa, true, p);

    Ok(fa[..out_len].iter().map(|&v| v as i128).collect())
}

fn naive_conv(r: &[i128], s: &[i128]) -> Result<Vec<i128>> {
    let mut out = vec![0i128; r.len() + s.len() - 1];
    for (i, &a) in r.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in s.iter().enumerate() {
            let term = a
                .checked_mul(b)
                .ok_or_else(|| Error::capacity("exact_integer_conv coefficient overflow"))?;
            out[i + j] = out[i + j]
                .checked_add(term)
                .ok_or_else(|| Error::capacity("exact_integer_conv coefficient overflow"))?;
        }
    }
    Ok(out)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Iterative radix-2 transform over `Z_p`, primitive root 3. `a.len()` must be
/// a power of two within the modulus' supported order.
fn ntt(a: &mut [u64], invert: bool, p: u64) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());

    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }

    let mut len = 2usize;
    while len <= n {
        let mut w_len = pow_mod(3, (p - 1) / len as u64, p);
        if invert {
            w_len = pow_mod(w_len, p - 2, p);
        }
        for start in (0..n).step_by(len) {
            let mut w = 1u64;
            for k in start..start + len / 2 {
                let u = a[k];
                let v = mul_mod(a[k + len / 2], w, p);
                a[k] = (u + v) % p;
                a[k + len / 2] = (u + p - v) % p;
                w = mul_mod(w, w_len, p);
            }
        }
        len <<= 1;
    }

    if invert {
        let n_inv = pow_mod(n as u64, p - 2, p);
        for v in a.iter_mut() {
            *v = mul_mod(*v, n_inv, p);
        }
    }
}
