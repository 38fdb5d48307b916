//! Exact Hamming-sphere energy sums.
//!
//! With `A = S(n,k)`, the normalized energy `E₂(A,A)/|A|²` splits over the
//! weight `2t` of `a ⊕ b`:
//!
//! ```text
//! s_t(n,k) = C(n,2t) · (C(2t,t) · C(n-2t,k-t))² / C(n,k)²,    r(n,k) = Σ_t s_t(n,k)
//! ```
//!
//! Everything here is exact big-rational arithmetic except `t₁`, `t₂` and the
//! small-`k` diagnostic. These work for `n` far above the dense cap.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::sync::OnceLock;

use crate::{Error, Result};

/// Rows `C(n, ·)` for `n` up to this bound are memoized.
pub const MEMO_ROWS: u32 = 4096;

static ROWS: OnceLock<Vec<OnceLock<Vec<BigUint>>>> = OnceLock::new();

fn build_row(n: u32) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for j in 0..n {
        c = c * BigUint::from(n - j) / BigUint::from(j + 1);
        row.push(c.clone());
    }
    row
}

fn row(n: u32) -> &'static [BigUint] {
    let rows = ROWS.get_or_init(|| (0..=MEMO_ROWS).map(|_| OnceLock::new()).collect());
    rows[n as usize].get_or_init(|| build_row(n))
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    if n <= MEMO_ROWS {
        return row(n)[k as usize].clone();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |c, j| {
        c * BigUint::from(n - j) / BigUint::from(j + 1)
    })
}

fn int(v: BigUint) -> BigInt {
    BigInt::from(v)
}

fn ratio_of(p: BigInt, q: BigInt) -> BigRational {
    BigRational::new(p, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SphereParams {
    n: u32,
    k: u32,
}

impl SphereParams {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("sphere dimension must be positive"));
        }
        if k > n {
            return Err(Error::domain(format!("radius k = {k} exceeds n = {n}")));
        }
        Ok(SphereParams { n, k })
    }

    /// As [`SphereParams::new`], additionally requiring `k ≤ n/2`.
    pub fn half(n: u32, k: u32) -> Result<Self> {
        let p = SphereParams::new(n, k)?;
        if !p.in_half_range() {
            return Err(Error::domain(format!("k = {k} exceeds n/2 for n = {n}")));
        }
        Ok(p)
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn in_half_range(self) -> bool {
        2 * self.k <= self.n
    }

    /// `k/n`.
    pub fn density(self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// Numerator of `s_t` over the common denominator `C(n,k)²`.
fn s_t_numerator(p: SphereParams, t: u32) -> BigUint {
    let (n, k) = (p.n, p.k);
    if 2 * t > n {
        return BigUint::zero();
    }
    let inner = binomial(2 * t, t) * binomial(n - 2 * t, k - t);
    binomial(n, 2 * t) * &inner * &inner
}

fn denominator(p: SphereParams) -> BigUint {
    let c = binomial(p.n, p.k);
    &c * &c
}

pub fn s_t_exact(p: SphereParams, t: u32) -> Result<BigRational> {
    if t > p.k {
        return Err(Error::domain(format!("t = {t} out of range 0..={}", p.k)));
    }
    Ok(ratio_of(int(s_t_numerator(p, t)), int(denominator(p))))
}

/// `r(n,k) = E₂(S(n,k))/|S(n,k)|²`, exactly.
pub fn r_exact(p: SphereParams) -> BigRational {
    let num = (0..=p.k).fold(BigUint::zero(), |acc, t| acc + s_t_numerator(p, t));
    ratio_of(int(num), int(denominator(p)))
}

/// Closed form of `s_{t+1}/s_t`:
/// `2(2t+1)/(t+1)³ · (k-t)²(n-k-t)² / ((n-2t)(n-2t-1))`.
pub fn ratio_st(p: SphereParams, t: u32) -> Result<BigRational> {
    let (n, k) = (p.n as i64, p.k as i64);
    let t = t as i64;
    if p.k == 0 || t > k - 1 {
        return Err(Error::domain(format!("t = {t} out of range 0..k-1 for k = {k}")));
    }
    let tail = n - 2 * t;
    if tail < 2 || n - k - t < 0 {
        return Err(Error::domain(format!(
            "s_t vanishes at t = {t} for (n,k) = ({n},{k})"
        )));
    }
    let num = BigInt::from(2 * (2 * t + 1))
        * BigInt::from((k - t) * (k - t))
        * BigInt::from((n - k - t) * (n - k - t));
    let den = BigInt::from((t + 1).pow(3)) * BigInt::from(tail * (tail - 1));
    Ok(ratio_of(num, den))
}

fn discriminant(p: SphereParams) -> f64 {
    let (n, k) = (p.n as f64, p.k as f64);
    n * n + 8.0 * (n - 2.0 * k).powi(2)
}

/// Smaller root of `q(t) = 4t² − 3nt + 2k(n−k)`.
pub fn t1(p: SphereParams) -> f64 {
    // rationalized form (32k(n−k) / 8(3n + √D)) avoids cancellation for small k
    let (n, k) = (p.n as f64, p.k as f64);
    4.0 * k * (n - k) / (3.0 * n + discriminant(p).sqrt())
}

/// Larger root of `q(t)`.
pub fn t2(p: SphereParams) -> f64 {
    (3.0 * p.n as f64 + discriminant(p).sqrt()) / 8.0
}

/// Exact comparison of a rational `c` with `t₁(n,k)`.
pub fn cmp_t1(p: SphereParams, c: &BigRational) -> Ordering {
    let (n, k) = (BigInt::from(p.n), BigInt::from(p.k));
    let disc = &n * &n + BigInt::from(8) * (&n - BigInt::from(2) * &k).pow(2);
    let disc = BigRational::from_integer(disc);
    // t₁ = (3n − √D)/8, so c < t₁ ⇔ √D < w with w = 3n − 8c
    let w = BigRational::from_integer(BigInt::from(3) * n) - c * BigInt::from(8);
    if w.is_negative() {
        return Ordering::Greater;
    }
    disc.cmp(&(&w * &w))
}

/// The `t` maximizing `s_t(n,k)`; the smallest such `t` on exact ties.
pub fn argmax_st(p: SphereParams) -> Result<u32> {
    if p.k == 0 {
        return Err(Error::domain("argmax needs k ≥ 1"));
    }
    // all s_t share the denominator, so compare numerators
    let mut best = (0u32, s_t_numerator(p, 0));
    for t in 1..=p.k {
        let v = s_t_numerator(p, t);
        if v > best.1 {
            best = (t, v);
        }
    }
    Ok(best.0)
}

/// `Σ_{t=0}^{k} C(2t,t)·C(k,t)²`, an upper bound on `μ(S(n,k))` for every `n`.
pub fn sphere_sum_bound(k: u32) -> BigUint {
    (0..=k).fold(BigUint::zero(), |acc, t| {
        let c = binomial(k, t);
        acc + binomial(2 * t, t) * &c * &c
    })
}

/// `e^{−2k²/n} · Σ_t C(2t,t)·C(k,t)²`, the small-radius estimate of `r(n,k)`.
pub fn small_k_lower(p: SphereParams) -> f64 {
    let (n, k) = (p.n as f64, p.k as f64);
    let sum = sphere_sum_bound(p.k).to_f64().unwrap_or(f64::INFINITY);
    (-2.0 * k * k / n).exp() * sum
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereTableRow {
    pub t: u32,
    #[serde(with = "crate::rational")]
    pub s_t: BigRational,
    #[serde(with = "crate::rational::opt")]
    pub ratio_to_prev: Option<BigRational>,
    #[serde(with = "crate::rational")]
    pub cumulative: BigRational,
}

/// Rows `t ∈ range ∩ [0, k]`; `cumulative` always counts from `t = 0`.
pub fn sphere_table(p: SphereParams, range: std::ops::RangeInclusive<u32>) -> Vec<SphereTableRow> {
    let den = int(denominator(p));
    let mut rows = Vec::new();
    let mut cumulative = BigUint::zero();
    let mut prev: Option<BigUint> = None;
    for t in 0..=p.k {
        let num = s_t_numerator(p, t);
        cumulative += &num;
        if range.contains(&t) {
            let ratio_to_prev = match &prev {
                Some(q) if !q.is_zero() => Some(ratio_of(int(num.clone()), int(q.clone()))),
                _ => None,
            };
            rows.push(SphereTableRow {
                t,
                s_t: ratio_of(int(num.clone()), den.clone()),
                ratio_to_prev,
                cumulative: ratio_of(int(cumulative.clone()), den.clone()),
            });
        }
        prev = Some(num);
    }
    rows
}

/// Floor of the exact `t₁`, found by bisection on [`cmp_t1`].
pub fn t1_floor(p: SphereParams) -> u32 {
    let (mut lo, mut hi) = (0u32, p.n);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        let c = BigRational::from_integer(BigInt::from(mid));
        if cmp_t1(p, &c) != Ordering::Greater {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// `⌈√(n·log₂n)⌉`, the half-width of the window holding the dominant `s_t`.
pub fn central_window(n: u32) -> u32 {
    let n = n as f64;
    (n * n.log2()).sqrt().ceil() as u32
}

/// `Σ s_t` over `|t − t₁| ≤ L`.
pub fn central_mass(p: SphereParams, half_width: u32) -> BigRational {
    let centre = t1(p);
    let num = (0..=p.k)
        .filter(|&t| (t as f64 - centre).abs() <= half_width as f64)
        .fold(BigUint::zero(), |acc, t| acc + s_t_numerator(p, t));
    ratio_of(int(num), int(denominator(p)))
}

/// `a/b` for positive integers as an exact rational.
pub(crate) fn frac(a: impl Into<BigInt>, b: impl Into<BigInt>) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// `C(n,k)` as a plain product quotient, bypassing the row memo.
#[doc(hidden)]
pub fn binomial_direct(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..k {
        num *= BigUint::from(n - j);
        den *= BigUint::from(j + 1);
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    q
}
