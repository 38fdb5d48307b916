//! Points, subsets, functions and spectra on `{0,1}^n`.
//!
//! Index order is the bitmask read as an integer: bit `i` of the mask is
//! coordinate `i + 1`. `analyze` divides by `2^n`, `synthesize` does not.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Sub};

use crate::{Error, Result};

pub const DEFAULT_DENSE_CAP: u32 = 24;
/// Largest dimension a mask-based point set can carry.
pub const MAX_DIMENSION: u32 = 63;

/// Upper limit on `n` for anything that allocates `2^n` entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseCap(pub u32);

impl Default for DenseCap {
    fn default() -> Self {
        DenseCap(DEFAULT_DENSE_CAP)
    }
}

impl DenseCap {
    pub fn check(self, n: u32) -> Result<()> {
        if n > self.0 {
            Err(Error::DenseCap { n, cap: self.0 })
        } else {
            Ok(())
        }
    }

    pub fn allows(self, n: u32) -> bool {
        n <= self.0
    }
}

fn check_dimension(n: u32) -> Result<()> {
    if n == 0 || n > MAX_DIMENSION {
        Err(Error::Dimension(n))
    } else {
        Ok(())
    }
}

fn low_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubePoint {
    mask: u64,
    n: u32,
}

impl CubePoint {
    pub fn new(n: u32, mask: u64) -> Result<Self> {
        check_dimension(n)?;
        if mask & !low_mask(n) != 0 {
            return Err(Error::MaskOutOfRange { mask, n });
        }
        Ok(CubePoint { mask, n })
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    pub fn dim(self) -> u32 {
        self.n
    }

    pub fn weight(self) -> u32 {
        self.mask.count_ones()
    }

    /// `⟨α, x⟩ mod 2`.
    pub fn inner(self, other: CubePoint) -> bool {
        (self.mask & other.mask).count_ones() & 1 == 1
    }
}

impl Add for CubePoint {
    type Output = CubePoint;

    fn add(self, rhs: CubePoint) -> CubePoint {
        assert_eq!(self.n, rhs.n, "adding points of different dimensions");
        CubePoint {
            mask: self.mask ^ rhs.mask,
            n: self.n,
        }
    }
}

/// A duplicate-free subset of the cube, kept in increasing mask order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportSet {
    n: u32,
    elems: Vec<u64>,
}

impl SupportSet {
    /// Builds a set from masks in any order; duplicates and out-of-range masks
    /// are rejected.
    pub fn new(n: u32, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        check_dimension(n)?;
        let bound = low_mask(n);
        let mut elems: Vec<u64> = masks.into_iter().collect();
        if let Some(&m) = elems.iter().find(|&&m| m & !bound != 0) {
            return Err(Error::MaskOutOfRange { mask: m, n });
        }
        elems.sort_unstable();
        if let Some(w) = elems.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Duplicate(w[0]));
        }
        Ok(SupportSet { n, elems })
    }

    /// Builds a set from masks, silently merging duplicates.
    pub fn collect(n: u32, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        check_dimension(n)?;
        let bound = low_mask(n);
        let mut elems: Vec<u64> = masks.into_iter().collect();
        if let Some(&m) = elems.iter().find(|&&m| m & !bound != 0) {
            return Err(Error::MaskOutOfRange { mask: m, n });
        }
        elems.sort_unstable();
        elems.dedup();
        Ok(SupportSet { n, elems })
    }

    pub(crate) fn from_sorted(n: u32, elems: Vec<u64>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        SupportSet { n, elems }
    }

    pub fn empty(n: u32) -> Result<Self> {
        SupportSet::new(n, std::iter::empty())
    }

    pub fn singleton(n: u32, mask: u64) -> Result<Self> {
        SupportSet::new(n, [mask])
    }

    /// The whole cube.
    pub fn full(n: u32) -> Result<Self> {
        check_dimension(n)?;
        if n > 32 {
            return Err(Error::SizeLimit {
                what: "full cube",
                size: usize::MAX,
                limit: 1 << 32,
            });
        }
        Ok(SupportSet::from_sorted(n, (0..1u64 << n).collect()))
    }

    /// Hamming sphere `S(n,k)`: all points of weight exactly `k`.
    pub fn sphere(n: u32, k: u32) -> Result<Self> {
        check_dimension(n)?;
        if k > n {
            return Err(Error::domain(format!("sphere radius {k} exceeds n = {n}")));
        }
        let mut elems = Vec::new();
        if k == 0 {
            elems.push(0);
        } else {
            // Gosper's hack walks the weight-k masks in increasing order.
            let mut v = low_mask(k);
            let top = 1u128 << n;
            while (v as u128) < top {
                elems.push(v);
                let c = v & v.wrapping_neg();
                let r = v.wrapping_add(c);
                if r == 0 {
                    break;
                }
                v = (((r ^ v) >> 2) / c) | r;
            }
        }
        Ok(SupportSet::from_sorted(n, elems))
    }

    /// Hamming ball `B(n,k)`: all points of weight at most `k`.
    pub fn ball(n: u32, k: u32) -> Result<Self> {
        if k > n {
            return Err(Error::domain(format!("ball radius {k} exceeds n = {n}")));
        }
        let mut elems = Vec::new();
        for j in 0..=k {
            elems.extend(SupportSet::sphere(n, j)?.elems);
        }
        elems.sort_unstable();
        Ok(SupportSet::from_sorted(n, elems))
    }

    /// Linear span of `basis` over GF(2).
    pub fn span(n: u32, basis: &[u64]) -> Result<Self> {
        let mut elems = vec![0u64];
        for &b in basis {
            if b & !low_mask(n) != 0 {
                return Err(Error::MaskOutOfRange { mask: b, n });
            }
            if elems.contains(&b) {
                continue;
            }
            let shifted: Vec<u64> = elems.iter().map(|&e| e ^ b).collect();
            elems.extend(shifted);
        }
        SupportSet::collect(n, elems)
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elems
    }

    pub fn points(&self) -> impl Iterator<Item = CubePoint> + '_ {
        self.elems.iter().map(move |&mask| CubePoint { mask, n: self.n })
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.elems.binary_search(&mask).is_ok()
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.elems.binary_search(&mask).ok()
    }

    pub fn is_subset_of(&self, other: &SupportSet) -> bool {
        self.n == other.n && self.elems.iter().all(|&m| other.contains(m))
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.elems.iter().map(|m| m.count_ones()).max()
    }

    /// `Some(k)` when the set is exactly the sphere `S(n,k)`.
    pub fn sphere_radius(&self) -> Option<u32> {
        let k = self.elems.first()?.count_ones();
        if self.elems.iter().any(|m| m.count_ones() != k) {
            return None;
        }
        let size = crate::sphere::binomial(self.n, k);
        (num_bigint::BigUint::from(self.elems.len()) == size).then_some(k)
    }

    /// Sub-collection picked by element indices (which must be increasing).
    pub fn select(&self, indices: impl IntoIterator<Item = usize>) -> SupportSet {
        let elems = indices.into_iter().map(|i| self.elems[i]).collect();
        SupportSet::from_sorted(self.n, elems)
    }
}

/// A real function on the cube, stored densely in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeFunction {
    n: u32,
    values: Vec<f64>,
}

/// Walsh–Fourier coefficients of a function, stored densely in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    n: u32,
    coeffs: Vec<f64>,
}

fn check_dense_len(n: u32, len: usize) -> Result<()> {
    if n >= usize::BITS {
        return Err(Error::Dimension(n));
    }
    let expected = 1usize << n;
    if len != expected {
        return Err(Error::Length {
            n,
            expected,
            got: len,
        });
    }
    Ok(())
}

impl CubeFunction {
    pub fn new(n: u32, values: Vec<f64>) -> Result<Self> {
        check_dense_len(n, values.len())?;
        Ok(CubeFunction { n, values })
    }

    pub fn zeros(n: u32) -> Result<Self> {
        DenseCap(usize::BITS - 2).check(n)?;
        Ok(CubeFunction {
            n,
            values: vec![0.0; 1 << n],
        })
    }

    pub fn constant(n: u32, c: f64) -> Result<Self> {
        let mut f = CubeFunction::zeros(n)?;
        f.values.fill(c);
        Ok(f)
    }

    /// The character `W_α(x) = (-1)^{⟨α,x⟩}`.
    pub fn character(n: u32, alpha: u64) -> Result<Self> {
        let mut f = CubeFunction::zeros(n)?;
        for (x, v) in f.values.iter_mut().enumerate() {
            *v = if (x as u64 & alpha).count_ones() & 1 == 0 {
                1.0
            } else {
                -1.0
            };
        }
        Ok(f)
    }

    pub fn from_fn(n: u32, mut f: impl FnMut(u64) -> f64) -> Result<Self> {
        let mut g = CubeFunction::zeros(n)?;
        for (x, v) in g.values.iter_mut().enumerate() {
            *v = f(x as u64);
        }
        Ok(g)
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn value(&self, x: u64) -> f64 {
        self.values[x as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `E f^p` under the uniform measure.
    pub fn mean_power(&self, p: i32) -> f64 {
        self.values.iter().map(|v| v.powi(p)).sum::<f64>() / self.values.len() as f64
    }
}

impl Spectrum {
    pub fn new(n: u32, coeffs: Vec<f64>) -> Result<Self> {
        check_dense_len(n, coeffs.len())?;
        Ok(Spectrum { n, coeffs })
    }

    pub fn zeros(n: u32) -> Result<Self> {
        DenseCap(usize::BITS - 2).check(n)?;
        Ok(Spectrum {
            n,
            coeffs: vec![0.0; 1 << n],
        })
    }

    /// Coefficient 1 on every element of `set`.
    pub fn indicator(set: &SupportSet) -> Result<Self> {
        let mut s = Spectrum::zeros(set.dim())?;
        for &a in set.elements() {
            s.coeffs[a as usize] = 1.0;
        }
        Ok(s)
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: u64) -> f64 {
        self.coeffs[alpha as usize]
    }

    /// Indices whose coefficient exceeds `tol` in absolute value.
    pub fn support(&self, tol: f64) -> SupportSet {
        support_of_slice(self.n, &self.coeffs, tol)
    }

    /// Coefficients restricted to `set`, as a vector aligned with it.
    pub fn restrict(&self, set: &SupportSet) -> Result<SpectrumVector> {
        if set.dim() != self.n {
            return Err(Error::DimensionMismatch(set.dim(), self.n));
        }
        let coords = set
            .elements()
            .iter()
            .map(|&a| self.coeffs[a as usize])
            .collect();
        SpectrumVector::new(set.clone(), coords)
    }
}

/// Real coefficients indexed by the elements of a support set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumVector {
    support: SupportSet,
    coords: Vec<f64>,
}

impl SpectrumVector {
    pub fn new(support: SupportSet, coords: Vec<f64>) -> Result<Self> {
        if support.len() != coords.len() {
            return Err(Error::SupportMismatch);
        }
        Ok(SpectrumVector { support, coords })
    }

    /// `1_A / √|A|`.
    pub fn uniform(support: &SupportSet) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptySet);
        }
        let c = 1.0 / (support.len() as f64).sqrt();
        SpectrumVector::new(support.clone(), vec![c; support.len()])
    }

    /// `1_B / √|B|` as a vector on `support`, for `B ⊆ support`.
    pub fn indicator(support: &SupportSet, subset: &SupportSet) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::EmptySet);
        }
        if !subset.is_subset_of(support) {
            return Err(Error::SupportMismatch);
        }
        let c = 1.0 / (subset.len() as f64).sqrt();
        let coords = support
            .elements()
            .iter()
            .map(|&a| if subset.contains(a) { c } else { 0.0 })
            .collect();
        SpectrumVector::new(support.clone(), coords)
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.coords.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroFunction);
        }
        Ok(self.scaled(1.0 / norm))
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        SpectrumVector {
            support: self.support.clone(),
            coords: self.coords.iter().map(|c| c * lambda).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        SpectrumVector {
            support: self.support.clone(),
            coords: self.coords.iter().map(|c| c.abs()).collect(),
        }
    }

    /// Dense spectrum with these coordinates on the support and zero elsewhere.
    pub fn embed(&self, cap: DenseCap) -> Result<Spectrum> {
        cap.check(self.support.dim())?;
        let mut s = Spectrum::zeros(self.support.dim())?;
        for (&a, &c) in self.support.elements().iter().zip(&self.coords) {
            s.coeffs[a as usize] = c;
        }
        Ok(s)
    }
}

const PAR_THRESHOLD: usize = 1 << 14;

/// In-place unnormalized Walsh–Hadamard butterfly on a power-of-two slice.
pub(crate) fn walsh_hadamard<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Send + Sync,
{
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        let span = 2 * h;
        let butterfly = |block: &mut [T]| {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        };
        if len < PAR_THRESHOLD {
            data.chunks_mut(span).for_each(butterfly);
        } else if len / span >= 64 {
            data.par_chunks_mut(span).for_each(butterfly);
        } else {
            for block in data.chunks_mut(span) {
                let (lo, hi) = block.split_at_mut(h);
                lo.par_iter_mut()
                    .zip(hi.par_iter_mut())
                    .with_min_len(4096)
                    .for_each(|(a, b)| {
                        let (x, y) = (*a, *b);
                        *a = x + y;
                        *b = x - y;
                    });
            }
        }
        h = span;
    }
}

pub fn analyze(f: &CubeFunction) -> Result<Spectrum> {
    analyze_capped(f, DenseCap::default())
}

/// `f̂(α) = 2^{-n} Σ_x f(x) (-1)^{⟨α,x⟩}` via the fast transform.
pub fn analyze_capped(f: &CubeFunction, cap: DenseCap) -> Result<Spectrum> {
    cap.check(f.n)?;
    let mut coeffs = f.values.clone();
    walsh_hadamard(&mut coeffs);
    let scale = 1.0 / coeffs.len() as f64;
    coeffs.iter_mut().for_each(|c| *c *= scale);
    Ok(Spectrum { n: f.n, coeffs })
}

pub fn synthesize(s: &Spectrum) -> Result<CubeFunction> {
    synthesize_capped(s, DenseCap::default())
}

/// `f(x) = Σ_α s(α) (-1)^{⟨α,x⟩}`.
pub fn synthesize_capped(s: &Spectrum, cap: DenseCap) -> Result<CubeFunction> {
    cap.check(s.n)?;
    let mut values = s.coeffs.clone();
    walsh_hadamard(&mut values);
    Ok(CubeFunction { n: s.n, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub m2: f64,
    pub m4: f64,
    pub ratio: f64,
}

/// Second and fourth moments and their ratio `E f⁴ / (E f²)²`.
pub fn moments(f: &CubeFunction) -> Result<Moments> {
    let (s2, s4) = f.values.iter().fold((0.0, 0.0), |(s2, s4), &v| {
        let v2 = v * v;
        (s2 + v2, s4 + v2 * v2)
    });
    let size = f.values.len() as f64;
    let (m2, m4) = (s2 / size, s4 / size);
    if m2 == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(Moments {
        m2,
        m4,
        ratio: m4 / (m2 * m2),
    })
}

/// Points where `|f(x)| > tol`.
pub fn support_of(f: &CubeFunction, tol: f64) -> SupportSet {
    support_of_slice(f.n, &f.values, tol)
}

fn support_of_slice(n: u32, values: &[f64], tol: f64) -> SupportSet {
    let elems = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > tol)
        .map(|(x, _)| x as u64)
        .collect();
    SupportSet::from_sorted(n, elems)
}

/// Quadratic-time transforms straight from the defining sums, for oracles.
pub mod reference {
    use super::*;

    fn sign(a: usize, x: usize) -> f64 {
        if (a & x).count_ones() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn analyze(f: &CubeFunction) -> Spectrum {
        let len = f.values.len();
        let coeffs = (0..len)
            .map(|a| (0..len).map(|x| f.values[x] * sign(a, x)).sum::<f64>() / len as f64)
            .collect();
        Spectrum { n: f.n, coeffs }
    }

    pub fn synthesize(s: &Spectrum) -> CubeFunction {
        let len = s.coeffs.len();
        let values = (0..len)
            .map(|x| (0..len).map(|a| s.coeffs[a] * sign(a, x)).sum())
            .collect();
        CubeFunction { n: s.n, values }
    }
}
