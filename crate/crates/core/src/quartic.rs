//! The quartic form `F(y) = Σ_x (Σ_{a⊕b=x} y_a y_b)²` on coefficient vectors
//! supported on `A`, its gradient, sphere-constrained ascent giving certified
//! lower bounds on `μ(A)`, the assembled upper bounds, the pair matrix whose
//! quadratic form is `F`, and the last-coordinate split of a function.
//!
//! `F(y) = E f⁴` for `f = Σ y_a W_a`, and `f ↦ E f⁴` is convex, so `F` is a
//! convex function of `y`. The normalized gradient step therefore never
//! decreases `F` on the unit sphere; the adaptive shift and the backtracking
//! fallback only guard against rounding.
//!
//! The pair matrix uses `T(a₁,a₂) = Σ_{b₁⊕b₂ = a₁⊕a₂} y_{b₁} y_{b₂}`, which gives
//! `yᵀTy = F(y)`. Weighting each pair by `y(a₁)y(a₂)` instead would make `T` a
//! rescaled rank-one pattern for which that identity fails, so that variant is
//! not offered.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::additive::{self, dyadic_level_sets, PAIR_LIMIT};
use crate::asymptotics;
use crate::cube::{moments, walsh_hadamard, CubeFunction, DenseCap, SpectrumVector, SupportSet};
use crate::sphere;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Seeded random starts, in addition to the uniform and level-set starts.
    pub starts: usize,
    pub max_iters: usize,
    /// Relative improvement over `window` iterations below which a run stops.
    pub tol: f64,
    pub seed: u64,
    pub window: usize,
    pub dense_cap: DenseCap,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            starts: 32,
            max_iters: 10_000,
            tol: 1e-12,
            seed: 0,
            window: 50,
            dense_cap: DenseCap::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuEstimate {
    pub value: f64,
    /// Unit vector on `A` attaining `value`.
    pub certificate: SpectrumVector,
    pub starts_used: usize,
    /// Ascent iterations summed over all starts.
    pub iterations: usize,
    /// Whether the winning start met the stopping rule before the iteration cap.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSet {
    pub cardinality_bound: u64,
    pub multiplicity_bound: u64,
    pub sphere_psi_bound: Option<f64>,
    #[serde(with = "crate::rational::big_uint_opt")]
    pub sphere_sum_bound: Option<BigUint>,
    pub best: f64,
}

/// `f ↔ (g₀ + g₁, g₀ − g₁)` along the last coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPair {
    pub g0: CubeFunction,
    pub g1: CubeFunction,
    pub r0: Option<f64>,
    pub r1: Option<f64>,
}

impl SplitPair {
    /// Rebuilds `f` from `(g₀, g₁)`.
    pub fn reconstruct(&self) -> CubeFunction {
        let n = self.g0.dim() + 1;
        let lo = self.g0.values().iter().zip(self.g1.values()).map(|(a, b)| a + b);
        let hi = self.g0.values().iter().zip(self.g1.values()).map(|(a, b)| a - b);
        CubeFunction::new(n, lo.chain(hi).collect()).expect("halves have matching length")
    }
}

enum Engine {
    /// `ids[i·m + j]` is the class of `a_i ⊕ a_j` in `A + A`.
    Pairs { ids: Vec<u32>, classes: usize },
    /// Dense synthesis over `2^n` points.
    Dense { n: u32 },
}

/// `F` and `∇F` for a fixed support, with the evaluation path chosen by size.
pub struct QuarticForm {
    support: SupportSet,
    engine: Engine,
}

impl QuarticForm {
    /// Uses pair enumeration when `|A|²` is small against `n·2^n` (or the dense
    /// path is over the cap), otherwise the dense transform.
    pub fn new(support: &SupportSet, cap: DenseCap) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptySet);
        }
        let m = support.len();
        let pairs = m.saturating_mul(m);
        let n = support.dim();
        let dense_cost = if n < 40 { (n as usize) << n } else { usize::MAX };
        let use_pairs = pairs <= PAIR_LIMIT && (pairs <= dense_cost || !cap.allows(n));
        let engine = if use_pairs {
            let elems = support.elements();
            let mut classes: HashMap<u64, u32> = HashMap::with_capacity(pairs.min(1 << 16));
            let mut ids = Vec::with_capacity(pairs);
            for &x in elems {
                for &y in elems {
                    let next = classes.len() as u32;
                    ids.push(*classes.entry(x ^ y).or_insert(next));
                }
            }
            Engine::Pairs {
                ids,
                classes: classes.len(),
            }
        } else {
            cap.check(n)?;
            Engine::Dense { n }
        };
        Ok(QuarticForm {
            support: support.clone(),
            engine,
        })
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    fn pair_sums(&self, ids: &[u32], classes: usize, y: &[f64]) -> Vec<f64> {
        let m = y.len();
        let mut g = vec![0.0; classes];
        for i in 0..m {
            let row = &ids[i * m..(i + 1) * m];
            for j in 0..m {
                g[row[j] as usize] += y[i] * y[j];
            }
        }
        g
    }

    fn synth(&self, n: u32, y: &[f64]) -> Vec<f64> {
        let mut f = vec![0.0; 1usize << n];
        for (&a, &c) in self.support.elements().iter().zip(y) {
            f[a as usize] = c;
        }
        walsh_hadamard(&mut f);
        f
    }

    pub fn value(&self, y: &[f64]) -> f64 {
        debug_assert_eq!(y.len(), self.support.len());
        match &self.engine {
            Engine::Pairs { ids, classes } => {
                self.pair_sums(ids, *classes, y).iter().map(|g| g * g).sum()
            }
            Engine::Dense { n } => {
                let f = self.synth(*n, y);
                f.iter().map(|v| (v * v) * (v * v)).sum::<f64>() / f.len() as f64
            }
        }
    }

    pub fn value_and_gradient(&self, y: &[f64]) -> (f64, Vec<f64>) {
        let m = y.len();
        match &self.engine {
            Engine::Pairs { ids, classes } => {
                let g = self.pair_sums(ids, *classes, y);
                let value = g.iter().map(|g| g * g).sum();
                let grad = (0..m)
                    .map(|i| {
                        let row = &ids[i * m..(i + 1) * m];
                        4.0 * row.iter().zip(y).map(|(&id, yj)| g[id as usize] * yj).sum::<f64>()
                    })
                    .collect();
                (value, grad)
            }
            Engine::Dense { n } => {
                let mut f = self.synth(*n, y);
                let size = f.len() as f64;
                let value = f.iter().map(|v| (v * v) * (v * v)).sum::<f64>() / size;
                f.iter_mut().for_each(|v| *v = *v * *v * *v);
                walsh_hadamard(&mut f);
                let grad = self
                    .support
                    .elements()
                    .iter()
                    .map(|&a| 4.0 * f[a as usize] / size)
                    .collect();
                (value, grad)
            }
        }
    }
}

/// `F(y)` for a coefficient vector (not necessarily normalized).
pub fn big_f(y: &SpectrumVector) -> Result<f64> {
    Ok(QuarticForm::new(y.support(), DenseCap::default())?.value(y.coords()))
}

/// `∇F(y)` with respect to the coordinates of `y`.
pub fn big_f_grad(y: &SpectrumVector) -> Result<SpectrumVector> {
    let (_, grad) = QuarticForm::new(y.support(), DenseCap::default())?.value_and_gradient(y.coords());
    SpectrumVector::new(y.support().clone(), grad)
}

fn normalize(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|c| *c /= norm);
    true
}

struct Run {
    y: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

/// Ascent from a unit vector: shifted power map, then projected gradient with
/// backtracking if the power map fails to improve.
fn ascend(form: &QuarticForm, y0: Vec<f64>, cfg: &OptimizerConfig) -> Run {
    let mut y = y0;
    let (mut value, mut grad) = form.value_and_gradient(&y);
    let mut history = vec![value];
    let window = cfg.window.max(1);
    let mut converged = false;
    let mut iterations = 0;
    let mut alpha = 0.0;

    while iterations < cfg.max_iters {
        iterations += 1;
        let mut step: Option<(Vec<f64>, f64, Vec<f64>)> = None;
        for _ in 0..4 {
            let mut cand: Vec<f64> = grad.iter().zip(&y).map(|(g, yi)| g + alpha * yi).collect();
            if normalize(&mut cand) {
                let (v, g) = form.value_and_gradient(&cand);
                if v >= value {
                    step = Some((cand, v, g));
                    break;
                }
            }
            // ⟨∇F(y), y⟩ = 4F(y) sets the natural scale of the shift
            alpha = if alpha == 0.0 { 4.0 * value } else { 4.0 * alpha };
        }
        if step.is_none() {
            let radial: f64 = grad.iter().zip(&y).map(|(g, yi)| g * yi).sum();
            let tangent: Vec<f64> = grad.iter().zip(&y).map(|(g, yi)| g - radial * yi).collect();
            let mut eta = 1.0 / (4.0 * value.max(f64::MIN_POSITIVE));
            for _ in 0..40 {
                let mut cand: Vec<f64> = y.iter().zip(&tangent).map(|(yi, t)| yi + eta * t).collect();
                if normalize(&mut cand) {
                    let (v, g) = form.value_and_gradient(&cand);
                    if v > value {
                        step = Some((cand, v, g));
                        break;
                    }
                }
                eta *= 0.5;
            }
        }
        let Some((cand, v, g)) = step else {
            // no ascent direction found at working precision: a stationary point
            converged = true;
            break;
        };
        (y, value, grad) = (cand, v, g);
        alpha *= 0.5;
        history.push(value);
        if history.len() > window {
            let past = history[history.len() - 1 - window];
            if value - past <= cfg.tol * value.abs() {
                converged = true;
                break;
            }
        }
    }
    Run {
        value: form.value(&y),
        y,
        iterations,
        converged,
    }
}

fn random_start(m: usize, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let mut v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        if normalize(&mut v) {
            return v;
        }
    }
}

/// Runs every start (in parallel) and keeps the largest value, breaking ties
/// by start order.
fn run_all(form: &QuarticForm, starts: Vec<Vec<f64>>, cfg: &OptimizerConfig) -> (Run, usize, usize) {
    let runs: Vec<Run> = starts.into_par_iter().map(|y| ascend(form, y, cfg)).collect();
    let count = runs.len();
    let iterations = runs.iter().map(|r| r.iterations).sum();
    let best = runs
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .expect("at least one start");
    (best, count, iterations)
}

/// Certified lower bound on `μ(A)`: the best `F` over multi-start ascent.
pub fn mu_lower(a: &SupportSet, cfg: &OptimizerConfig) -> Result<MuEstimate> {
    mu_lower_with_starts(a, cfg, &[])
}

/// As [`mu_lower`], with extra starting vectors (normalized before use) run
/// after the uniform and random starts.
pub fn mu_lower_with_starts(
    a: &SupportSet,
    cfg: &OptimizerConfig,
    extra: &[SpectrumVector],
) -> Result<MuEstimate> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.len() == 1 {
        return Ok(MuEstimate {
            value: 1.0,
            certificate: SpectrumVector::new(a.clone(), vec![1.0])?,
            starts_used: 1,
            iterations: 0,
            converged: true,
        });
    }
    let form = QuarticForm::new(a, cfg.dense_cap)?;
    let m = a.len();

    let mut starts = vec![SpectrumVector::uniform(a)?.coords().to_vec()];
    starts.extend((0..cfg.starts as u64).map(|i| random_start(m, cfg.seed, i)));
    for y in extra {
        if y.support() != a {
            return Err(Error::SupportMismatch);
        }
        starts.push(y.normalized()?.coords().to_vec());
    }
    let (first, mut used, mut iterations) = run_all(&form, starts, cfg);

    let cert = SpectrumVector::new(a.clone(), first.y.clone())?;
    let levels = dyadic_level_sets(&cert.abs().normalized()?)?;
    let level_starts: Vec<Vec<f64>> = levels
        .levels
        .iter()
        .map(|(_, b)| SpectrumVector::indicator(a, b).map(|v| v.coords().to_vec()))
        .collect::<Result<_>>()?;
    let mut best = first;
    if !level_starts.is_empty() {
        let (second, count, iters) = run_all(&form, level_starts, cfg);
        used += count;
        iterations += iters;
        if second.value > best.value {
            best = second;
        }
    }
    Ok(MuEstimate {
        value: best.value,
        certificate: SpectrumVector::new(a.clone(), best.y)?,
        starts_used: used,
        iterations,
        converged: best.converged,
    })
}

/// `|A|`, `m(A)`, and for spheres the partition sum bound and (when `k ≤ n/2`)
/// the entropy bound `2^{nψ(k/n)}`; `best` is their minimum.
pub fn mu_upper(a: &SupportSet) -> Result<BoundSet> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let cardinality_bound = a.len() as u64;
    let multiplicity_bound = additive::m_bound(a)?;
    let mut best = (cardinality_bound as f64).min(multiplicity_bound as f64);
    let mut sphere_sum_bound = None;
    let mut sphere_psi_bound = None;
    if let Some(k) = a.sphere_radius() {
        let sum = sphere::sphere_sum_bound(k);
        best = best.min(crate::rational::to_f64(&crate::rational::from_uint(&sum)));
        sphere_sum_bound = Some(sum);
        let n = a.dim();
        if 2 * k <= n {
            let psi = asymptotics::psi_value(k as f64 / n as f64)?;
            let bound = (n as f64 * psi).exp2();
            best = best.min(bound);
            sphere_psi_bound = Some(bound);
        }
    }
    Ok(BoundSet {
        cardinality_bound,
        multiplicity_bound,
        sphere_psi_bound,
        sphere_sum_bound,
        best,
    })
}

/// Dense symmetric matrix indexed by positions in a support set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `vᵀ T v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        (0..self.dim)
            .map(|i| {
                let row = &self.entries[i * self.dim..(i + 1) * self.dim];
                v[i] * row.iter().zip(v).map(|(t, vj)| t * vj).sum::<f64>()
            })
            .sum()
    }
}

/// `T(a₁,a₂) = Σ_{b₁⊕b₂ = a₁⊕a₂} y_{b₁} y_{b₂}` over `A × A`.
pub fn quartic_matrix(a: &SupportSet, y: &SpectrumVector) -> Result<SymmetricMatrix> {
    if y.support() != a {
        return Err(Error::SupportMismatch);
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let m = a.len();
    if m.saturating_mul(m) > PAIR_LIMIT {
        return Err(Error::SizeLimit {
            what: "pair matrix (|A|^2)",
            size: m.saturating_mul(m),
            limit: PAIR_LIMIT,
        });
    }
    let elems = a.elements();
    let mut g: HashMap<u64, f64> = HashMap::new();
    for (&x, &yx) in elems.iter().zip(y.coords()) {
        for (&z, &yz) in elems.iter().zip(y.coords()) {
            *g.entry(x ^ z).or_default() += yx * yz;
        }
    }
    let entries = elems
        .iter()
        .flat_map(|&x| elems.iter().map(move |&z| x ^ z))
        .map(|s| g[&s])
        .collect();
    Ok(SymmetricMatrix { dim: m, entries })
}

/// Splits `f` along the last coordinate (mask bit `n − 1`).
pub fn decompose_last(f: &CubeFunction) -> Result<SplitPair> {
    let n = f.dim();
    if n == 0 {
        return Err(Error::Dimension(0));
    }
    let (lo, hi) = f.values().split_at(1usize << (n - 1));
    let g0 = CubeFunction::new(n - 1, lo.iter().zip(hi).map(|(a, b)| (a + b) / 2.0).collect())?;
    let g1 = CubeFunction::new(n - 1, lo.iter().zip(hi).map(|(a, b)| (a - b) / 2.0).collect())?;
    let ratio = |g: &CubeFunction| moments(g).ok().map(|m| m.ratio);
    Ok(SplitPair {
        r0: ratio(&g0),
        r1: ratio(&g1),
        g0,
        g1,
    })
}

struct CurveMoments {
    a2: f64,
    a4: f64,
    b2: f64,
    b4: f64,
}

fn curve_moments(g0: &CubeFunction, g1: &CubeFunction) -> Result<CurveMoments> {
    if g0.dim() != g1.dim() {
        return Err(Error::DimensionMismatch(g0.dim(), g1.dim()));
    }
    let m = CurveMoments {
        a2: g0.mean_power(2),
        a4: g0.mean_power(4),
        b2: g1.mean_power(2),
        b4: g1.mean_power(4),
    };
    if m.a2 == 0.0 && m.b2 == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(m)
}

/// `G(x) = (E g₁⁴x² + 6√(E g₀⁴ E g₁⁴)x + E g₀⁴) / (E g₁²x + E g₀²)²`.
pub fn g_curve(g0: &CubeFunction, g1: &CubeFunction, x: f64) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::domain("G is defined for finite x ≥ 0"));
    }
    let m = curve_moments(g0, g1)?;
    let num = m.b4 * x * x + 6.0 * (m.a4 * m.b4).sqrt() * x + m.a4;
    let den = m.b2 * x + m.a2;
    Ok(num / (den * den))
}

/// Where the supremum of `G` sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveMaximizer {
    /// At `x = 0`, value `R₀`.
    Origin,
    /// As `x → ∞`, value `R₁`.
    Infinity,
    Interior(f64),
}

/// `sup_{x ≥ 0} G(x)` and where it is attained.
pub fn g_curve_argmax(g0: &CubeFunction, g1: &CubeFunction) -> Result<(f64, CurveMaximizer)> {
    let m = curve_moments(g0, g1)?;
    if m.b2 == 0.0 {
        return Ok((m.a4 / (m.a2 * m.a2), CurveMaximizer::Origin));
    }
    if m.a2 == 0.0 {
        return Ok((m.b4 / (m.b2 * m.b2), CurveMaximizer::Infinity));
    }
    let (r0, r1) = (m.a4 / (m.a2 * m.a2), m.b4 / (m.b2 * m.b2));
    if r0 >= 9.0 * r1 {
        return Ok((r0, CurveMaximizer::Origin));
    }
    if r1 >= 9.0 * r0 {
        return Ok((r1, CurveMaximizer::Infinity));
    }
    let x = (m.a4.sqrt() / m.b4.sqrt()) * (3.0 * r1.sqrt() - r0.sqrt()) / (3.0 * r0.sqrt() - r1.sqrt());
    Ok((asymptotics::f_combine(r0, r1)?, CurveMaximizer::Interior(x)))
}

pub fn g_curve_max(g0: &CubeFunction, g1: &CubeFunction) -> Result<f64> {
    Ok(g_curve_argmax(g0, g1)?.0)
}
