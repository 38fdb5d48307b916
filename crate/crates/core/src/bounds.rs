//! Verification reports: each instantiates a proven inequality on concrete
//! data and records the comparison, so a failing check pinpoints either an
//! implementation defect or a broken bracket.
//!
//! Where an inequality involves the unknowable `μ(A)` it is replaced by the
//! side that keeps the check sound: `mu_upper` in preconditions and lower
//! bounds, `mu_lower` where `μ` is bounded from above.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::additive::{self, hereditary_energy};
use crate::asymptotics::psi_value;
use crate::cube::{analyze_capped, moments, support_of, CubeFunction, DenseCap, SpectrumVector, SupportSet};
use crate::quartic::{decompose_last, g_curve_max, mu_lower, mu_lower_with_starts, mu_upper, OptimizerConfig};
use crate::rational::{self, to_f64};
use crate::report::{BoundReport, Relation};
use crate::sphere::{self, argmax_st, cmp_t1, frac, r_exact, ratio_st, s_t_exact, t1, SphereParams};
use crate::{Error, Result};

/// Relative slack for float comparisons between independently rounded sides.
pub const FLOAT_SLACK: f64 = 1e-9;
/// Gap above which a sphere is flagged as a possible counterexample.
pub const CANDIDATE_GAP: f64 = 1e-4;
/// Gap at or below which a sphere is consistent with the energy conjecture.
pub const CONSISTENT_GAP: f64 = 1e-6;
/// Largest set handled by [`prop11_report`].
pub const PROP11_MAX_SIZE: usize = 64;

fn support_tol(values: &[f64]) -> f64 {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    peak * 1e-12
}

/// `(supp f, supp f̂)` with a tolerance relative to the largest magnitude.
fn supports(f: &CubeFunction, cap: DenseCap) -> Result<(SupportSet, SupportSet)> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let spec = analyze_capped(f, cap)?;
    let spec_fn = CubeFunction::new(f.dim(), spec.coeffs().to_vec())?;
    Ok((
        support_of(f, support_tol(f.values())),
        support_of(&spec_fn, support_tol(spec.coeffs())),
    ))
}

fn log2_floor_one(size: usize) -> f64 {
    (size as f64).log2().max(1.0)
}

fn two_pow(n: u32) -> BigInt {
    BigInt::from(1) << n
}

/// Support-size lower bounds: the uncertainty principle, its `μ` and `m(A)`
/// strengthenings, and (report-only) the hereditary-energy variant.
pub fn uncertainty_report(f: &CubeFunction, exact_limit: usize) -> Result<BoundReport> {
    let (supp, a) = supports(f, DenseCap::default())?;
    let n = f.dim();
    let mut rep = BoundReport::new(format!(
        "f on n={n} with |supp f| = {}, |supp f^| = {}",
        supp.len(),
        a.len()
    ));
    rep.integer(
        "|supp f| * |supp f^| >= 2^n",
        BigInt::from(supp.len()) * BigInt::from(a.len()),
        Relation::Ge,
        two_pow(n),
        "uncertainty-principle",
    );
    let upper = mu_upper(&a)?;
    rep.float(
        "|supp f| * mu_upper(A) >= 2^n",
        supp.len() as f64 * upper.best,
        Relation::Ge,
        (n as f64).exp2(),
        FLOAT_SLACK,
        "support-vs-mu",
    );
    rep.integer(
        "|supp f| * m(A) >= 2^n",
        BigInt::from(supp.len()) * BigInt::from(upper.multiplicity_bound),
        Relation::Ge,
        two_pow(n),
        "support-vs-multiplicity",
    );
    let hered = hereditary_energy(&a, exact_limit)?;
    let hered_ratio = to_f64(&hered.ratio);
    rep.soft(
        "|supp f| * log2^3|A| * max_B E(B)/|B|^2 >= 2^n",
        supp.len() as f64 * log2_floor_one(a.len()).powi(3) * hered_ratio,
        Relation::Ge,
        (n as f64).exp2(),
        FLOAT_SLACK,
        "support-vs-hereditary-energy",
    );
    rep.note(format!(
        "hereditary energy ratio {} ({})",
        rational::to_string(&hered.ratio),
        if hered.exact { "exhaustive" } else { "heuristic" }
    ));
    Ok(rep)
}

/// Mass of `f²` on `B` against `2^{−δn/2}·E f²`, when `mu_upper(A)·|B| ≤ 2^{(1−δ)n}`.
pub fn restricted_mass_check(f: &CubeFunction, b: &SupportSet, delta: f64) -> Result<BoundReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta = {delta} outside (0, 1)")));
    }
    if b.dim() != f.dim() {
        return Err(Error::DimensionMismatch(b.dim(), f.dim()));
    }
    let (_, a) = supports(f, DenseCap::default())?;
    let n = f.dim() as f64;
    let subject = format!("restricted mass, n={}, |B|={}, delta={delta}", f.dim(), b.len());
    let upper = mu_upper(&a)?.best;
    let budget = ((1.0 - delta) * n).exp2();
    if upper * b.len() as f64 > budget {
        return Ok(BoundReport::not_applicable(
            subject,
            format!("mu_upper(A)*|B| = {} exceeds 2^((1-delta)n) = {budget}", upper * b.len() as f64),
        ));
    }
    let mut rep = BoundReport::new(subject);
    let size = (1u64 << f.dim()) as f64;
    let mass = b.elements().iter().map(|&x| f.value(x).powi(2)).sum::<f64>() / size;
    let energy = f.mean_power(2);
    rep.float(
        "2^-n sum_B f^2 <= 2^(-delta n/2) E f^2",
        mass,
        Relation::Le,
        (-delta * n / 2.0).exp2() * energy,
        FLOAT_SLACK,
        "restricted-mass",
    );
    rep.note(format!("mass fraction {}", mass / energy));
    Ok(rep)
}

/// `ψ(k/n)`, with radii beyond `n/2` treated as `n/2` (where `ψ = 1`, which
/// only weakens the bound).
fn psi_radius(n: u32, k: u32) -> Result<f64> {
    psi_value((k as f64 / n as f64).min(0.5))
}

/// Sumset size against the energy bound (exact) and the entropy bound for
/// subsets of balls.
pub fn sumset_bound_report(b: &SupportSet, c: &SupportSet, k1: u32, k2: u32) -> Result<BoundReport> {
    if b.dim() != c.dim() {
        return Err(Error::DimensionMismatch(b.dim(), c.dim()));
    }
    for (set, k) in [(b, k1), (c, k2)] {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        if set.max_weight().unwrap_or(0) > k {
            return Err(Error::domain(format!("a set is not inside the ball of radius {k}")));
        }
    }
    let n = b.dim();
    let mut rep = BoundReport::new(format!("|B+C| for |B|={}, |C|={}, n={n}", b.len(), c.len()));
    let sum = additive::sumset(b, c)?.len();
    let (eb, ec) = (additive::additive_energy(b)?, additive::additive_energy(c)?);
    // |B+C| ≥ |B|²|C|²/√(E(B)E(C)), squared
    let lhs = BigInt::from(sum).pow(2) * BigInt::from(eb) * BigInt::from(ec);
    let rhs = BigInt::from(b.len()).pow(4) * BigInt::from(c.len()).pow(4);
    rep.integer(
        "|B+C|^2 E(B) E(C) >= |B|^4 |C|^4",
        lhs,
        Relation::Ge,
        rhs,
        "sumset-energy",
    );
    let exponent = n as f64 / 2.0 * (psi_radius(n, k1)? + psi_radius(n, k2)?);
    rep.float(
        "|B+C| >= |B||C| / 2^((n/2)(psi(k1/n)+psi(k2/n)))",
        sum as f64,
        Relation::Ge,
        b.len() as f64 * c.len() as f64 / exponent.exp2(),
        FLOAT_SLACK,
        "sumset-entropy",
    );
    Ok(rep)
}

/// The entropy bound on the ball `B(n,k)`: it dominates the estimator, sits
/// below `min(9^k, 2^n)` (strictly inside), and `r(n,i)` grows with `i`.
pub fn ball_bound_report(n: u32, k: u32, cfg: &OptimizerConfig) -> Result<BoundReport> {
    let p = SphereParams::half(n, k)?;
    let mut rep = BoundReport::new(format!("B({n},{k})"));
    let bound = (n as f64 * psi_value(p.density())?).exp2();
    let ball = SupportSet::ball(n, k)?;
    let est = mu_lower(&ball, cfg)?;
    rep.float(
        "mu_lower(B(n,k)) <= 2^(n psi(k/n))",
        est.value,
        Relation::Le,
        bound,
        FLOAT_SLACK,
        "ball-entropy-bound",
    );
    let cap = 9f64.powi(k as i32).min((n as f64).exp2());
    if k == 0 || 2 * k == n {
        rep.float("2^(n psi(k/n)) = min(9^k, 2^n)", bound, Relation::Eq, cap, 1e-12, "ball-bound-endpoints");
    } else {
        rep.float("2^(n psi(k/n)) < min(9^k, 2^n)", bound, Relation::Lt, cap, 0.0, "ball-bound-strict");
    }
    let rk = r_exact(p);
    for i in 0..k {
        rep.exact(
            &format!("r(n,{i}) <= r(n,{k})"),
            r_exact(SphereParams::new(n, i)?),
            Relation::Le,
            rk.clone(),
            "sphere-energy-monotone-in-k",
        );
    }
    rep.note(format!("mu_lower = {}, entropy bound = {bound}", est.value));
    Ok(rep)
}

/// `F_m(x₁,…,x_m) = Π f(x_i)` on `n·m` coordinates; block `i` holds `x_i`.
pub fn tensor_power(f: &CubeFunction, m: u32, cap: DenseCap) -> Result<CubeFunction> {
    let n = f.dim();
    cap.check(n * m)?;
    let low = (1u64 << n) - 1;
    CubeFunction::from_fn(n * m, |x| (0..m).map(|i| f.value((x >> (i * n)) & low)).product())
}

/// Moments of the tensor power exponentiate, and a sphere spectrum goes to
/// a sphere spectrum.
pub fn tensorization_check(f: &CubeFunction, m: u32, cap: DenseCap) -> Result<BoundReport> {
    if !(2..=3).contains(&m) {
        return Err(Error::domain(format!("tensor power m = {m} outside {{2, 3}}")));
    }
    let big = tensor_power(f, m, cap)?;
    let n = f.dim();
    let mut rep = BoundReport::new(format!("tensor power m={m} of f on n={n}"));
    for p in [2, 4] {
        rep.float(
            &format!("E F_m^{p} = (E f^{p})^m"),
            big.mean_power(p),
            Relation::Eq,
            f.mean_power(p).powi(m as i32),
            FLOAT_SLACK,
            "tensor-moments",
        );
    }
    let (_, a) = supports(f, cap)?;
    match a.sphere_radius().or_else(|| {
        let w = a.elements().first()?.count_ones();
        a.elements().iter().all(|x| x.count_ones() == w).then_some(w)
    }) {
        Some(k) if !a.is_empty() => {
            let (_, big_a) = supports(&big, cap)?;
            rep.predicate(
                &format!("supp(F_m^) inside S({}, {})", n * m, k * m),
                big_a.elements().iter().all(|x| x.count_ones() == k * m),
                "tensor-sphere-support",
            );
        }
        _ => rep.note("spectrum is not on a single sphere; support claim not applicable"),
    }
    Ok(rep)
}

/// `μ` bracket for a small set: the estimator stays below `|A|` and `m(A)`
/// and above the hereditary energy ratio.
pub fn prop11_report(a: &SupportSet, cfg: &OptimizerConfig, exact_limit: usize) -> Result<BoundReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.len() > PROP11_MAX_SIZE {
        return Err(Error::SizeLimit {
            what: "set size for the bracket report",
            size: a.len(),
            limit: PROP11_MAX_SIZE,
        });
    }
    cfg.dense_cap.check(a.dim())?;
    let hered = hereditary_energy(a, exact_limit)?;
    // the hereditary maximizer is a feasible start, so the estimator dominates it
    let start = SpectrumVector::indicator(a, &hered.best)?;
    let est = mu_lower_with_starts(a, cfg, &[start])?;
    let upper = mu_upper(a)?;
    let mut rep = BoundReport::new(format!("A with |A|={}, n={}", a.len(), a.dim()));
    rep.float("mu_lower <= |A|", est.value, Relation::Le, a.len() as f64, FLOAT_SLACK, "mu-below-size");
    rep.float(
        "mu_lower <= m(A)",
        est.value,
        Relation::Le,
        upper.multiplicity_bound as f64,
        FLOAT_SLACK,
        "mu-below-multiplicity",
    );
    rep.float(
        "max_B E(B)/|B|^2 <= mu_lower",
        to_f64(&hered.ratio),
        Relation::Le,
        est.value,
        FLOAT_SLACK,
        "hereditary-energy-below-mu",
    );
    rep.soft(
        "mu_upper / hereditary ratio <= log2^3 |A|",
        upper.best / to_f64(&hered.ratio),
        Relation::Le,
        log2_floor_one(a.len()).powi(3),
        FLOAT_SLACK,
        "mu-above-hereditary-polylog",
    );
    rep.note(format!(
        "mu in [{}, {}]; hereditary ratio {} ({})",
        est.value,
        upper.best,
        rational::to_string(&hered.ratio),
        if hered.exact { "exhaustive" } else { "heuristic" }
    ));
    Ok(rep)
}

/// One cell of the energy-conjecture scan on spheres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureRecord {
    pub n: u32,
    pub k: u32,
    pub mu_est: f64,
    #[serde(with = "crate::rational")]
    pub energy_ratio: BigRational,
    pub gap: f64,
    pub upper_gap: f64,
    pub status: ConjectureStatus,
    /// Kept for counterexample candidates so the claim can be re-checked.
    pub certificate: Option<SpectrumVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjectureStatus {
    ConjectureConsistent,
    Indeterminate,
    CounterexampleCandidate,
}

/// Estimator against the energy ratio on every `S(n,k)`, `1 ≤ k ≤ n/2`,
/// `n ≤ n_max`, in `(n,k)` order.
pub fn conjecture_scan(n_max: u32, cfg: &OptimizerConfig) -> Result<Vec<ConjectureRecord>> {
    cfg.dense_cap.check(n_max)?;
    let cells: Vec<(u32, u32)> = (1..=n_max).flat_map(|n| (1..=n / 2).map(move |k| (n, k))).collect();
    cells
        .into_par_iter()
        .map(|(n, k)| {
            let a = SupportSet::sphere(n, k)?;
            let est = mu_lower(&a, cfg)?;
            let upper = mu_upper(&a)?;
            if est.value > upper.best * (1.0 + 1e-12) + 1e-8 {
                return Err(Error::CrossCheck(format!(
                    "S({n},{k}): mu_lower {} above mu_upper {}",
                    est.value, upper.best
                )));
            }
            let ratio = additive::energy_ratio(&a)?;
            let ratio_f = to_f64(&ratio);
            let gap = est.value - ratio_f;
            let status = if gap <= CONSISTENT_GAP {
                ConjectureStatus::ConjectureConsistent
            } else if gap > CANDIDATE_GAP {
                ConjectureStatus::CounterexampleCandidate
            } else {
                ConjectureStatus::Indeterminate
            };
            Ok(ConjectureRecord {
                n,
                k,
                mu_est: est.value,
                energy_ratio: ratio,
                gap,
                upper_gap: upper.best - ratio_f,
                status,
                certificate: (status == ConjectureStatus::CounterexampleCandidate).then_some(est.certificate),
            })
        })
        .collect()
}

/// The energy step of the near-equality argument: with `B` the hereditary
/// maximizer, `E(A) ≥ E(B)`; the implied density is reported only.
pub fn energy_lowerbound_step_check(f: &CubeFunction, c_val: f64, exact_limit: usize) -> Result<BoundReport> {
    let (supp, a) = supports(f, DenseCap::default())?;
    let n = f.dim();
    let subject = format!("energy step, n={n}, C={c_val}");
    let product = supp.len() as f64 * a.len() as f64;
    if product > c_val * (n as f64).exp2() {
        return Ok(BoundReport::not_applicable(
            subject,
            format!("|supp f||supp f^| = {product} exceeds C 2^n"),
        ));
    }
    let mut rep = BoundReport::new(subject);
    let hered = hereditary_energy(&a, exact_limit)?;
    let e_a = additive::additive_energy(&a)?;
    rep.integer(
        "E(A,A) >= E(B,B)",
        BigInt::from(e_a),
        Relation::Ge,
        BigInt::from(hered.energy),
        "energy-step",
    );
    let size = a.len() as f64;
    rep.soft(
        "E(A,A)/|A|^3 >= 1/(C^3 log2^9 |A|)",
        e_a as f64 / size.powi(3),
        Relation::Ge,
        1.0 / (c_val.powi(3) * log2_floor_one(a.len()).powi(9)),
        FLOAT_SLACK,
        "energy-step-density",
    );
    rep.note("the structural constants of the stability statement are existence-level and not checked");
    Ok(rep)
}

/// `C = 8`: the tested-range constant for `2^{nψ(k/n)} ≤ C·k^{3/2}·r(n,k)`.
pub const THEOREM_CONSTANT: f64 = 8.0;

/// `r(n,k) ≤ 2^{nψ(k/n)}` and, for `k ≥ 8`, `2^{nψ(k/n)} ≤ 8·k^{3/2}·r(n,k)`.
pub fn sphere_entropy_report(p: SphereParams) -> Result<BoundReport> {
    if !p.in_half_range() {
        return Err(Error::domain("entropy bound needs k <= n/2"));
    }
    let (n, k) = (p.n(), p.k());
    let mut rep = BoundReport::new(format!("S({n},{k}) entropy bound"));
    let bound = (n as f64 * psi_value(p.density())?).exp2();
    let r = to_f64(&r_exact(p));
    rep.float("r(n,k) <= 2^(n psi(k/n))", r, Relation::Le, bound, FLOAT_SLACK, "sphere-entropy-upper");
    if k >= 8 {
        rep.float(
            "2^(n psi(k/n)) <= 8 k^1.5 r(n,k)",
            bound,
            Relation::Le,
            THEOREM_CONSTANT * (k as f64).powf(1.5) * r,
            0.0,
            "sphere-entropy-tight",
        );
    }
    Ok(rep)
}

/// `(n,k)` with `n/log₂n ≤ k ≤ n/2 − n/log₂n`, the range of the ratio lemma.
pub fn in_lemma_range(p: SphereParams) -> bool {
    let n = p.n() as f64;
    let k = p.k() as f64;
    let lg = n.log2();
    p.n() >= 4 && k >= n / lg && k <= n / 2.0 - n / lg
}

/// The ratio lemma on one `(n,k)`, exactly: `k/3 ≤ t₁ ≤ 11k/12`; below
/// `t₁ − 3` the ratio `s_{t+1}/s_t` is at least `1 + Δ/t` for every admissible
/// `Δ`, and above `t₁ + log₂n` at most `1 − Δ/t`; the argmax lies within
/// `√(n log₂n)` of `t₁`.
///
/// For fixed `t` the strongest admissible `Δ` is `|t − t₁|`, where both claims
/// reduce to comparing `t·s_{t+1}/s_t` with `t₁`, done exactly.
pub fn ratio_lemma_report(p: SphereParams) -> Result<BoundReport> {
    if !p.in_half_range() || p.k() == 0 {
        return Err(Error::domain("ratio lemma needs 1 <= k <= n/2"));
    }
    let (n, k) = (p.n(), p.k());
    let mut rep = BoundReport::new(format!("S({n},{k}) ratio lemma"));
    rep.predicate(
        "k/3 <= t1",
        cmp_t1(p, &frac(k, 3)) != Ordering::Greater,
        "t1-lower",
    );
    rep.predicate(
        "t1 <= 11k/12",
        cmp_t1(p, &frac(11 * k, 12)) != Ordering::Less,
        "t1-upper",
    );
    let t1f = t1(p);
    let lg = (n as f64).log2();
    let (mut below, mut below_bad, mut above, mut above_bad) = (0, Vec::new(), 0, Vec::new());
    for t in 1..k {
        let t_big = BigRational::from_integer(BigInt::from(t));
        let scaled = || -> Result<BigRational> { Ok(ratio_st(p, t)? * &t_big) };
        // t ≤ t₁ − 3, decided exactly
        if cmp_t1(p, &(&t_big + BigRational::from_integer(BigInt::from(3)))) != Ordering::Greater {
            below += 1;
            if cmp_t1(p, &scaled()?) == Ordering::Less {
                below_bad.push(t);
            }
        }
        if t as f64 - t1f >= lg {
            above += 1;
            if cmp_t1(p, &scaled()?) == Ordering::Greater {
                above_bad.push(t);
            }
        }
    }
    rep.predicate(
        &format!("s_(t+1)/s_t >= 1 + Delta/t on {below} values of t below t1 - 3"),
        below_bad.is_empty(),
        "ratio-growth-below-t1",
    );
    rep.predicate(
        &format!("s_(t+1)/s_t <= 1 - Delta/t on {above} values of t above t1 + log2 n"),
        above_bad.is_empty(),
        "ratio-decay-above-t1",
    );
    if !below_bad.is_empty() || !above_bad.is_empty() {
        rep.note(format!("violations below: {below_bad:?}, above: {above_bad:?}"));
    }
    let arg = argmax_st(p)?;
    rep.float(
        "|argmax_t s_t - t1| <= sqrt(n log2 n)",
        (arg as f64 - t1f).abs(),
        Relation::Le,
        (n as f64 * lg).sqrt(),
        0.0,
        "argmax-near-t1",
    );
    Ok(rep)
}

/// Central window carrying almost all of `r(n,k)`, the ratio `r(n−1,k−1)/r(n,k)`
/// against its predicted value (report-only), and `1/9 < r(n−1,k)/r(n−1,k−1) < 9`.
pub fn sphere_window_report(p: SphereParams) -> Result<BoundReport> {
    if !p.in_half_range() || p.k() < 2 {
        return Err(Error::domain("window report needs 2 <= k <= n/2"));
    }
    let (n, k) = (p.n(), p.k());
    let mut rep = BoundReport::new(format!("S({n},{k}) central window"));
    let r = r_exact(p);
    let window = sphere::central_window(n);
    let mass = sphere::central_mass(p, window);
    let inflate = BigRational::new(BigInt::from(n + 1), BigInt::from(n));
    rep.exact(
        &format!("(1 + 1/n) * sum over |t - t1| <= {window} >= r(n,k)"),
        mass * inflate,
        Relation::Ge,
        r.clone(),
        "central-window-mass",
    );

    let t1f = t1(p);
    let (nf, kf) = (n as f64, k as f64);
    let r_down = r_exact(SphereParams::new(n - 1, k - 1)?);
    let r_side = r_exact(SphereParams::new(n - 1, k)?);
    let observed = to_f64(&(&r_down / &r));
    let predicted = nf / (nf - 2.0 * t1f) * ((kf - t1f) / kf).powi(2);
    let dev = (observed / predicted - 1.0).abs();
    let scale = nf.log2().powf(1.5) / nf.sqrt();
    rep.soft(
        "|r(n-1,k-1)/r(n,k) / predicted - 1| <= log2^1.5 n / sqrt n",
        dev,
        Relation::Le,
        scale,
        0.0,
        "sphere-step-ratio",
    );
    rep.note(format!("empirical constant c = {}", dev / scale));
    let q = &r_side / &r_down;
    let nine = BigRational::from_integer(BigInt::from(9));
    rep.exact("r(n-1,k)/r(n-1,k-1) < 9", q.clone(), Relation::Lt, nine.clone(), "split-ratio-domain");
    rep.exact(
        "r(n-1,k)/r(n-1,k-1) > 1/9",
        q,
        Relation::Gt,
        frac(1, 9),
        "split-ratio-domain",
    );
    Ok(rep)
}

/// `s_t(n,k−1) ≤ s_t(n,k)` for every `t < k`, exactly.
pub fn sphere_monotonicity_report(p: SphereParams) -> Result<BoundReport> {
    if !p.in_half_range() || p.k() == 0 {
        return Err(Error::domain("monotonicity needs 1 <= k <= n/2"));
    }
    let (n, k) = (p.n(), p.k());
    let prev = SphereParams::new(n, k - 1)?;
    let mut rep = BoundReport::new(format!("S({n},{k}) monotone in k"));
    let bad: Vec<u32> = (0..k)
        .filter(|&t| s_t_exact(prev, t).ok() > s_t_exact(p, t).ok())
        .collect();
    rep.predicate(&format!("s_t(n,k-1) <= s_t(n,k) for t < {k}"), bad.is_empty(), "s_t-monotone-in-k");
    rep.exact("r(n,k-1) <= r(n,k)", r_exact(prev), Relation::Le, r_exact(p), "sphere-energy-monotone-in-k");
    Ok(rep)
}

/// `r(n,k) = E(S(n,k))/|S(n,k)|²` computed from pair counts.
pub fn sphere_energy_report(p: SphereParams) -> Result<BoundReport> {
    let mut rep = BoundReport::new(format!("S({},{}) energy closed form", p.n(), p.k()));
    let a = SupportSet::sphere(p.n(), p.k())?;
    rep.exact(
        "E(S)/|S|^2 = r(n,k)",
        additive::energy_ratio(&a)?,
        Relation::Eq,
        r_exact(p),
        "sphere-energy-closed-form",
    );
    let lower = sphere::small_k_lower(p);
    rep.note(format!(
        "r(n,k) / small-radius estimate = {}",
        to_f64(&r_exact(p)) / lower
    ));
    Ok(rep)
}

/// The coordinate split of a certificate on `S(n,k)` cannot lose ratio:
/// `sup G ≥ E f⁴/(E f²)²`.
pub fn split_consistency_report(n: u32, k: u32, cfg: &OptimizerConfig) -> Result<BoundReport> {
    let a = SupportSet::sphere(n, k)?;
    let est = mu_lower(&a, cfg)?;
    let f = crate::cube::synthesize_capped(&est.certificate.embed(cfg.dense_cap)?, cfg.dense_cap)?;
    let ratio = moments(&f)?.ratio;
    let split = decompose_last(&f)?;
    let mut rep = BoundReport::new(format!("S({n},{k}) split"));
    rep.float(
        "sup_x G(x) >= E f^4/(E f^2)^2",
        g_curve_max(&split.g0, &split.g1)?,
        Relation::Ge,
        ratio,
        1e-8,
        "split-dominates-ratio",
    );
    Ok(rep)
}
