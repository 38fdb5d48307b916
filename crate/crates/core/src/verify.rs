//! Seeded verification suites that run every module's invariants as
//! [`BoundReport`]s. The corpus is a pure function of the seed, so two runs
//! with the same configuration produce identical reports.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::additive::{self, dyadic_level_sets, hereditary_energy, pair_multiplicities};
use crate::asymptotics;
use crate::bounds;
use crate::cube::{self, analyze, moments, synthesize, CubeFunction, DenseCap, Spectrum, SpectrumVector, SupportSet};
use crate::quartic::{self, big_f, big_f_grad, decompose_last, mu_lower, mu_upper, OptimizerConfig};
use crate::rational::from_u128;
use crate::report::{BoundReport, Relation};
use crate::sphere::{self, SphereParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Core,
    Additive,
    Sphere,
    Asymptotics,
    Bounds,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["all", "core", "additive", "sphere", "asymptotics", "bounds"];

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Core, Suite::Additive, Suite::Sphere, Suite::Asymptotics, Suite::Bounds],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        f.write_str(Suite::NAMES[i])
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "core" => Suite::Core,
            "additive" => Suite::Additive,
            "sphere" => Suite::Sphere,
            "asymptotics" => Suite::Asymptotics,
            "bounds" => Suite::Bounds,
            other => return Err(Error::domain(format!("unknown suite {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub optimizer: OptimizerConfig,
    pub exact_limit: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            optimizer: OptimizerConfig::default(),
            exact_limit: additive::DEFAULT_EXACT_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub reports: Vec<BoundReport>,
    pub hard_checks: usize,
    pub hard_failures: usize,
    pub passed: bool,
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut reports = Vec::new();
    for part in suite.parts() {
        // each part draws from its own stream so suites are independent
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(part as u64);
        let ctx = Ctx { rng, cfg: *cfg };
        reports.extend(match part {
            Suite::Core => core_suite(ctx)?,
            Suite::Additive => additive_suite(ctx)?,
            Suite::Sphere => sphere_suite(ctx)?,
            Suite::Asymptotics => asymptotics_suite(ctx)?,
            Suite::Bounds => bounds_suite(ctx)?,
            Suite::All => unreachable!("expanded above"),
        });
    }
    let hard_checks = reports.iter().map(|r| r.hard_count()).sum();
    let hard_failures = reports.iter().map(|r| r.failures().count()).sum();
    Ok(SuiteReport {
        suite,
        passed: reports.iter().all(|r| r.overall),
        reports,
        hard_checks,
        hard_failures,
    })
}

struct Ctx {
    rng: ChaCha8Rng,
    cfg: VerifyConfig,
}

impl Ctx {
    fn set(&mut self, n: u32, size: usize) -> SupportSet {
        let size = size.clamp(1, 1 << n);
        let picks = sample(&mut self.rng, 1 << n, size);
        SupportSet::new(n, picks.into_iter().map(|x| x as u64)).expect("sampled masks are in range")
    }

    fn vector(&mut self, a: &SupportSet) -> SpectrumVector {
        let c = (0..a.len()).map(|_| self.rng.gen_range(-1.0..1.0)).collect();
        SpectrumVector::new(a.clone(), c).expect("lengths match")
    }

    fn function(&mut self, n: u32) -> CubeFunction {
        CubeFunction::from_fn(n, |_| self.rng.gen_range(-1.0..1.0)).expect("small dimension")
    }

    fn quick(&self) -> OptimizerConfig {
        OptimizerConfig {
            starts: self.cfg.optimizer.starts.min(8),
            ..self.cfg.optimizer
        }
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn core_suite(mut cx: Ctx) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();

    let mut rep = BoundReport::new("Walsh-Hadamard transform");
    for n in 1..=12 {
        let f = cx.function(n);
        let s = analyze(&f)?;
        let back = synthesize(&s)?;
        let round = f.values().iter().zip(back.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        rep.float(&format!("round trip error, n={n}"), round, Relation::Le, 1e-12, 0.0, "transform-inverse");
        let parseval = s.coeffs().iter().map(|c| c * c).sum::<f64>();
        rep.float(&format!("Parseval, n={n}"), f.mean_power(2), Relation::Approx, parseval, 1e-12, "parseval");
        if n <= 8 {
            let slow = cube::reference::analyze(&f);
            let diff = s.coeffs().iter().zip(slow.coeffs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            rep.float(&format!("fast vs reference, n={n}"), diff, Relation::Le, 1e-12, 0.0, "transform-definition");
        }
    }
    out.push(rep);

    let mut rep = BoundReport::new("quartic form");
    let (mut worst_path, mut worst_grad, mut worst_hom, mut worst_matrix) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..20 {
        let n = cx.rng.gen_range(2..=10);
        let size = cx.rng.gen_range(1..=40);
        let a = cx.set(n, size);
        let y = cx.vector(&a).normalized()?;
        let f = synthesize(&y.embed(DenseCap::default())?)?;
        worst_path = worst_path.max(rel_err(big_f(&y)?, moments(&f)?.m4));
        for lambda in [0.5, 2.0, -1.0] {
            worst_hom = worst_hom.max(rel_err(big_f(&y.scaled(lambda))?, lambda.powi(4) * big_f(&y)?));
        }
        if i < 8 {
            let g = big_f_grad(&y)?;
            for j in 0..a.len() {
                let h = 1e-5;
                let (mut up, mut down) = (y.clone(), y.clone());
                up.coords_mut()[j] += h;
                down.coords_mut()[j] -= h;
                let fd = (big_f(&up)? - big_f(&down)?) / (2.0 * h);
                worst_grad = worst_grad.max((g.coords()[j] - fd).abs() / g.coords()[j].abs().max(1.0));
            }
            let t = quartic::quartic_matrix(&a, &y)?;
            worst_matrix = worst_matrix.max(rel_err(t.quadratic_form(y.coords()), big_f(&y)?));
        }
    }
    rep.float("pair path vs E f^4 (max rel. error)", worst_path, Relation::Le, 1e-10, 0.0, "quartic-two-paths");
    rep.float("gradient vs central differences", worst_grad, Relation::Le, 1e-6, 0.0, "quartic-gradient");
    rep.float("4-homogeneity", worst_hom, Relation::Le, 1e-12, 0.0, "quartic-homogeneous");
    rep.float("y^T T y = F(y)", worst_matrix, Relation::Le, 1e-10, 0.0, "quartic-matrix");
    out.push(rep);

    let mut rep = BoundReport::new("coordinate split");
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let n = cx.rng.gen_range(1..=8);
        let f = cx.function(n);
        let s = decompose_last(&f)?;
        let cross = CubeFunction::from_fn(n - 1, |x| s.g0.value(x) * s.g1.value(x))?.mean_power(2);
        let m4 = s.g0.mean_power(4) + 6.0 * cross + s.g1.mean_power(4);
        worst = worst.max(rel_err(f.mean_power(4), m4));
        worst = worst.max(rel_err(f.mean_power(2), s.g0.mean_power(2) + s.g1.mean_power(2)));
        rep.predicate(&format!("reconstruction, n={n}"), s.reconstruct() == f, "split-inverse");
    }
    rep.float("split moment identities", worst, Relation::Le, 1e-10, 0.0, "split-moments");
    out.push(rep);

    let opt = cx.quick();
    let mut rep = BoundReport::new("mu bracket");
    for _ in 0..12 {
        let n = cx.rng.gen_range(1..=8);
        let size = cx.rng.gen_range(1..=24);
        let a = cx.set(n, size);
        let low = mu_lower(&a, &opt)?;
        let up = mu_upper(&a)?;
        rep.float(&format!("mu_lower <= mu_upper, n={n}, |A|={}", a.len()), low.value, Relation::Le, up.best + 1e-8, 0.0, "mu-bracket");
        rep.float("certificate reproduces value", big_f(&low.certificate)?, Relation::Approx, low.value, 1e-10, "mu-certificate");
    }
    for n in 2..=8 {
        let low = mu_lower(&SupportSet::sphere(n, 1)?, &opt)?;
        rep.float(&format!("mu_lower(S({n},1)) >= 3 - 2/n"), low.value, Relation::Ge, 3.0 - 2.0 / n as f64 - 1e-9, 0.0, "sphere-radius-one");
        rep.float(&format!("mu_lower(S({n},1)) <= 3"), low.value, Relation::Le, 3.0, 0.0, "sphere-radius-one");
    }
    for basis in [&[0b1u64][..], &[0b011, 0b110], &[0b0001, 0b0110, 0b1000]] {
        let v = SupportSet::span(4, basis)?;
        let size = v.len() as f64;
        rep.float(&format!("mu_lower(subspace of size {size}) = |V|"), mu_lower(&v, &opt)?.value, Relation::Ge, size - 1e-6, 0.0, "subspace-extremal");
        rep.float(&format!("mu_upper(subspace of size {size}) = |V|"), mu_upper(&v)?.best, Relation::Eq, size, 0.0, "subspace-extremal");
    }
    out.push(rep);
    Ok(out)
}

fn additive_suite(mut cx: Ctx) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    let mut rep = BoundReport::new("pair multiplicities");
    for _ in 0..20 {
        let n = cx.rng.gen_range(1..=12);
        let size = cx.rng.gen_range(1..=40);
        let a = cx.set(n, size);
        let t = pair_multiplicities(&a)?;
        let m = a.len() as u64;
        rep.integer(&format!("|M_0| = |A| = {m}"), t.get(0), Relation::Eq, m, "multiplicity-zero");
        rep.integer("sum |M_x| = |A|^2", t.total(), Relation::Eq, (m * m) as u128, "multiplicity-total");
        rep.integer("m(A) <= |A| + 1", additive::m_bound(&a)?, Relation::Le, m + 1, "multiplicity-bound");
        let h = hereditary_energy(&a, cx.cfg.exact_limit.min(12))?;
        rep.exact("hereditary ratio >= E(A)/|A|^2", h.ratio, Relation::Ge, additive::energy_ratio(&a)?, "hereditary-dominates");
    }
    out.push(rep);

    let mut rep = BoundReport::new("subspaces");
    for d in 1..=4usize {
        let n = 6;
        let basis: Vec<u64> = (0..d).map(|i| 0b11 << (i as u64 % 5)).collect();
        let v = SupportSet::span(n, &basis)?;
        let size = v.len() as u64;
        rep.integer(&format!("m(V) = |V| + 1, |V| = {size}"), additive::m_bound(&v)?, Relation::Eq, size + 1, "subspace-multiplicity");
        rep.exact("E(V)/|V|^2 = |V|", additive::energy_ratio(&v)?, Relation::Eq, from_u128(size as u128), "subspace-energy");
    }
    out.push(rep);

    let mut rep = BoundReport::new("sumset energy chain");
    for _ in 0..20 {
        let n = cx.rng.gen_range(1..=10);
        let (sb, sc) = (cx.rng.gen_range(1..=30), cx.rng.gen_range(1..=30));
        let (b, c) = (cx.set(n, sb), cx.set(n, sc));
        let sum = additive::sumset(&b, &c)?.len();
        let lhs = BigInt::from(sum).pow(2)
            * BigInt::from(additive::additive_energy(&b)?)
            * BigInt::from(additive::additive_energy(&c)?);
        let rhs = BigInt::from(b.len()).pow(4) * BigInt::from(c.len()).pow(4);
        rep.integer(&format!("|B+C|^2 E(B) E(C) >= |B|^4|C|^4, n={n}"), lhs, Relation::Ge, rhs, "sumset-energy");
    }
    out.push(rep);

    let mut rep = BoundReport::new("dyadic level sets");
    for _ in 0..10 {
        let n = cx.rng.gen_range(2..=8);
        let size = cx.rng.gen_range(2..=32);
        let a = cx.set(n, size);
        let y = cx.vector(&a).abs().normalized()?;
        let d = dyadic_level_sets(&y)?;
        let mut ok = true;
        for (&x, &c) in a.elements().iter().zip(y.coords()) {
            let hits: Vec<u32> = d.levels.iter().filter(|(_, s)| s.contains(x)).map(|(i, _)| *i).collect();
            ok &= match hits.as_slice() {
                [i] => (-(*i as f64)).exp2() < c && c <= (1.0 - *i as f64).exp2() && !d.tail.contains(x),
                [] => d.tail.contains(x) || c == 0.0,
                _ => false,
            };
        }
        rep.predicate(&format!("partition by 2^-i < y <= 2^-(i-1), |A|={}", a.len()), ok, "dyadic-partition");
        rep.integer("N = ceil(log2|A|/2) + 2", d.cutoff, Relation::Eq, additive::level_cutoff(a.len()), "dyadic-cutoff");
    }
    out.push(rep);
    Ok(out)
}

fn sphere_suite(mut cx: Ctx) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for n in 1..=10 {
        for k in 1..=n / 2 {
            out.push(bounds::sphere_energy_report(SphereParams::half(n, k)?)?);
        }
    }

    let mut rep = BoundReport::new("sphere closed forms");
    for n in 2..=24 {
        for k in 1..=n {
            let p = SphereParams::new(n, k)?;
            for t in 0..k {
                if let (Ok(ratio), Ok(a), Ok(b)) = (sphere::ratio_st(p, t), sphere::s_t_exact(p, t), sphere::s_t_exact(p, t + 1)) {
                    if !a.is_zero() {
                        rep.exact(&format!("s_(t+1)/s_t closed form, ({n},{k},{t})"), ratio, Relation::Eq, b / a, "ratio-closed-form");
                    }
                }
            }
            let t = sphere::t1(p);
            let q = 4.0 * t * t - 3.0 * n as f64 * t + 2.0 * (k * (n - k)) as f64;
            rep.float(&format!("q(t1) = 0 at ({n},{k})"), q.abs() / (n * n) as f64, Relation::Le, 1e-12, 0.0, "t1-root");
        }
    }
    for (k, v) in [(0u32, 1u32), (1, 3), (2, 15)] {
        rep.integer(&format!("sum bound at k={k}"), BigInt::from(sphere::sphere_sum_bound(k)), Relation::Eq, v, "sphere-sum-bound");
    }
    out.push(rep);

    // a seeded sample of the lemma range
    let mut cells = Vec::new();
    for n in (64..=128).step_by(16) {
        let lg = (n as f64).log2();
        let lo = (n as f64 / lg).ceil() as u32;
        let hi = (n as f64 / 2.0 - n as f64 / lg).floor() as u32;
        for _ in 0..3 {
            cells.push((n, cx.rng.gen_range(lo..=hi)));
        }
    }
    for (n, k) in cells {
        let p = SphereParams::half(n, k)?;
        out.push(bounds::ratio_lemma_report(p)?);
        out.push(bounds::sphere_window_report(p)?);
    }
    for (n, k) in [(10, 5), (20, 7), (40, 20), (100, 31)] {
        out.push(bounds::sphere_monotonicity_report(SphereParams::half(n, k)?)?);
    }

    let mut rep = BoundReport::new("small-radius estimate");
    for (n, k) in [(100u32, 3u32), (400, 5)] {
        let p = SphereParams::new(n, k)?;
        let r = crate::rational::to_f64(&sphere::r_exact(p));
        rep.soft(&format!("r({n},{k}) / estimate in [1, 1.2]"), r / sphere::small_k_lower(p), Relation::Le, 1.2, 0.0, "small-radius-estimate");
        rep.soft(&format!("estimate <= r({n},{k})"), sphere::small_k_lower(p), Relation::Le, r, 0.0, "small-radius-estimate");
    }
    out.push(rep);
    Ok(out)
}

fn asymptotics_suite(mut cx: Ctx) -> Result<Vec<BoundReport>> {
    let mut out = vec![
        asymptotics::psi_concavity_check(1e-3)?,
        asymptotics::psi_linear_bound_check(1e-3)?,
        asymptotics::r_identity_check(1e-3)?,
        asymptotics::phi_derivative_report(0.01)?,
    ];
    let mut rep = BoundReport::new("psi endpoints and entropy");
    rep.float("psi(0) = 0", asymptotics::psi_value(0.0)?, Relation::Eq, 0.0, 1e-12, "psi-endpoints");
    rep.float("psi(1/2) = 1", asymptotics::psi_value(0.5)?, Relation::Eq, 1.0, 1e-12, "psi-endpoints");
    rep.float("H(1/4) = 2 - (3/4) log2 3", asymptotics::entropy(0.25)?, Relation::Eq, 2.0 - 0.75 * 3f64.log2(), 1e-14, "entropy");
    rep.float("r(1/4) = (3 - sqrt 3)/8", asymptotics::r_of_x(0.25)?, Relation::Eq, (3.0 - 3f64.sqrt()) / 8.0, 1e-14, "r-of-x");
    out.push(rep);

    let mut anchors = BoundReport::new("phi anchor and scaled root, sampled cells");
    for _ in 0..200 {
        let n = cx.rng.gen_range(2..=512);
        let k = cx.rng.gen_range(0..=n / 2);
        anchors.absorb(asymptotics::phi_anchor_check(SphereParams::half(n, k)?)?);
    }
    out.push(anchors);

    for n in [64u32, 100, 128] {
        let lg = (n as f64).log2();
        let lo = (n as f64 / lg).ceil() as u32;
        let hi = (n as f64 / 2.0 - n as f64 / lg).floor() as u32;
        let mut rep = BoundReport::new(format!("combine identity, n={n}"));
        for k in lo..=hi {
            rep.absorb(asymptotics::combine_identity_check(SphereParams::half(n, k)?)?);
        }
        out.push(rep);
    }
    Ok(out)
}

fn sparse_function(cx: &mut Ctx, n: u32, size: usize) -> Result<CubeFunction> {
    let a = cx.set(n, size);
    let y = cx.vector(&a);
    synthesize(&y.embed(DenseCap::default())?)
}

fn bounds_suite(mut cx: Ctx) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    let limit = cx.cfg.exact_limit;
    let opt = cx.quick();

    let v = SupportSet::span(4, &[0b0011, 0b0101])?;
    out.push(bounds::uncertainty_report(&synthesize(&Spectrum::indicator(&v)?)?, limit)?);
    for _ in 0..4 {
        let size = cx.rng.gen_range(1..=24);
        out.push(bounds::uncertainty_report(&sparse_function(&mut cx, 10, size)?, limit)?);
    }

    let v8 = SupportSet::span(8, &[0b1, 0b10])?;
    out.push(bounds::restricted_mass_check(
        &synthesize(&Spectrum::indicator(&v8)?)?,
        &SupportSet::singleton(8, 0)?,
        0.75,
    )?);
    for _ in 0..6 {
        let size = cx.rng.gen_range(1..=6);
        let f = sparse_function(&mut cx, 10, size)?;
        let delta = cx.rng.gen_range(0.05..0.6);
        let a = cube::support_of(&CubeFunction::new(10, analyze(&f)?.coeffs().to_vec())?, 1e-12);
        let room = ((1.0 - delta) * 10.0f64).exp2() / mu_upper(&a)?.best;
        let b_size = cx.rng.gen_range(0..=(room.floor() as usize).min(1024));
        let b = if b_size == 0 { SupportSet::empty(10)? } else { cx.set(10, b_size) };
        out.push(bounds::restricted_mass_check(&f, &b, delta)?);
    }

    for _ in 0..6 {
        let n = cx.rng.gen_range(2..=10);
        let (k1, k2) = (cx.rng.gen_range(0..=n / 2), cx.rng.gen_range(0..=n / 2));
        let pick = |cx: &mut Ctx, k: u32| -> Result<SupportSet> {
            let ball = SupportSet::ball(n, k)?;
            let m = cx.rng.gen_range(1..=ball.len().min(30));
            let idx = sample(&mut cx.rng, ball.len(), m).into_vec();
            let mut idx = idx;
            idx.sort_unstable();
            Ok(ball.select(idx))
        };
        let (b, c) = (pick(&mut cx, k1)?, pick(&mut cx, k2)?);
        out.push(bounds::sumset_bound_report(&b, &c, k1, k2)?);
    }

    for (n, k) in [(8, 0), (10, 2), (12, 6), (9, 3)] {
        out.push(bounds::ball_bound_report(n, k, &opt)?);
    }

    let s31 = synthesize(&Spectrum::indicator(&SupportSet::sphere(3, 1)?)?)?;
    out.push(bounds::tensorization_check(&s31, 2, DenseCap::default())?);
    for m in [2, 3] {
        let f = cx.function(4);
        out.push(bounds::tensorization_check(&f, m, DenseCap::default())?);
    }

    out.push(bounds::prop11_report(&SupportSet::span(5, &[0b1, 0b110, 0b11000])?, &opt, limit)?);
    out.push(bounds::prop11_report(&SupportSet::sphere(5, 2)?, &opt, limit)?);
    for _ in 0..3 {
        let n = cx.rng.gen_range(3..=8);
        let size = cx.rng.gen_range(2..=18);
        let a = cx.set(n, size);
        out.push(bounds::prop11_report(&a, &opt, limit)?);
    }

    for (n, k) in [(5, 2), (6, 2), (7, 3)] {
        out.push(bounds::split_consistency_report(n, k, &opt)?);
    }

    let v4 = SupportSet::span(4, &[0b11, 0b1100])?;
    out.push(bounds::energy_lowerbound_step_check(&synthesize(&Spectrum::indicator(&v4)?)?, 1.0, limit)?);
    let near = {
        // a subspace spectrum with one extra character: nearly extremal
        let mut a: Vec<u64> = SupportSet::span(10, &[0b11, 0b1100, 0b110000])?.elements().to_vec();
        a.push(0b1000000001);
        SupportSet::new(10, a)?
    };
    out.push(bounds::energy_lowerbound_step_check(&synthesize(&Spectrum::indicator(&near)?)?, 4.0, limit)?);

    let mut rep = BoundReport::new("sphere entropy bounds, sampled");
    for _ in 0..20 {
        let n = cx.rng.gen_range(2..=128);
        let k = cx.rng.gen_range(0..=n / 2);
        rep.absorb(bounds::sphere_entropy_report(SphereParams::half(n, k)?)?);
    }
    out.push(rep);
    Ok(out)
}
