//! Acceptance run: one PASS/FAIL line per criterion, each with its time budget.
//! Oracles here are deliberately naive and share no code paths with the library
//! beyond the value under test.

use cube_mu::additive;
use cube_mu::asymptotics::{phi, psi_value, r_of_x, two_log2_3};
use cube_mu::bounds::{conjecture_scan, ratio_lemma_report, restricted_mass_check};
use cube_mu::cube::{synthesize, CubeFunction, Spectrum, SpectrumVector, SupportSet};
use cube_mu::quartic::{
    big_f, big_f_grad, decompose_last, g_curve_argmax, mu_lower, mu_upper, CurveMaximizer, OptimizerConfig,
};
use cube_mu::rational;
use cube_mu::sphere::{self, r_exact, sphere_sum_bound, SphereParams};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn rng(criterion: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(20_240_601);
    r.set_stream(criterion);
    r
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------- oracles

fn pair_counts(elems: &[u64]) -> HashMap<u64, u64> {
    let mut counts = HashMap::new();
    for &a in elems {
        for &b in elems {
            *counts.entry(a ^ b).or_insert(0u64) += 1;
        }
    }
    counts
}

/// `#{(a,b,c,d) ∈ A⁴ : a⊕b⊕c⊕d = 0}` by counting representations.
fn brute_energy(elems: &[u64]) -> u128 {
    pair_counts(elems).values().map(|&c| c as u128 * c as u128).sum()
}

fn brute_sumset(b: &[u64], c: &[u64]) -> usize {
    b.iter().flat_map(|&x| c.iter().map(move |&y| x ^ y)).collect::<HashSet<_>>().len()
}

/// `f(x) = Σ_a y_a (−1)^{⟨a,x⟩}`, point by point.
fn naive_values(n: u32, elems: &[u64], y: &[f64]) -> Vec<f64> {
    (0..1u64 << n)
        .map(|x| {
            elems
                .iter()
                .zip(y)
                .map(|(&a, &c)| if (a & x).count_ones() % 2 == 0 { c } else { -c })
                .sum()
        })
        .collect()
}

fn mean_pow(values: &[f64], p: i32) -> f64 {
    values.iter().map(|v| v.powi(p)).sum::<f64>() / values.len() as f64
}

fn binom(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `C(n,2t)·(C(2t,t)·C(n−2t,k−t))²`: ordered pairs of k-sets at distance 2t,
/// weighted by the number of ways the common sum splits back.
fn st_numerators(n: u32, k: u32) -> Vec<BigUint> {
    (0..=k)
        .map(|t| {
            if 2 * t > n {
                return BigUint::zero();
            }
            let inner = binom(2 * t, t) * binom(n - 2 * t, k - t);
            binom(n, 2 * t) * &inner * &inner
        })
        .collect()
}

/// Sign of `c − t₁` via `q(c) = 4c² − 3nc + 2k(n−k)`: `c < t₁` iff `q(c) > 0`
/// and `c` lies left of the vertex `3n/8`.
fn cmp_smaller_root(n: u32, k: u32, c: &BigRational) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let q = int(4) * c * c - int(3 * n as i64) * c + int(2 * k as i64 * (n - k) as i64);
    let vertex = int(3 * n as i64);
    match q.cmp(&BigRational::zero()) {
        // a root: the smaller one unless strictly right of the vertex
        Equal if c * int(8) <= vertex => Equal,
        Greater if c * int(8) < vertex => Less,
        _ => Greater,
    }
}

fn random_set(rng: &mut impl Rng, n: u32, max_size: usize) -> SupportSet {
    let size = rng.gen_range(1..=max_size.min(1 << n));
    let masks: Vec<u64> = sample(rng, 1 << n, size).into_iter().map(|x| x as u64).collect();
    SupportSet::new(n, masks).unwrap()
}

fn random_unit(rng: &mut impl Rng, a: &SupportSet) -> SpectrumVector {
    let coords = (0..a.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SpectrumVector::new(a.clone(), coords).unwrap().normalized().unwrap()
}

fn random_subspace(rng: &mut impl Rng, n: u32, d: u32) -> SupportSet {
    loop {
        let basis: Vec<u64> = (0..d).map(|_| rng.gen_range(1..1u64 << n)).collect();
        let v = SupportSet::span(n, &basis).unwrap();
        if v.len() == 1 << d {
            return v;
        }
    }
}

// ---------------------------------------------------------------- criteria

fn energy_closed_form() -> Outcome {
    let mut cells = 0;
    for n in 2..=12u32 {
        for k in 1..=n / 2 {
            let a = SupportSet::sphere(n, k).map_err(|e| e.to_string())?;
            let size = BigInt::from(a.len());
            let brute = BigRational::new(BigInt::from(brute_energy(a.elements())), &size * &size);
            let closed = r_exact(SphereParams::new(n, k).unwrap());
            ensure(brute == closed, || {
                format!(
                    "S({n},{k}): brute {} vs closed form {}",
                    rational::to_string(&brute),
                    rational::to_string(&closed)
                )
            })?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells exact"))
}

fn two_path_f() -> Outcome {
    let mut rng = rng(2);
    let mut worst = 0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let a = random_set(&mut rng, n, 40);
        let y = random_unit(&mut rng, &a);
        let fast = big_f(&y).map_err(|e| e.to_string())?;
        let slow = mean_pow(&naive_values(n, a.elements(), y.coords()), 4);
        let err = rel_err(fast, slow);
        worst = worst.max(err);
        ensure(err <= 1e-10, || format!("n={n}, |A|={}: {fast} vs {slow}", a.len()))?;
    }
    Ok(format!("200 instances, worst relative error {worst:.2e}"))
}

fn gradient() -> Outcome {
    let mut rng = rng(3);
    let mut worst = 0f64;
    for _ in 0..50 {
        let n = rng.gen_range(2..=9);
        let a = random_set(&mut rng, n, 30);
        let y = random_unit(&mut rng, &a);
        let grad = big_f_grad(&y).map_err(|e| e.to_string())?;
        let f_at = |v: Vec<f64>| big_f(&SpectrumVector::new(a.clone(), v).unwrap()).unwrap();
        let h = 1e-5;
        let fd: Vec<f64> = (0..a.len())
            .map(|i| {
                let mut up = y.coords().to_vec();
                let mut down = up.clone();
                up[i] += h;
                down[i] -= h;
                (f_at(up) - f_at(down)) / (2.0 * h)
            })
            .collect();
        let scale = grad.coords().iter().fold(0f64, |m, g| m.max(g.abs()));
        let err = grad.coords().iter().zip(&fd).fold(0f64, |m, (g, d)| m.max((g - d).abs())) / scale;
        worst = worst.max(err);
        ensure(err <= 1e-6, || format!("n={n}, |A|={}: relative error {err:.3e}", a.len()))?;
    }
    Ok(format!("50 instances, worst relative error {worst:.2e}"))
}

fn bracket() -> Outcome {
    let mut rng = rng(4);
    let cfg = OptimizerConfig::default();
    let mut tightest = f64::INFINITY;
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let a = random_set(&mut rng, n, 40);
        let lower = mu_lower(&a, &cfg).map_err(|e| e.to_string())?.value;
        let upper = mu_upper(&a).map_err(|e| e.to_string())?.best;
        tightest = tightest.min(upper - lower);
        ensure(lower <= upper + 1e-8, || format!("n={n}, |A|={}: {lower} > {upper}", a.len()))?;
    }
    let mut subspaces = 0;
    for d in 0..=3u32 {
        for _ in 0..5 {
            let n = rng.gen_range(d.max(1)..=10);
            let v = random_subspace(&mut rng, n, d);
            let size = (1u64 << d) as f64;
            let lower = mu_lower(&v, &cfg).map_err(|e| e.to_string())?.value;
            let upper = mu_upper(&v).map_err(|e| e.to_string())?;
            ensure(lower >= size - 1e-6, || format!("subspace dim {d} in n={n}: mu_lower {lower}"))?;
            ensure(upper.best == size && upper.cardinality_bound == 1 << d, || {
                format!("subspace dim {d} in n={n}: mu_upper {}", upper.best)
            })?;
            ensure(lower <= upper.best + 1e-8, || format!("subspace dim {d}: {lower} above {}", upper.best))?;
            subspaces += 1;
        }
    }
    Ok(format!("200 random sets (min gap {tightest:.3e}), {subspaces} subspaces attain 2^d"))
}

fn sphere_small() -> Outcome {
    let cfg = OptimizerConfig::default();
    for n in 2..=8u32 {
        let a = SupportSet::sphere(n, 1).unwrap();
        let lower = mu_lower(&a, &cfg).map_err(|e| e.to_string())?.value;
        let floor = 3.0 - 2.0 / n as f64 - 1e-9;
        ensure(lower >= floor && lower <= 3.0, || format!("S({n},1): mu_lower {lower} outside [{floor}, 3]"))?;
        let upper = mu_upper(&a).map_err(|e| e.to_string())?;
        ensure(upper.sphere_sum_bound == Some(BigUint::from(3u32)), || {
            format!("S({n},1): sum bound {:?}", upper.sphere_sum_bound)
        })?;
        if n >= 4 {
            let upper = mu_upper(&SupportSet::sphere(n, 2).unwrap()).map_err(|e| e.to_string())?;
            ensure(upper.sphere_sum_bound == Some(BigUint::from(15u32)), || {
                format!("S({n},2): sum bound {:?}", upper.sphere_sum_bound)
            })?;
        }
    }
    // the sum bound is Σ C(2t,t)C(k,t)², which the oracle recomputes
    for k in 0..=12u32 {
        let oracle = (0..=k).fold(BigUint::zero(), |acc, t| acc + binom(2 * t, t) * binom(k, t).pow(2));
        ensure(sphere_sum_bound(k) == oracle, || format!("sum bound at k={k}"))?;
    }
    ensure(sphere_sum_bound(1) == BigUint::from(3u32) && sphere_sum_bound(2) == BigUint::from(15u32), || {
        "sum bound values".into()
    })?;
    Ok("n = 2..8 inside [3 - 2/n, 3]; sum bounds 3 and 15".into())
}

fn psi_shape() -> Outcome {
    let psi = |x: f64| psi_value(x).map_err(|e| e.to_string());
    ensure(psi(0.0)?.abs() <= 1e-12, || "psi(0) != 0".into())?;
    ensure((psi(0.5)? - 1.0).abs() <= 1e-12, || format!("psi(1/2) = {}", psi(0.5).unwrap()))?;
    let h = 1e-3;
    let slope = two_log2_3();
    let mut worst_second = f64::NEG_INFINITY;
    for i in 1..500 {
        let x = i as f64 * h;
        let second = psi(x - h)? - 2.0 * psi(x)? + psi(x + h)?;
        worst_second = worst_second.max(second);
        ensure(second < 0.0, || format!("second difference {second} at x = {x}"))?;
        let v = psi(x)?;
        ensure(v < (slope * x).min(1.0), || format!("psi({x}) = {v} not below min(2 log2 3 x, 1)"))?;
    }
    Ok(format!("499 interior points, largest second difference {worst_second:.3e}"))
}

fn identities() -> Outcome {
    let mut worst = 0f64;
    for i in 0..=500 {
        let x = i as f64 * 1e-3;
        let r = r_of_x(x).map_err(|e| e.to_string())?;
        let e1 = (0.5 * (3.0 * r - 4.0 * r * r) - x * (1.0 - x)).abs();
        let e2 = (2.0 * (x - r) * (1.0 - x - r) - r * (1.0 - 2.0 * r)).abs();
        worst = worst.max(e1).max(e2);
        ensure(e1 <= 1e-10 && e2 <= 1e-10, || format!("x = {x}: residuals {e1:.3e}, {e2:.3e}"))?;
    }
    let mut rng = rng(7);
    let mut worst_phi = 0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=512u32);
        let k = rng.gen_range(0..=n / 2);
        let p = SphereParams::new(n, k).unwrap();
        let lhs = phi(sphere::t1(p) / n as f64, p).map_err(|e| e.to_string())?;
        let rhs = psi_value(k as f64 / n as f64).map_err(|e| e.to_string())?;
        worst_phi = worst_phi.max((lhs - rhs).abs());
        ensure((lhs - rhs).abs() <= 1e-10, || format!("({n},{k}): phi {lhs} vs psi {rhs}"))?;
    }
    Ok(format!("grid residual {worst:.2e}; 1000 cells, phi/psi residual {worst_phi:.2e}"))
}

fn ratio_lemma() -> Outcome {
    let mut cells = 0;
    let (mut below, mut above) = (0usize, 0usize);
    for n in 64..=128u32 {
        let lg = (n as f64).log2();
        let lo = (n as f64 / lg).ceil() as u32;
        let hi = (n as f64 / 2.0 - n as f64 / lg).floor() as u32;
        for k in lo..=hi {
            let p = SphereParams::new(n, k).unwrap();
            let rep = ratio_lemma_report(p).map_err(|e| e.to_string())?;
            ensure(rep.overall, || format!("library report fails at ({n},{k}): {:?}", rep.failures().collect::<Vec<_>>()))?;

            // independent: at the extremal Δ = |t − t₁| both claims compare t·s_{t+1}/s_t with t₁
            let nums = st_numerators(n, k);
            let t1 = sphere::t1(p);
            let int = |v: u32| BigRational::from_integer(BigInt::from(v));
            for t in 1..k {
                let scaled = BigRational::new(
                    BigInt::from(nums[t as usize + 1].clone()) * BigInt::from(t),
                    BigInt::from(nums[t as usize].clone()),
                );
                let at_or_below = cmp_smaller_root(n, k, &(int(t) + int(3))) != std::cmp::Ordering::Greater;
                if at_or_below {
                    below += 1;
                    ensure(cmp_smaller_root(n, k, &scaled) != std::cmp::Ordering::Less, || {
                        format!("growth claim fails at ({n},{k}), t={t}")
                    })?;
                }
                if t as f64 - t1 >= lg {
                    above += 1;
                    ensure(cmp_smaller_root(n, k, &scaled) != std::cmp::Ordering::Greater, || {
                        format!("decay claim fails at ({n},{k}), t={t}")
                    })?;
                }
            }
            let arg = (0..nums.len()).fold(0, |b, t| if nums[t] > nums[b] { t } else { b });
            ensure((arg as f64 - t1).abs() <= (n as f64 * lg).sqrt(), || {
                format!("argmax {arg} far from t1 = {t1} at ({n},{k})")
            })?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells; {below} growth and {above} decay instances, all exact"))
}

fn entropy_bounds() -> Outcome {
    let (mut cells, mut tight_cells) = (0, 0);
    let mut worst_tight = 0f64;
    for n in 1..=256u32 {
        for k in 0..=n / 2 {
            let p = SphereParams::new(n, k).unwrap();
            let r = rational::to_f64(&r_exact(p));
            let bound = (n as f64 * psi_value(k as f64 / n as f64).map_err(|e| e.to_string())?).exp2();
            ensure(r <= bound * (1.0 + 1e-9), || format!("({n},{k}): r = {r} above 2^(n psi) = {bound}"))?;
            cells += 1;
            if k >= 8 {
                let cap = 8.0 * (k as f64).powf(1.5) * r;
                worst_tight = worst_tight.max(bound / ((k as f64).powf(1.5) * r));
                ensure(bound <= cap, || format!("({n},{k}): 2^(n psi) = {bound} above 8 k^1.5 r = {cap}"))?;
                tight_cells += 1;
            }
        }
    }
    Ok(format!(
        "{cells} cells below 2^(n psi); {tight_cells} cells with 2^(n psi)/(k^1.5 r) <= {worst_tight:.4}"
    ))
}

fn uncertainty_and_sumsets() -> Outcome {
    let mut rng = rng(10);
    // equality case: subspace spectra
    for _ in 0..20 {
        let n = rng.gen_range(1..=10u32);
        let d = rng.gen_range(0..=n);
        let v = random_subspace(&mut rng, n, d);
        let values = naive_values(n, v.elements(), &vec![1.0; v.len()]);
        let supp = values.iter().filter(|x| x.abs() > 1e-9).count() as u64;
        let f = synthesize(&Spectrum::indicator(&v).unwrap()).unwrap();
        let lib_supp = cube_mu::cube::support_of(&f, 1e-9).len() as u64;
        ensure(supp == lib_supp && supp * v.len() as u64 == 1 << n, || {
            format!("subspace dim {d} in n={n}: {supp} * {} != 2^{n}", v.len())
        })?;
    }
    // restricted mass on admissible (f, B, δ)
    let mut admissible = 0;
    let mut worst = 0f64;
    while admissible < 100 {
        let n = rng.gen_range(6..=10u32);
        let a = random_set(&mut rng, n, 4);
        let b = random_set(&mut rng, n, 8);
        let upper = mu_upper(&a).map_err(|e| e.to_string())?.best;
        let delta_max = 1.0 - (upper * b.len() as f64).log2() / n as f64;
        if delta_max <= 0.0 {
            continue;
        }
        let delta = rng.gen_range(0.0..delta_max).max(1e-3).min(delta_max * 0.999);
        let y: Vec<f64> = (0..a.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let values = naive_values(n, a.elements(), &y);
        let f = CubeFunction::new(n, values.clone()).unwrap();
        let rep = restricted_mass_check(&f, &b, delta).map_err(|e| e.to_string())?;
        if !rep.applicable {
            continue;
        }
        let mass = b.elements().iter().map(|&x| values[x as usize].powi(2)).sum::<f64>() / (1u64 << n) as f64;
        let bound = (-delta * n as f64 / 2.0).exp2() * mean_pow(&values, 2);
        worst = worst.max(mass / bound);
        ensure(mass <= bound * (1.0 + 1e-12) && rep.overall, || {
            format!("n={n}, |A|={}, |B|={}, delta={delta}: mass {mass} above {bound}", a.len(), b.len())
        })?;
        admissible += 1;
    }
    // sumsets of ball subsets
    for _ in 0..100 {
        let n = rng.gen_range(2..=10u32);
        let (k1, k2) = (rng.gen_range(0..=n / 2), rng.gen_range(0..=n / 2));
        let pick = |rng: &mut ChaCha8Rng, k: u32| {
            let ball = SupportSet::ball(n, k).unwrap();
            let size = rng.gen_range(1..=ball.len().min(24));
            let mut idx = sample(rng, ball.len(), size).into_vec();
            idx.sort_unstable();
            ball.select(idx)
        };
        let (b, c) = (pick(&mut rng, k1), pick(&mut rng, k2));
        let sum = brute_sumset(b.elements(), c.elements());
        let (eb, ec) = (brute_energy(b.elements()), brute_energy(c.elements()));
        let lhs = BigInt::from(sum).pow(2) * BigInt::from(eb) * BigInt::from(ec);
        let rhs = BigInt::from(b.len()).pow(4) * BigInt::from(c.len()).pow(4);
        ensure(lhs >= rhs, || format!("energy sumset bound fails, n={n}"))?;
        let lib = additive::sumset(&b, &c).map_err(|e| e.to_string())?.len();
        ensure(lib == sum, || format!("sumset size {lib} vs oracle {sum}"))?;
        let psi = |k: u32| psi_value(k as f64 / n as f64).unwrap();
        let floor = b.len() as f64 * c.len() as f64 / (n as f64 / 2.0 * (psi(k1) + psi(k2))).exp2();
        ensure(sum as f64 >= floor * (1.0 - 1e-12), || {
            format!("n={n}, k=({k1},{k2}): |B+C| = {sum} below {floor}")
        })?;
    }
    Ok(format!("20 subspace equalities; 100 admissible mass checks (max mass/bound {worst:.3}); 100 sumset pairs"))
}

fn split_and_tensor() -> Outcome {
    let mut rng = rng(11);
    let mut worst_split = 0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=10u32);
        let values: Vec<f64> = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = CubeFunction::new(n, values.clone()).unwrap();
        let s = decompose_last(&f).map_err(|e| e.to_string())?;
        let (g0, g1) = (s.g0.values(), s.g1.values());
        // independently: each half is g0 ± g1
        let half = values.len() / 2;
        for i in 0..half {
            ensure(
                (values[i] - g0[i] - g1[i]).abs() < 1e-14 && (values[i + half] - g0[i] + g1[i]).abs() < 1e-14,
                || "split does not reconstruct f".into(),
            )?;
        }
        let cross = g0.iter().zip(g1).map(|(a, b)| a * a * b * b).sum::<f64>() / half as f64;
        let rhs = mean_pow(g0, 4) + 6.0 * cross + mean_pow(g1, 4);
        let err = rel_err(mean_pow(&values, 4), rhs);
        worst_split = worst_split.max(err);
        ensure(err <= 1e-10, || format!("split identity off by {err:.3e} at n={n}"))?;
    }
    let mut worst_tensor = 0f64;
    for n in 1..=5u32 {
        let values: Vec<f64> = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for m in 2..=3u32 {
            let big = cube_mu::bounds::tensor_power(
                &CubeFunction::new(n, values.clone()).unwrap(),
                m,
                cube_mu::cube::DenseCap::default(),
            )
            .map_err(|e| e.to_string())?;
            // F_m(x) = Π f(x_i) with block i at bits [i·n, (i+1)·n)
            let low = (1usize << n) - 1;
            for (x, &v) in big.values().iter().enumerate() {
                let expect: f64 = (0..m).map(|i| values[(x >> (i * n)) & low]).product();
                ensure((v - expect).abs() < 1e-14, || "tensor power layout".into())?;
            }
            for p in [2, 4] {
                let err = rel_err(mean_pow(big.values(), p), mean_pow(&values, p).powi(m as i32));
                worst_tensor = worst_tensor.max(err);
                ensure(err <= 1e-9, || format!("n={n}, m={m}, p={p}: {err:.3e}"))?;
            }
        }
    }
    let mut interior = 0;
    let mut worst_g = 0f64;
    while interior < 50 {
        let n = rng.gen_range(1..=6u32);
        let draw = |rng: &mut ChaCha8Rng| {
            let sparsity = rng.gen_range(0.2..1.0);
            CubeFunction::from_fn(n, |_| {
                if rng.gen_bool(sparsity) { rng.gen_range(-1.0..1.0) } else { 0.0 }
            })
            .unwrap()
        };
        let (g0, g1) = (draw(&mut rng), draw(&mut rng));
        if g0.is_zero() || g1.is_zero() {
            continue;
        }
        let Ok((value, CurveMaximizer::Interior(_))) = g_curve_argmax(&g0, &g1) else { continue };
        let (a2, a4, b2, b4) = (
            mean_pow(g0.values(), 2),
            mean_pow(g0.values(), 4),
            mean_pow(g1.values(), 2),
            mean_pow(g1.values(), 4),
        );
        let g = |x: f64| (b4 * x * x + 6.0 * (a4 * b4).sqrt() * x + a4) / (b2 * x + a2).powi(2);
        // log grid, then golden-section refinement around the best cell
        let (lo_exp, hi_exp, steps) = (-8.0f64, 8.0f64, 4000);
        let cell = (hi_exp - lo_exp) / steps as f64;
        let best = (0..=steps).map(|i| lo_exp + i as f64 * cell).fold((f64::NEG_INFINITY, 0.0), |b, e| {
            let v = g(10f64.powf(e));
            if v > b.0 { (v, e) } else { b }
        });
        let (mut lo, mut hi) = (10f64.powf(best.1 - cell), 10f64.powf(best.1 + cell));
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let (x1, x2) = (hi - ratio * (hi - lo), lo + ratio * (hi - lo));
            if g(x1) < g(x2) { lo = x1 } else { hi = x2 }
        }
        let searched = best.0.max(g((lo + hi) / 2.0));
        let err = rel_err(value, searched);
        worst_g = worst_g.max(err);
        ensure(err <= 1e-8, || format!("sup G = {value} vs grid {searched}"))?;
        interior += 1;
    }
    Ok(format!(
        "split {worst_split:.2e}, tensor {worst_tensor:.2e}, 50 interior G maxima within {worst_g:.2e}"
    ))
}

fn scan_determinism() -> Outcome {
    let cfg = OptimizerConfig::default();
    let run = || -> Result<String, String> {
        let records = conjecture_scan(8, &cfg).map_err(|e| e.to_string())?;
        for r in &records {
            ensure(r.gap >= -1e-8, || format!("S({},{}): gap {}", r.n, r.k, r.gap))?;
        }
        serde_json::to_string(&records).map_err(|e| e.to_string())
    };
    let first = run()?;
    let second = run()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let single = pool.install(run)?;
    ensure(first == second && first == single, || "repeated scans differ".into())?;
    let records: Vec<cube_mu::bounds::ConjectureRecord> = serde_json::from_str(&first).unwrap();
    ensure(records.len() == 16, || format!("{} records, expected 16", records.len()))?;
    let worst = records.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
    Ok(format!("{} records, identical across 3 runs, min gap {worst:.3e}", records.len()))
}

fn main() {
    type Criterion = (u32, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        (1, "energy closed form", 60, energy_closed_form),
        (2, "two-path F agreement", 30, two_path_f),
        (3, "gradient vs central differences", 30, gradient),
        (4, "bracket soundness", 300, bracket),
        (5, "small spheres", 120, sphere_small),
        (6, "psi endpoints and shape", 10, psi_shape),
        (7, "analytic identities", 30, identities),
        (8, "ratio lemma, exact", 300, ratio_lemma),
        (9, "entropy bound desk checks", 300, entropy_bounds),
        (10, "uncertainty, restricted mass, sumsets", 180, uncertainty_and_sumsets),
        (11, "split and tensorization", 180, split_and_tensor),
        (12, "scan determinism", 600, scan_determinism),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(budget) => {
                Err(format!("over budget ({detail})"))
            }
            other => other,
        };
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} criterion {id:>2}: {name} [{:.2}s / {budget}s] {detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
