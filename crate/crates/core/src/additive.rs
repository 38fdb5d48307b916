//! Pair multiplicities `|M_x|`, the bound `m(A)`, additive energy, sumsets,
//! hereditary energy and the dyadic level-set partition of a coefficient vector.
//!
//! Counts are integers throughout. The dense path runs an integer
//! Walsh–Hadamard self-convolution of the indicator of `A`; the sparse path
//! enumerates ordered pairs. When both apply they must agree.

use num_bigint::BigInt;
use num_rational::BigRational;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use crate::cube::{walsh_hadamard, SpectrumVector, SupportSet};
use crate::quartic::{self, OptimizerConfig};
use crate::{Error, Result};

/// Largest `n` for the dense self-convolution (a `2^n` array of `i64`).
pub const DENSE_CONVOLUTION_CAP: u32 = 22;
/// Largest `|A|²` for which ordered pairs are enumerated.
pub const PAIR_LIMIT: usize = 1 << 22;
pub const DEFAULT_EXACT_LIMIT: usize = 20;
/// Hard ceiling on the exhaustive subset search.
pub const MAX_EXACT_LIMIT: usize = 26;
const GREEDY_LIMIT: usize = 256;

/// `x ↦ |M_x|` over `x ∈ A + A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityTable {
    n: u32,
    counts: BTreeMap<u64, u64>,
}

impl MultiplicityTable {
    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn get(&self, x: u64) -> u64 {
        self.counts.get(&x).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&x, &c)| (x, c))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `Σ_x |M_x|`, which is `|A|²`.
    pub fn total(&self) -> u128 {
        self.counts.values().map(|&c| c as u128).sum()
    }

    /// `Σ_x |M_x|²`.
    pub fn energy(&self) -> u128 {
        self.counts.values().map(|&c| (c as u128) * (c as u128)).sum()
    }

    /// `A + A` as a set.
    pub fn sumset(&self) -> SupportSet {
        SupportSet::from_sorted(self.n, self.counts.keys().copied().collect())
    }
}

fn nonempty(a: &SupportSet) -> Result<()> {
    if a.is_empty() {
        Err(Error::EmptySet)
    } else {
        Ok(())
    }
}

fn by_pairs(a: &SupportSet) -> BTreeMap<u64, u64> {
    let elems = a.elements();
    let mut sums: Vec<u64> = Vec::with_capacity(elems.len() * elems.len());
    for &x in elems {
        sums.extend(elems.iter().map(|&y| x ^ y));
    }
    sums.sort_unstable();
    let mut counts = BTreeMap::new();
    for chunk in sums.chunk_by(|a, b| a == b) {
        counts.insert(chunk[0], chunk.len() as u64);
    }
    counts
}

fn by_convolution(a: &SupportSet) -> BTreeMap<u64, u64> {
    let n = a.dim();
    let mut dense = vec![0i64; 1usize << n];
    for &x in a.elements() {
        dense[x as usize] = 1;
    }
    walsh_hadamard(&mut dense);
    // |1̂_A| ≤ |A| and Σ squares = 2^n |A|, so every butterfly stays inside i64
    dense.iter_mut().for_each(|v| *v *= *v);
    walsh_hadamard(&mut dense);
    let shift = n;
    dense
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(x, &v)| (x as u64, (v >> shift) as u64))
        .collect()
}

/// Exact `|M_x|` for every `x ∈ A + A`.
pub fn pair_multiplicities(a: &SupportSet) -> Result<MultiplicityTable> {
    nonempty(a)?;
    let dense_ok = a.dim() <= DENSE_CONVOLUTION_CAP;
    let pairs_ok = a.len().saturating_mul(a.len()) <= PAIR_LIMIT;
    let counts = match (dense_ok, pairs_ok) {
        (true, true) => {
            let direct = by_pairs(a);
            if by_convolution(a) != direct {
                return Err(Error::CrossCheck(
                    "pair counts disagree with the self-convolution".into(),
                ));
            }
            direct
        }
        (true, false) => by_convolution(a),
        (false, true) => by_pairs(a),
        (false, false) => {
            return Err(Error::SizeLimit {
                what: "pair enumeration (|A|^2)",
                size: a.len().saturating_mul(a.len()),
                limit: PAIR_LIMIT,
            })
        }
    };
    Ok(MultiplicityTable { n: a.dim(), counts })
}

/// `m(A) = 1 + max_{x≠0} |M_x|`, and `1` when `A + A = {0}`.
pub fn m_bound(a: &SupportSet) -> Result<u64> {
    let table = pair_multiplicities(a)?;
    Ok(1 + table
        .iter()
        .filter(|&(x, _)| x != 0)
        .map(|(_, c)| c)
        .max()
        .unwrap_or(0))
}

/// `E₂(A,A) = Σ_x |M_x|²`.
pub fn additive_energy(a: &SupportSet) -> Result<u128> {
    Ok(pair_multiplicities(a)?.energy())
}

/// `E₂(A,A)/|A|²`, exactly.
pub fn energy_ratio(a: &SupportSet) -> Result<BigRational> {
    let e = additive_energy(a)?;
    Ok(ratio(e, a.len()))
}

fn ratio(energy: u128, size: usize) -> BigRational {
    BigRational::new(BigInt::from(energy), BigInt::from(size as u128 * size as u128))
}

/// `{b ⊕ c : b ∈ B, c ∈ C}`.
pub fn sumset(b: &SupportSet, c: &SupportSet) -> Result<SupportSet> {
    if b.dim() != c.dim() {
        return Err(Error::DimensionMismatch(b.dim(), c.dim()));
    }
    let n = b.dim();
    if n <= DENSE_CONVOLUTION_CAP && (1usize << n) <= b.len().saturating_mul(c.len()) * 8 {
        let mut hit = vec![false; 1usize << n];
        for &x in b.elements() {
            for &y in c.elements() {
                hit[(x ^ y) as usize] = true;
            }
        }
        let elems = (0..hit.len() as u64).filter(|&x| hit[x as usize]).collect();
        return Ok(SupportSet::from_sorted(n, elems));
    }
    SupportSet::collect(
        n,
        b.elements()
            .iter()
            .flat_map(|&x| c.elements().iter().map(move |&y| x ^ y)),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct HereditaryResult {
    pub best: SupportSet,
    pub energy: u128,
    pub ratio: BigRational,
    /// Set when the whole subset lattice was searched.
    pub exact: bool,
}

/// Orders candidates: larger `E/|B|²`, then smaller `|B|`, then
/// lexicographically smaller element list.
fn better(e1: u128, s1: &[usize], e2: u128, s2: &[usize]) -> bool {
    let (n1, n2) = (s1.len() as u128, s2.len() as u128);
    match (e1 * n2 * n2).cmp(&(e2 * n1 * n1)) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match n1.cmp(&n2) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => s1 < s2,
        },
    }
}

fn indices_of(bits: u64) -> Vec<usize> {
    (0..64).filter(|i| bits >> i & 1 == 1).collect()
}

/// Exhaustive search over all nonempty `B ⊆ A` in Gray-code order, updating
/// the pair counts incrementally.
fn hereditary_exhaustive(a: &SupportSet) -> (Vec<usize>, u128) {
    let elems = a.elements();
    let m = elems.len();
    let mut ids: HashMap<u64, usize> = HashMap::new();
    ids.insert(0, 0);
    let mut pair_id = vec![0usize; m * m];
    for i in 0..m {
        for j in 0..m {
            let next = ids.len();
            pair_id[i * m + j] = *ids.entry(elems[i] ^ elems[j]).or_insert(next);
        }
    }
    let mut counts = vec![0i64; ids.len()];
    let mut energy: i64 = 0;
    let bump = |counts: &mut [i64], energy: &mut i64, id: usize, d: i64| {
        let c = counts[id];
        *energy += 2 * c * d + d * d;
        counts[id] = c + d;
    };

    let mut members: u64 = 0;
    let mut best_bits = 0u64;
    let mut best_energy = 0u128;
    for step in 1u64..(1u64 << m) {
        let i = step.trailing_zeros() as usize;
        let adding = members >> i & 1 == 0;
        if adding {
            members |= 1 << i;
        } else {
            members &= !(1 << i);
        }
        let d = if adding { 1 } else { -1 };
        bump(&mut counts, &mut energy, 0, d);
        for j in 0..m {
            if j != i && members >> j & 1 == 1 {
                bump(&mut counts, &mut energy, pair_id[i * m + j], 2 * d);
            }
        }
        let e = energy as u128;
        if best_bits == 0 {
            (best_bits, best_energy) = (members, e);
            continue;
        }
        let size = members.count_ones() as u128;
        let best_size = best_bits.count_ones() as u128;
        match (e * best_size * best_size).cmp(&(best_energy * size * size)) {
            Ordering::Less => {}
            Ordering::Greater => (best_bits, best_energy) = (members, e),
            Ordering::Equal => {
                if better(e, &indices_of(members), best_energy, &indices_of(best_bits)) {
                    (best_bits, best_energy) = (members, e);
                }
            }
        }
    }
    (indices_of(best_bits), best_energy)
}

/// Greedy removal: repeatedly drop the element whose removal leaves the best
/// ratio, recording every intermediate set.
fn greedy_candidates(a: &SupportSet) -> Vec<Vec<usize>> {
    let elems = a.elements();
    let mut alive: Vec<usize> = (0..elems.len()).collect();
    let mut counts: HashMap<u64, i64> = HashMap::new();
    for &x in elems {
        for &y in elems {
            *counts.entry(x ^ y).or_default() += 1;
        }
    }
    let mut energy: i64 = counts.values().map(|c| c * c).sum();
    let mut out = Vec::new();
    while alive.len() > 1 {
        let mut choice: Option<(usize, i64)> = None;
        for (pos, &i) in alive.iter().enumerate() {
            let mut delta = -2 * counts[&0] + 1;
            for &j in &alive {
                if j != i {
                    delta += -4 * counts[&(elems[i] ^ elems[j])] + 4;
                }
            }
            let e = energy + delta;
            let keep = match choice {
                None => true,
                // compare e / size² with the same size, so plain energies decide
                Some((_, best)) => e > best,
            };
            if keep {
                choice = Some((pos, e));
            }
        }
        let (pos, e) = choice.expect("alive is nonempty");
        let i = alive.remove(pos);
        *counts.get_mut(&0).unwrap() -= 1;
        for &j in &alive {
            *counts.get_mut(&(elems[i] ^ elems[j])).unwrap() -= 2;
        }
        energy = e;
        out.push(alive.clone());
    }
    out
}

/// `max_{B ⊆ A} E₂(B,B)/|B|²`: exhaustive when `|A| ≤ exact_limit`, otherwise
/// the best of the whole set, greedy removal and the level sets of a
/// `μ`-certificate (flagged as not exact).
pub fn hereditary_energy(a: &SupportSet, exact_limit: usize) -> Result<HereditaryResult> {
    nonempty(a)?;
    let exact_limit = exact_limit.min(MAX_EXACT_LIMIT);
    if a.len() <= exact_limit {
        let (best, energy) = hereditary_exhaustive(a);
        return Ok(HereditaryResult {
            ratio: ratio(energy, best.len()),
            best: a.select(best),
            energy,
            exact: true,
        });
    }

    let mut candidates: Vec<Vec<usize>> = vec![(0..a.len()).collect()];
    if a.len() <= GREEDY_LIMIT {
        candidates.extend(greedy_candidates(a));
    }
    let cfg = OptimizerConfig {
        starts: 4,
        max_iters: 2000,
        ..OptimizerConfig::default()
    };
    if let Ok(est) = quartic::mu_lower(a, &cfg) {
        let levels = dyadic_level_sets(&est.certificate.abs())?;
        for (_, set) in levels.levels {
            candidates.push(
                set.elements()
                    .iter()
                    .map(|&x| a.index_of(x).expect("level set lies in A"))
                    .collect(),
            );
        }
    }

    let mut best: Option<(Vec<usize>, u128)> = None;
    for cand in candidates {
        let e = additive_energy(&a.select(cand.iter().copied()))?;
        let replace = match &best {
            None => true,
            Some((b, be)) => better(e, &cand, *be, b),
        };
        if replace {
            best = Some((cand, e));
        }
    }
    let (best, energy) = best.expect("at least the whole set is a candidate");
    Ok(HereditaryResult {
        ratio: ratio(energy, best.len()),
        best: a.select(best),
        energy,
        exact: false,
    })
}

/// Level sets `A_i = {a : 2^{-i} < y_a ≤ 2^{-(i-1)}}` for `1 ≤ i ≤ N`, with
/// `N = ⌈½ log₂|A|⌉ + 2`; positive coordinates at or below `2^{-N}` form the tail.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetDecomposition {
    /// Nonempty levels in increasing `i`.
    pub levels: Vec<(u32, SupportSet)>,
    pub cutoff: u32,
    pub tail: SupportSet,
}

/// `⌈½ log₂ size⌉ + 2`, computed as the least `c` with `4^c ≥ size`, plus 2.
pub fn level_cutoff(size: usize) -> u32 {
    let mut c = 0u32;
    while (1u128 << (2 * c)) < size as u128 {
        c += 1;
    }
    c + 2
}

/// Dyadic partition of a normalized, nonnegative coefficient vector.
pub fn dyadic_level_sets(y: &SpectrumVector) -> Result<LevelSetDecomposition> {
    if y.is_empty() {
        return Err(Error::EmptySet);
    }
    if !y.is_normalized(1e-9) {
        return Err(Error::domain("level sets need a unit vector"));
    }
    if y.coords().iter().any(|&c| c < 0.0 || c.is_nan()) {
        return Err(Error::domain("level sets need nonnegative coordinates"));
    }
    let support = y.support();
    let cutoff = level_cutoff(support.len());
    let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); cutoff as usize];
    let mut tail = Vec::new();
    for (&a, &c) in support.elements().iter().zip(y.coords()) {
        if c <= 0.0 {
            continue;
        }
        // walk down the dyadic ladder with exact power-of-two comparisons
        let mut level = None;
        for i in 1..=cutoff {
            let lower = (-(i as f64)).exp2();
            if c > lower {
                level = Some(i);
                break;
            }
        }
        match level {
            Some(i) => buckets[i as usize - 1].push(a),
            None => tail.push(a),
        }
    }
    let n = support.dim();
    let levels = buckets
        .into_iter()
        .enumerate()
        .filter(|(_, b)| !b.is_empty())
        .map(|(i, b)| (i as u32 + 1, SupportSet::from_sorted(n, b)))
        .collect();
    Ok(LevelSetDecomposition {
        levels,
        cutoff,
        tail: SupportSet::from_sorted(n, tail),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{seq::index::sample, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Quadruples `(a,b,c,d) ∈ A⁴` with `a ⊕ b ⊕ c ⊕ d = 0`, by brute force.
    fn brute_energy(a: &SupportSet) -> u128 {
        let e = a.elements();
        let mut count = 0u128;
        for &w in e {
            for &x in e {
                for &y in e {
                    if a.contains(w ^ x ^ y) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    fn random_set(rng: &mut ChaCha8Rng, n: u32, size: usize) -> SupportSet {
        let size = size.min(1 << n);
        let picks = sample(rng, 1 << n, size);
        SupportSet::new(n, picks.into_iter().map(|x| x as u64)).unwrap()
    }

    fn frac(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn multiplicity_examples() {
        let single = SupportSet::singleton(3, 0).unwrap();
        let t = pair_multiplicities(&single).unwrap();
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![(0, 1)]);

        let s31 = SupportSet::sphere(3, 1).unwrap();
        let t = pair_multiplicities(&s31).unwrap();
        assert_eq!(
            t.iter().collect::<Vec<_>>(),
            vec![(0, 3), (0b011, 2), (0b101, 2), (0b110, 2)]
        );

        let sub = SupportSet::full(2).unwrap();
        let t = pair_multiplicities(&sub).unwrap();
        assert!(t.iter().all(|(_, c)| c == 4));
        assert_eq!(t.len(), 4);
        assert_eq!(
            pair_multiplicities(&SupportSet::empty(2).unwrap()),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn m_bound_examples() {
        assert_eq!(m_bound(&SupportSet::singleton(4, 9).unwrap()).unwrap(), 1);
        assert_eq!(m_bound(&SupportSet::sphere(3, 1).unwrap()).unwrap(), 3);
        assert_eq!(m_bound(&SupportSet::full(2).unwrap()).unwrap(), 5);
    }

    #[test]
    fn energy_examples() {
        assert_eq!(additive_energy(&SupportSet::singleton(2, 0).unwrap()).unwrap(), 1);
        let s31 = SupportSet::sphere(3, 1).unwrap();
        assert_eq!(brute_energy(&s31), 21);
        assert_eq!(additive_energy(&s31).unwrap(), 21);
        let v = SupportSet::span(5, &[0b00011, 0b11000]).unwrap();
        assert_eq!(additive_energy(&v).unwrap(), 64);

        assert_eq!(energy_ratio(&SupportSet::singleton(2, 3).unwrap()).unwrap(), frac(1, 1));
        assert_eq!(energy_ratio(&s31).unwrap(), frac(7, 3));
        let s42 = SupportSet::sphere(4, 2).unwrap();
        assert_eq!(brute_energy(&s42), 168);
        assert_eq!(energy_ratio(&s42).unwrap(), frac(14, 3));
    }

    #[test]
    fn sumset_examples() {
        let zero = SupportSet::singleton(3, 0).unwrap();
        assert_eq!(sumset(&zero, &zero).unwrap(), zero);
        let s31 = SupportSet::sphere(3, 1).unwrap();
        let sum = sumset(&s31, &s31).unwrap();
        assert_eq!(sum.elements(), &[0, 0b011, 0b101, 0b110]);
        let v = SupportSet::span(6, &[0b000011, 0b110000, 0b001100]).unwrap();
        assert_eq!(sumset(&v, &v).unwrap(), v);
        assert!(sumset(&v, &s31).is_err());
        // sparse path
        let far = SupportSet::new(40, [1u64 << 39, 1, 0]).unwrap();
        assert_eq!(sumset(&far, &far).unwrap().len(), 4);
    }

    #[test]
    fn hereditary_examples() {
        let v = SupportSet::span(4, &[0b0011, 0b0101]).unwrap();
        let h = hereditary_energy(&v, DEFAULT_EXACT_LIMIT).unwrap();
        assert!(h.exact);
        assert_eq!(h.best, v);
        assert_eq!(h.ratio, frac(4, 1));

        let z = SupportSet::singleton(3, 0).unwrap();
        let h = hereditary_energy(&z, DEFAULT_EXACT_LIMIT).unwrap();
        assert_eq!((h.best, h.ratio), (z, frac(1, 1)));

        let s31 = SupportSet::sphere(3, 1).unwrap();
        let h = hereditary_energy(&s31, DEFAULT_EXACT_LIMIT).unwrap();
        assert!(h.ratio >= frac(7, 3));
        // no proper subset of S(3,1) beats it: pairs give 2, singletons 1
        assert_eq!(h.best, s31);
    }

    #[test]
    fn hereditary_matches_naive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.gen_range(2..7);
            let size = rng.gen_range(1..11);
            let a = random_set(&mut rng, n, size);
            let m = a.len();
            let mut best: Option<(BigRational, usize, Vec<usize>)> = None;
            for bits in 1u64..1 << m {
                let idx = indices_of(bits);
                let r = energy_ratio(&a.select(idx.iter().copied())).unwrap();
                let take = match &best {
                    None => true,
                    Some((br, bs, bi)) => {
                        r > *br || (r == *br && (idx.len() < *bs || (idx.len() == *bs && idx < *bi)))
                    }
                };
                if take {
                    best = Some((r, idx.len(), idx));
                }
            }
            let (r, _, idx) = best.unwrap();
            let h = hereditary_energy(&a, DEFAULT_EXACT_LIMIT).unwrap();
            assert_eq!(h.ratio, r);
            assert_eq!(h.best, a.select(idx));
        }
    }

    #[test]
    fn hereditary_heuristic_above_limit() {
        let a = SupportSet::sphere(6, 2).unwrap();
        let h = hereditary_energy(&a, 10).unwrap();
        assert!(!h.exact);
        assert!(h.ratio >= energy_ratio(&a).unwrap());
        assert!(h.best.is_subset_of(&a));
        assert_eq!(additive_energy(&h.best).unwrap(), h.energy);
    }

    #[test]
    fn level_set_examples() {
        let a = SupportSet::full(2).unwrap();
        let y = SpectrumVector::uniform(&a).unwrap();
        let d = dyadic_level_sets(&y).unwrap();
        assert_eq!(d.cutoff, 3);
        // 1/2 sits in (1/4, 1/2], the second dyadic level
        assert_eq!(d.levels, vec![(2, a.clone())]);
        assert!(d.tail.is_empty());

        let e = SpectrumVector::new(a.clone(), vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let d = dyadic_level_sets(&e).unwrap();
        assert_eq!(d.levels, vec![(1, SupportSet::singleton(2, 0).unwrap())]);

        let neg = SpectrumVector::new(a.clone(), vec![-1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(dyadic_level_sets(&neg).is_err());
        let long = SpectrumVector::new(a, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(dyadic_level_sets(&long).is_err());
    }

    #[test]
    fn level_sets_of_random_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_set(&mut rng, 6, 16);
        let raw: Vec<f64> = (0..16).map(|_| rng.gen::<f64>().powi(4)).collect();
        let y = SpectrumVector::new(a.clone(), raw).unwrap().normalized().unwrap();
        let d = dyadic_level_sets(&y).unwrap();
        assert_eq!(d.cutoff, 4);
        let mut seen = 0;
        for (&x, &c) in a.elements().iter().zip(y.coords()) {
            let hits: Vec<u32> = d
                .levels
                .iter()
                .filter(|(_, s)| s.contains(x))
                .map(|(i, _)| *i)
                .collect();
            if c > 0.5f64.powi(d.cutoff as i32) {
                assert_eq!(hits.len(), 1);
                let i = hits[0] as i32;
                assert!(0.5f64.powi(i) < c && c <= 0.5f64.powi(i - 1));
                assert!(!d.tail.contains(x));
            } else {
                assert!(hits.is_empty() && d.tail.contains(x));
            }
            seen += 1;
        }
        assert_eq!(seen, 16);
    }

    #[test]
    fn cutoff_values() {
        assert_eq!(level_cutoff(1), 2);
        assert_eq!(level_cutoff(4), 3);
        assert_eq!(level_cutoff(5), 4);
        assert_eq!(level_cutoff(16), 4);
        assert_eq!(level_cutoff(17), 5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn energy_matches_quadruple_count(seed in any::<u64>(), n in 1u32..13, size in 1usize..41) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_set(&mut rng, n, size);
            let t = pair_multiplicities(&a).unwrap();
            prop_assert_eq!(t.energy(), brute_energy(&a));
            prop_assert_eq!(t.get(0), a.len() as u64);
            prop_assert_eq!(t.total(), (a.len() * a.len()) as u128);
            prop_assert!(m_bound(&a).unwrap() <= a.len() as u64 + 1);
        }

        #[test]
        fn subspaces_are_extremal(seed in any::<u64>(), n in 2u32..9, d in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let basis: Vec<u64> = (0..d).map(|_| rng.gen_range(1..1u64 << n)).collect();
            let v = SupportSet::span(n, &basis).unwrap();
            prop_assume!(v.len() >= 2);
            prop_assert_eq!(m_bound(&v).unwrap(), v.len() as u64 + 1);
            let h = hereditary_energy(&v, DEFAULT_EXACT_LIMIT).unwrap();
            prop_assert_eq!(h.ratio, frac(v.len() as i64, 1));
        }
    }
}
