//! Exact combinatorial kernels: rationals, binomials, colex ranking of
//! k-subsets, partial matchings, small primes and permutation stepping.
//!
//! Vertices are `u32` labels in `0..n`. Subsets are kept sorted, and a
//! k-subset `S = {s_0 < s_1 < ... < s_{k-1}}` has colex rank
//! `sum_j C(s_j, j + 1)`, which maps `binom([n], k)` onto `0..C(n, k)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// Formats as `p/q`, always with an explicit denominator.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or a bare integer `p`. The result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let den = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Least common multiple of the denominators, together with the scaled
/// integer numerators `values[i] * lcm`.
pub fn common_denominator(values: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for v in values {
        den = den.lcm(v.denom());
    }
    let nums = values
        .iter()
        .map(|v| v.numer() * (&den / v.denom()))
        .collect();
    (nums, den)
}

/// `C(n, k)` as an arbitrary precision integer; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` in `u64`, or `None` on overflow.
pub fn checked_choose(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `C(n, k)` in `u64`. Panics on overflow; callers stay inside the size guards.
pub fn choose(n: usize, k: usize) -> u64 {
    checked_choose(n, k).unwrap_or_else(|| panic!("C({n}, {k}) overflows u64"))
}

/// Pascal triangle for hot loops.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    width: usize,
    data: Vec<u64>,
}

impl BinomialTable {
    pub fn new(n_max: usize) -> Self {
        let width = n_max + 1;
        let mut data = vec![0u64; width * width];
        for n in 0..width {
            data[n * width] = 1;
            for k in 1..=n {
                let above = data[(n - 1) * width + k - 1];
                let left = if k < n { data[(n - 1) * width + k] } else { 0 };
                data[n * width + k] = above.saturating_add(left);
            }
        }
        BinomialTable { width, data }
    }

    #[inline]
    pub fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.data[n * self.width + k]
        }
    }

    /// Colex rank of the subset whose members are the set bits of `mask`.
    #[inline]
    pub fn rank_mask(&self, mut mask: u64) -> usize {
        let mut rank = 0u64;
        let mut j = 1;
        while mask != 0 {
            let v = mask.trailing_zeros() as usize;
            rank += self.get(v, j);
            j += 1;
            mask &= mask - 1;
        }
        rank as usize
    }

    #[inline]
    pub fn rank_sorted(&self, elems: &[u32]) -> usize {
        elems
            .iter()
            .enumerate()
            .map(|(j, &v)| self.get(v as usize, j + 1))
            .sum::<u64>() as usize
    }
}

/// A k-element subset of `{0, ..., n-1}`, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSubset(Vec<u32>);

impl KSubset {
    /// Sorts the input; rejects duplicates and elements `>= n`.
    pub fn new(mut elems: Vec<u32>, n: usize) -> Result<Self> {
        elems.sort_unstable();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("repeated vertex in {elems:?}")));
        }
        if let Some(&max) = elems.last() {
            if max as usize >= n {
                return Err(Error::invalid(format!("vertex {max} not below n = {n}")));
            }
        }
        Ok(KSubset(elems))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Bit mask of the members. Requires every element `< 64`.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &v| m | (1u64 << v))
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

impl fmt::Display for KSubset {
    // 1-based for display.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str("}")
    }
}

pub fn rank_colex(s: &KSubset) -> u64 {
    s.0.iter()
        .enumerate()
        .map(|(j, &v)| choose(v as usize, j + 1))
        .sum()
}

pub fn unrank_colex(index: u64, n: usize, k: usize) -> Result<KSubset> {
    let total = checked_choose(n, k).ok_or_else(|| Error::invalid("C(n, k) overflows"))?;
    if index >= total {
        return Err(Error::IndexOutOfRange {
            index,
            limit: total,
        });
    }
    let mut rest = index;
    let mut elems = vec![0u32; k];
    let mut top = n;
    for j in (0..k).rev() {
        // Largest v < top with C(v, j+1) <= rest.
        let mut v = top - 1;
        while choose(v, j + 1) > rest {
            v -= 1;
        }
        elems[j] = v as u32;
        rest -= choose(v, j + 1);
        top = v;
    }
    Ok(KSubset(elems))
}

/// All k-subsets of `0..n` in colex order, i.e. in increasing rank.
#[derive(Debug, Clone)]
pub struct Subsets {
    n: usize,
    current: Vec<u32>,
    done: bool,
}

pub fn subsets(n: usize, k: usize) -> Subsets {
    Subsets {
        n,
        current: (0..k as u32).collect(),
        done: k > n,
    }
}

impl Iterator for Subsets {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        let mut advanced = false;
        for j in 0..k {
            let bound = if j + 1 < k {
                self.current[j + 1]
            } else {
                self.n as u32
            };
            if self.current[j] + 1 < bound {
                self.current[j] += 1;
                for (i, c) in self.current[..j].iter_mut().enumerate() {
                    *c = i as u32;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.done = true;
        }
        Some(out)
    }
}

/// Masks of all k-subsets of `items` (each item `< 64`), in colex order of
/// the positions within `items`.
pub fn subset_masks(items: &[u32], k: usize) -> Vec<u64> {
    subsets(items.len(), k)
        .map(|idx| {
            idx.iter()
                .fold(0u64, |m, &i| m | (1u64 << items[i as usize]))
        })
        .collect()
}

/// A set of `r` disjoint unordered vertex pairs, each stored as
/// `(smaller, larger)` and sorted by the smaller endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialMatching {
    pairs: Vec<(u32, u32)>,
}

impl PartialMatching {
    pub fn new(pairs: Vec<(u32, u32)>) -> Result<Self> {
        let mut pairs: Vec<(u32, u32)> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort_unstable();
        let mut seen: Vec<u32> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("matching pairs are not disjoint"));
        }
        Ok(PartialMatching { pairs })
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Mask of all `2r` covered vertices.
    pub fn mask(&self) -> u64 {
        self.pairs
            .iter()
            .fold(0u64, |m, &(a, b)| m | (1u64 << a) | (1u64 << b))
    }
}

/// Number of r-matchings on n vertices: `C(n, 2r) (2r)! / (2^r r!)`.
pub fn matching_count(n: usize, r: usize) -> BigUint {
    if 2 * r > n {
        return BigUint::zero();
    }
    let mut odd_factorial = BigUint::one();
    let mut i = 2 * r as u64;
    while i > 1 {
        odd_factorial *= i - 1;
        i -= 2;
    }
    binomial(n as u64, 2 * r as i64) * odd_factorial
}

/// Perfect matchings of an even-size sorted vertex list. The smallest
/// uncovered vertex is always paired first, partners in increasing order.
#[derive(Debug, Clone)]
pub struct PerfectMatchings {
    vertices: Vec<u32>,
    digits: Vec<usize>,
    done: bool,
}

pub fn perfect_matchings(vertices: &[u32]) -> PerfectMatchings {
    debug_assert!(vertices.len().is_multiple_of(2));
    PerfectMatchings {
        vertices: vertices.to_vec(),
        digits: vec![0; vertices.len() / 2],
        done: false,
    }
}

impl Iterator for PerfectMatchings {
    type Item = Vec<(u32, u32)>;

    fn next(&mut self) -> Option<Vec<(u32, u32)>> {
        if self.done {
            return None;
        }
        let r = self.digits.len();
        let mut remaining = self.vertices.clone();
        let mut pairs = Vec::with_capacity(r);
        for &d in &self.digits {
            let first = remaining.remove(0);
            let partner = remaining.remove(d);
            pairs.push((first, partner));
        }
        // Mixed radix increment; digit i ranges over 0..(2r - 2i - 1).
        let mut i = r;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            let radix = 2 * (r - i) - 1;
            self.digits[i] += 1;
            if self.digits[i] < radix {
                break;
            }
            self.digits[i] = 0;
        }
        Some(pairs)
    }
}

/// Stream of all r-matchings on `0..n`: covered vertex sets in colex order,
/// then the perfect matchings of each set.
pub struct Matchings {
    sets: Subsets,
    inner: Option<PerfectMatchings>,
}

impl Iterator for Matchings {
    type Item = PartialMatching;

    fn next(&mut self) -> Option<PartialMatching> {
        loop {
            if let Some(inner) = self.inner.as_mut() {
                if let Some(pairs) = inner.next() {
                    return Some(PartialMatching { pairs });
                }
            }
            let set = self.sets.next()?;
            self.inner = Some(perfect_matchings(&set));
        }
    }
}

pub fn enumerate_matchings(n: usize, r: usize) -> Result<Matchings> {
    if 2 * r > n {
        return Err(Error::invalid(format!(
            "need n >= 2r, got n = {n}, r = {r}"
        )));
    }
    Ok(Matchings {
        sets: subsets(n, 2 * r),
        inner: None,
    })
}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m < 4 {
        return true;
    }
    if m.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn largest_prime_leq(m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::invalid(format!("no prime <= {m}")));
    }
    Ok((2..=m).rev().find(|&p| is_prime(p)).expect("2 is prime"))
}

/// Advances to the next permutation in lexicographic order; returns `false`
/// (leaving the slice sorted ascending) after the last one.
pub fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(7, 3), BigUint::from(35u32));
        assert_eq!(binomial(5, 0), BigUint::one());
        assert_eq!(binomial(4, 5), BigUint::zero());
        assert_eq!(binomial(4, -1), BigUint::zero());
        assert_eq!(checked_choose(28, 14), Some(40116600));
    }

    #[test]
    fn colex_rank_small() {
        let s = |v: Vec<u32>| KSubset::new(v, 10).unwrap();
        assert_eq!(rank_colex(&s(vec![0, 1, 2])), 0);
        assert_eq!(rank_colex(&s(vec![0, 1, 3])), 1);
        assert_eq!(rank_colex(&s(vec![0, 2, 3])), 2);
        assert_eq!(rank_colex(&s(vec![1, 2, 3])), 3);
        assert_eq!(rank_colex(&s(vec![0, 1, 4])), 4);
    }

    #[test]
    fn colex_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let n = rng.gen_range(1..30usize);
            let k = rng.gen_range(0..=n);
            let total = choose(n, k);
            let i = rng.gen_range(0..total);
            let s = unrank_colex(i, n, k).unwrap();
            assert_eq!(rank_colex(&s), i);
            assert_eq!(unrank_colex(rank_colex(&s), n, k).unwrap(), s);
        }
    }

    #[test]
    fn colex_monotone() {
        // Colex order compares the largest differing element.
        fn colex_less(a: &[u32], b: &[u32]) -> bool {
            for j in (0..a.len()).rev() {
                if a[j] != b[j] {
                    return a[j] < b[j];
                }
            }
            false
        }
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10_000 {
            let n = rng.gen_range(2..20usize);
            let k = rng.gen_range(1..=n);
            let total = choose(n, k);
            let a = unrank_colex(rng.gen_range(0..total), n, k).unwrap();
            let b = unrank_colex(rng.gen_range(0..total), n, k).unwrap();
            let (ra, rb) = (rank_colex(&a), rank_colex(&b));
            assert_eq!(ra < rb, colex_less(a.as_slice(), b.as_slice()));
        }
    }

    #[test]
    fn unrank_out_of_range() {
        assert_eq!(
            unrank_colex(35, 7, 3),
            Err(Error::IndexOutOfRange {
                index: 35,
                limit: 35
            })
        );
    }

    #[test]
    fn subsets_follow_rank_order() {
        for (n, k) in [(0, 0), (5, 0), (6, 3), (7, 7), (3, 4)] {
            let all: Vec<_> = subsets(n, k).collect();
            assert_eq!(all.len() as u64, choose(n, k));
            let table = BinomialTable::new(n.max(1));
            for (i, s) in all.iter().enumerate() {
                assert_eq!(table.rank_sorted(s), i);
            }
        }
    }

    #[test]
    fn matching_counts_match_formula() {
        assert_eq!(enumerate_matchings(4, 2).unwrap().count(), 3);
        assert_eq!(enumerate_matchings(9, 0).unwrap().count(), 1);
        assert_eq!(enumerate_matchings(7, 3).unwrap().count(), 105);
        for n in 0..=12 {
            for r in 0..=5 {
                if 2 * r > n {
                    assert!(enumerate_matchings(n, r).is_err());
                    continue;
                }
                let all: Vec<_> = enumerate_matchings(n, r).unwrap().collect();
                assert_eq!(
                    BigUint::from(all.len()),
                    matching_count(n, r),
                    "n={n} r={r}"
                );
            }
        }
    }

    #[test]
    fn matchings_are_distinct_and_canonical() {
        let all: Vec<_> = enumerate_matchings(8, 3).unwrap().collect();
        let mut set = std::collections::HashSet::new();
        for m in &all {
            assert_eq!(PartialMatching::new(m.pairs().to_vec()).unwrap(), *m);
            assert!(set.insert(m.clone()));
        }
    }

    #[test]
    fn primes() {
        assert_eq!(largest_prime_leq(10).unwrap(), 7);
        assert_eq!(largest_prime_leq(2).unwrap(), 2);
        assert_eq!(largest_prime_leq(23).unwrap(), 23);
        assert!(largest_prime_leq(1).is_err());
    }

    #[test]
    fn permutations_enumerated_in_order() {
        let mut p = vec![0u32, 1, 2, 3];
        let mut count = 1;
        let mut prev = p.clone();
        while next_permutation(&mut p) {
            assert!(p > prev);
            prev = p.clone();
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![0, 1, 2, 3]);
    }

    #[test]
    fn rational_format_roundtrip() {
        for s in ["0/1", "-3/4", "7/1", "12/5"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-2").unwrap(), rat(-2, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn common_denominator_scales() {
        let v = vec![rat(1, 2), rat(-1, 3), rat(0, 1)];
        let (nums, den) = common_denominator(&v);
        assert_eq!(den, BigInt::from(6));
        assert_eq!(
            nums,
            vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rat() -> impl Strategy<Value = Rational> {
            (-50i64..50, 1i64..20).prop_map(|(p, q)| rat(p, q))
        }

        proptest! {
            #[test]
            fn rational_field_identities(a in small_rat(), b in small_rat(), c in small_rat()) {
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
                prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
                prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
                prop_assert!(a.denom() > &BigInt::zero());
            }
        }
    }
}
