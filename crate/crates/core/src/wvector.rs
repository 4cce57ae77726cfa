//! Level weights of a function on the slice.
//!
//! For a level `r`, a 2r-permutation `(a_1, b_1, ..., a_r, b_r)` and the
//! family of k-sets `R` meeting every pair `{a_i, b_i}` in exactly one
//! vertex, the inner quantity is the average of
//! `(-1)^{|R ∩ {b_1..b_r}|} f(R)` over that family. The L2 weight squares
//! it and averages over 2r-permutations; the L1 weight averages its
//! absolute value.
//!
//! Swapping `a_i` and `b_i` negates the inner average, since every `R` in the
//! family holds exactly one of the two. Both weights therefore only depend on
//! the unordered matching, and the average over ordered 2r-permutations
//! equals the average over r-matchings, each taken with `a_i < b_i`.
//!
//! The L2 weight is returned squared so that it stays rational.

use std::collections::BTreeMap;
use std::ops::{AddAssign, Neg, RangeInclusive};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinat::{
    choose, common_denominator, matching_count, perfect_matchings, subset_masks, subsets,
    BinomialTable, Rational,
};
use crate::error::{Error, Result};
use crate::hypergraph::SliceFunction;

/// Upper bound on `matchings * 2^r * C(n - 2r, k - r)` for one level.
pub const MAX_LEVEL_WORK: u128 = 2_000_000_000;

fn check_level(n: usize, k: usize, r: usize) -> Result<()> {
    if r < 1 || r > k {
        return Err(Error::invalid(format!("level r = {r} outside 1..={k}")));
    }
    if n < 2 * k {
        return Err(Error::invalid(format!(
            "level weights need n >= 2k, got n = {n}, k = {k}"
        )));
    }
    if n > 64 {
        return Err(Error::invalid("level weights support at most 64 vertices"));
    }
    Ok(())
}

/// Number of elementary additions for level `r`.
pub fn level_work(n: usize, k: usize, r: usize) -> u128 {
    let m = matching_count(n, r).to_u128().unwrap_or(u128::MAX);
    let per = (choose(n - 2 * r, k - r) as u128).saturating_mul(1u128 << r);
    m.saturating_mul(per)
}

/// Integer inner sums, one per r-matching, of `f` scaled by `den`.
struct LevelSums {
    sums: Vec<BigInt>,
    /// Size of each family of k-sets: `2^r C(n - 2r, k - r)`.
    family: BigInt,
    den: BigInt,
}

fn level_sums(f: &SliceFunction, r: usize) -> Result<LevelSums> {
    let (n, k) = (f.n(), f.k());
    check_level(n, k, r)?;
    let work = level_work(n, k, r);
    if work > MAX_LEVEL_WORK {
        return Err(Error::guard(
            format!("level {r} weight"),
            work,
            MAX_LEVEL_WORK,
        ));
    }
    let (nums, den) = common_denominator(f.values());
    let small: Option<Vec<i128>> = nums.iter().map(|v| v.to_i64().map(i128::from)).collect();
    let sums = match small {
        Some(vals) => matching_sums(&vals, n, k, r)
            .into_iter()
            .map(BigInt::from)
            .collect(),
        None => matching_sums(&nums, n, k, r),
    };
    let family = BigInt::from(choose(n - 2 * r, k - r)) << r;
    Ok(LevelSums { sums, family, den })
}

fn matching_sums<T>(values: &[T], n: usize, k: usize, r: usize) -> Vec<T>
where
    T: Clone + Zero + for<'a> AddAssign<&'a T> + Neg<Output = T> + Send + Sync,
{
    let table = BinomialTable::new(n);
    let sets: Vec<Vec<u32>> = subsets(n, 2 * r).collect();
    sets.par_iter()
        .map(|covered| {
            let cover_mask = covered.iter().fold(0u64, |m, &v| m | 1u64 << v);
            let rest: Vec<u32> = (0..n as u32).filter(|v| cover_mask >> v & 1 == 0).collect();
            let tails = subset_masks(&rest, k - r);
            let mut out = Vec::new();
            for pairs in perfect_matchings(covered) {
                let mut total = T::zero();
                for choice in 0u32..(1 << r) {
                    let mut picked = 0u64;
                    for (i, &(a, b)) in pairs.iter().enumerate() {
                        picked |= 1u64 << if choice >> i & 1 == 1 { b } else { a };
                    }
                    let mut part = T::zero();
                    for &t in &tails {
                        part += &values[table.rank_mask(picked | t)];
                    }
                    if choice.count_ones() % 2 == 1 {
                        part = -part;
                    }
                    total += &part;
                }
                out.push(total);
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Squared L2 level-r weight `(W^r(f))^2`. Needs `n >= 2k` and `1 <= r <= k`.
pub fn w2_sq(f: &SliceFunction, r: usize) -> Result<Rational> {
    let ls = level_sums(f, r)?;
    let sum_sq: BigInt = ls.sums.iter().map(|s| s * s).sum();
    let count = BigInt::from(ls.sums.len());
    let scale = &ls.family * &ls.family * &ls.den * &ls.den;
    Ok(Rational::new(sum_sq, count * scale))
}

/// L1 level-r weight `W_r(f)`, the average absolute inner expectation.
pub fn w1(f: &SliceFunction, r: usize) -> Result<Rational> {
    let ls = level_sums(f, r)?;
    let sum_abs: BigInt = ls.sums.iter().map(|s| s.abs()).sum();
    let count = BigInt::from(ls.sums.len());
    Ok(Rational::new(sum_abs, count * &ls.family * &ls.den))
}

/// Squared L2 weights over a range of levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WProfile {
    n: usize,
    k: usize,
    levels: BTreeMap<usize, Rational>,
}

impl WProfile {
    pub fn compute(f: &SliceFunction, levels: RangeInclusive<usize>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for r in levels {
            map.insert(r, w2_sq(f, r)?);
        }
        Ok(WProfile {
            n: f.n(),
            k: f.k(),
            levels: map,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn levels(&self) -> &BTreeMap<usize, Rational> {
        &self.levels
    }

    pub fn get(&self, r: usize) -> Option<&Rational> {
        self.levels.get(&r)
    }

    /// True iff every stored level in `lo..=hi` is zero.
    pub fn all_zero(&self, lo: usize, hi: usize) -> bool {
        self.levels.range(lo..=hi).all(|(_, v)| v.is_zero())
    }

    pub fn all_levels_zero(&self) -> bool {
        self.levels.values().all(Zero::is_zero)
    }

    /// The largest stored squared weight, with the lowest level attaining it.
    pub fn max_level(&self) -> Option<(usize, &Rational)> {
        self.levels.iter().fold(
            None,
            |best: Option<(usize, &Rational)>, (&r, v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((r, v)),
            },
        )
    }
}

/// Squared weights for levels `ell..=k`.
pub fn w_profile(f: &SliceFunction, ell: usize) -> Result<WProfile> {
    if ell < 1 || ell > f.k() {
        return Err(Error::invalid(format!("ell = {ell} outside 1..={}", f.k())));
    }
    WProfile::compute(f, ell..=f.k())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{next_permutation, rat};
    use crate::hypergraph::Hypergraph;
    use num_traits::One;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Straight from the definition: every ordered 2r-permutation, every
    /// k-set meeting each pair once.
    fn ordered_oracle(f: &SliceFunction, r: usize, absolute: bool) -> Rational {
        let (n, k) = (f.n(), f.k());
        let all: Vec<Vec<u32>> = subsets(n, k).collect();
        let mut total = Rational::zero();
        let mut count = 0u64;
        for chosen in subsets(n, 2 * r) {
            let mut perm = chosen.clone();
            loop {
                let mut inner = Rational::zero();
                let mut family = 0u64;
                for (i, set) in all.iter().enumerate() {
                    let ok = (0..r).all(|p| {
                        set.contains(&perm[2 * p]) as u8 + set.contains(&perm[2 * p + 1]) as u8 == 1
                    });
                    if !ok {
                        continue;
                    }
                    family += 1;
                    let flips = (0..r).filter(|&p| set.contains(&perm[2 * p + 1])).count();
                    if flips % 2 == 0 {
                        inner += f.at_rank(i);
                    } else {
                        inner -= f.at_rank(i);
                    }
                }
                let e = inner / Rational::from_integer(family.into());
                total += if absolute { e.abs() } else { &e * &e };
                count += 1;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        total / Rational::from_integer(count.into())
    }

    /// The degree-based display: sums over transversal r-sets S of signed
    /// edge-degrees, normalized by `n(n-1)...(n-2r+1) 2^r C(n-2r, k-r)`.
    fn degree_form_w1(g: &Hypergraph, r: usize) -> Rational {
        let (n, k) = (g.n(), g.k());
        let edges = g.edges();
        let deg = |s: &[u32]| {
            edges
                .iter()
                .filter(|e| s.iter().all(|v| e.contains(*v)))
                .count() as i64
        };
        let mut total = 0i64;
        let mut falling = 0i64;
        for chosen in subsets(n, 2 * r) {
            let mut perm = chosen.clone();
            loop {
                falling += 1;
                let mut inner = 0i64;
                for pick in 0u32..(1 << r) {
                    let s: Vec<u32> = (0..r)
                        .map(|p| perm[2 * p + (pick >> p & 1) as usize])
                        .collect();
                    let sign = if pick.count_ones() % 2 == 0 { 1 } else { -1 };
                    inner += sign * deg(&s);
                }
                total += inner.abs();
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        let norm = falling * (1i64 << r) * choose(n - 2 * r, k - r) as i64;
        rat(total, norm)
    }

    fn random_rational(rng: &mut impl Rng, n: usize, k: usize, bound: i64) -> SliceFunction {
        SliceFunction::from_fn(n, k, |_| {
            rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
        })
        .unwrap()
    }

    #[test]
    fn constants_have_no_weight() {
        for (n, k) in [(6, 3), (7, 2), (8, 4)] {
            let f = SliceFunction::constant(n, k, rat(3, 7)).unwrap();
            for r in 1..=k {
                assert!(w2_sq(&f, r).unwrap().is_zero());
                assert!(w1(&f, r).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn single_vertex_indicator() {
        let f = Hypergraph::from_edges(2, 1, [vec![0]]).unwrap().indicator();
        assert_eq!(w2_sq(&f, 1).unwrap(), rat(1, 4));
        assert_eq!(w1(&f, 1).unwrap(), rat(1, 2));
        assert_eq!(ordered_oracle(&f, 1, false), rat(1, 4));
    }

    #[test]
    fn single_edge_matches_ordered_oracle() {
        let f = Hypergraph::from_edges(6, 3, [vec![0, 2, 5]])
            .unwrap()
            .indicator();
        for r in 1..=3 {
            assert_eq!(w2_sq(&f, r).unwrap(), ordered_oracle(&f, r, false), "r={r}");
            assert_eq!(w1(&f, r).unwrap(), ordered_oracle(&f, r, true), "r={r}");
        }
    }

    #[test]
    fn random_functions_match_ordered_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (n, k) in [(4, 2), (5, 2), (6, 2), (6, 3)] {
            for _ in 0..3 {
                let f = random_rational(&mut rng, n, k, 5);
                for r in 1..=k {
                    assert_eq!(w2_sq(&f, r).unwrap(), ordered_oracle(&f, r, false));
                    assert_eq!(w1(&f, r).unwrap(), ordered_oracle(&f, r, true));
                }
            }
        }
    }

    #[test]
    fn degree_form_agrees_with_expectation_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for (n, k) in [(4, 2), (5, 2), (6, 3)] {
            for _ in 0..4 {
                let g = Hypergraph::from_fn(n, k, |_| rng.gen_bool(0.5)).unwrap();
                for r in 1..=k {
                    assert_eq!(w1(&g.indicator(), r).unwrap(), degree_form_w1(&g, r));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_levels() {
        let f = SliceFunction::zeros(5, 3).unwrap();
        assert!(w2_sq(&f, 1).is_err());
        let f = SliceFunction::zeros(8, 3).unwrap();
        assert!(w2_sq(&f, 0).is_err());
        assert!(w2_sq(&f, 4).is_err());
        assert!(w_profile(&f, 0).is_err());
    }

    #[test]
    fn relabel_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for (n, k) in [(6, 3), (7, 3), (8, 4), (8, 2)] {
            let f = random_rational(&mut rng, n, k, 4);
            let mut pi: Vec<u32> = (0..n as u32).collect();
            pi.shuffle(&mut rng);
            let g = f.relabel(&pi).unwrap();
            for r in 1..=k {
                assert_eq!(w2_sq(&f, r).unwrap(), w2_sq(&g, r).unwrap());
            }
        }
    }

    #[test]
    fn triangle_and_sup_bounds() {
        // |W(f) - W(g)| <= W(f - g) <= ||f - g||_inf, all in squares.
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..30 {
            let (n, k) = [(6, 2), (6, 3), (7, 3)][rng.gen_range(0..3)];
            let f = random_rational(&mut rng, n, k, 3);
            let g = random_rational(&mut rng, n, k, 3);
            let d = f.sub(&g).unwrap();
            let sup = d.max_abs();
            for r in 1..=k {
                let (a, b, c) = (
                    w2_sq(&f, r).unwrap(),
                    w2_sq(&g, r).unwrap(),
                    w2_sq(&d, r).unwrap(),
                );
                let gap = &a + &b - &c;
                if gap.is_positive() {
                    assert!(&gap * &gap <= rat(4, 1) * &a * &b);
                }
                assert!(c <= &sup * &sup);
            }
        }
    }

    #[test]
    fn l1_dominates_squared_l2_for_bounded_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for i in 0..200 {
            let (n, k) = [(6, 2), (6, 3), (7, 3), (8, 3)][i % 4];
            let f = if i % 2 == 0 {
                Hypergraph::from_fn(n, k, |_| rng.gen_bool(0.4))
                    .unwrap()
                    .indicator()
            } else {
                SliceFunction::from_fn(n, k, |_| {
                    let q = rng.gen_range(1..=6);
                    rat(rng.gen_range(-q..=q), q)
                })
                .unwrap()
            };
            assert!(f.max_abs() <= Rational::one());
            for r in 1..=k {
                assert!(w1(&f, r).unwrap() >= w2_sq(&f, r).unwrap());
            }
        }
    }

    #[test]
    fn profiles() {
        let p = w_profile(&Hypergraph::complete(7, 3).unwrap().indicator(), 1).unwrap();
        assert!(p.all_levels_zero());
        let p = w_profile(&crate::hypergraph::fano().indicator(), 1).unwrap();
        assert!(!p.all_levels_zero());
        let (r, v) = p.max_level().unwrap();
        assert!(v.is_positive());
        assert_eq!(p.get(r), Some(v));
    }
}
