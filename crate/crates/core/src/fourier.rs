//! Orthogonal decomposition of functions on the slice `binom([n], k)`.
//!
//! For disjoint r-sequences `A = (a_1..a_r)`, `B = (b_1..b_r)` we write
//! `A ≺ B` when `b_1 < ... < b_r` and `a_i < b_i` for all `i`. A *top
//! sequence* is a `B` admitting at least one such `A`; the top sequences of
//! length `r` index an orthogonal basis of the degree-r harmonic part via
//! `χ_B = sum_{A ≺ B} prod_i (x_{a_i} - x_{b_i})`, evaluated at the 0/1
//! indicator of a k-set.
//!
//! Top sequences are stored with 0-based vertices. The weight
//! `c(B) = prod_i C(b_i - 2i + 2, 2)` is defined for 1-based `b_i` and `i`;
//! in 0-based terms the factor is `C(b_j - 2j + 1, 2)`.
//!
//! Inner products are expectations under the uniform measure on the slice.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use rayon::prelude::*;

use crate::combinat::{choose, common_denominator, subsets, Rational};
use crate::error::{Error, Result};
use crate::hypergraph::{slice_len, SliceFunction};
use crate::wvector::w2_sq;

/// Largest `C(n, k)` for which a dense basis is built.
pub const MAX_BASIS_SLICE: usize = 2_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TopSequence {
    b: Vec<u32>,
}

/// The ballot condition: with `s_0 = 1` and `s_i = -1` exactly at the
/// members of `B` (1-based positions), all partial sums stay positive. For
/// 0-based increasing `b` this reads `b_j >= 2j + 1`.
pub fn satisfies_ballot(b: &[u32]) -> bool {
    b.iter().enumerate().all(|(j, &v)| v as usize > 2 * j)
}

impl TopSequence {
    pub fn new(b: Vec<u32>, n: usize) -> Result<Self> {
        if b.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("{b:?} is not strictly increasing")));
        }
        if b.last().is_some_and(|&v| v as usize >= n) {
            return Err(Error::invalid(format!("{b:?} has a vertex >= n = {n}")));
        }
        if !satisfies_ballot(&b) {
            return Err(Error::invalid(format!("{b:?} has no predecessor")));
        }
        Ok(TopSequence { b })
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.b
    }

    pub fn level(&self) -> usize {
        self.b.len()
    }

    /// Every `A ≺ B`, each as the sequence `(a_1, ..., a_r)`.
    pub fn predecessors(&self) -> Vec<Vec<u32>> {
        predecessors(&self.b)
    }

    /// `(d(B), c(B))`: the number of predecessors and the norm weight.
    pub fn weights(&self) -> (u64, u64) {
        let d = self.predecessors().len() as u64;
        let c = self
            .b
            .iter()
            .enumerate()
            .map(|(j, &v)| choose(v as usize + 1 - 2 * j, 2))
            .product();
        (d, c)
    }
}

/// All sequences `A` with `A ≺ b` (`b` increasing, not necessarily top).
pub fn predecessors(b: &[u32]) -> Vec<Vec<u32>> {
    fn rec(b: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let i = cur.len();
        if i == b.len() {
            out.push(cur.clone());
            return;
        }
        for a in 0..b[i] {
            if b.contains(&a) || cur.contains(&a) {
                continue;
            }
            cur.push(a);
            rec(b, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(b, &mut Vec::with_capacity(b.len()), &mut out);
    out
}

/// `B_{n,r}` in colex order.
pub fn top_sequences(n: usize, r: usize) -> Result<Vec<TopSequence>> {
    if n < 2 * r {
        return Err(Error::invalid(format!(
            "need n >= 2r, got n = {n}, r = {r}"
        )));
    }
    Ok(subsets(n, r)
        .filter(|b| satisfies_ballot(b))
        .map(|b| TopSequence { b })
        .collect())
}

/// `prod_i (x_{a_i} - x_{b_i})` at the indicator of `set`.
pub fn chi_eval(a: &[u32], b: &[u32], set: &[u32]) -> Result<i8> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch("sequences of different length".into()));
    }
    let mut all: Vec<u32> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid(
            "sequences must be disjoint and repetition-free",
        ));
    }
    let mut prod = 1i8;
    for (&x, &y) in a.iter().zip(b) {
        prod *= set.contains(&x) as i8 - set.contains(&y) as i8;
        if prod == 0 {
            break;
        }
    }
    Ok(prod)
}

fn chi_values(preds: &[Vec<u32>], b: &[u32], n: usize, k: usize) -> Vec<i64> {
    subsets(n, k)
        .map(|set| {
            let mask = set.iter().fold(0u64, |m, &v| m | 1u64 << v);
            let bit = |v: u32| (mask >> v & 1) as i64;
            preds
                .iter()
                .map(|a| {
                    let mut prod = 1i64;
                    for (&x, &y) in a.iter().zip(b) {
                        prod *= bit(x) - bit(y);
                        if prod == 0 {
                            break;
                        }
                    }
                    prod
                })
                .sum()
        })
        .collect()
}

fn check_basis_shape(n: usize, k: usize) -> Result<()> {
    if n < 2 * k {
        return Err(Error::invalid(format!(
            "need n >= 2k, got n = {n}, k = {k}"
        )));
    }
    if n > 64 {
        return Err(Error::invalid("slice basis supports at most 64 vertices"));
    }
    let len = slice_len(n, k)?;
    if len > MAX_BASIS_SLICE {
        return Err(Error::guard(
            format!("dense basis on C({n}, {k})"),
            (len as u128) * (len as u128),
            (MAX_BASIS_SLICE as u128) * (MAX_BASIS_SLICE as u128),
        ));
    }
    Ok(())
}

/// `χ_B` as a function on `binom([n], k)`.
pub fn chi_b(b: &TopSequence, n: usize, k: usize) -> Result<SliceFunction> {
    if b.level() > k {
        return Err(Error::invalid(format!(
            "level {} exceeds k = {k}",
            b.level()
        )));
    }
    if b.b.last().is_some_and(|&v| v as usize >= n) || n > 64 {
        return Err(Error::invalid("top sequence does not fit the slice"));
    }
    slice_len(n, k)?;
    let vals = chi_values(&b.predecessors(), &b.b, n, k);
    SliceFunction::new(n, k, vals.into_iter().map(int).collect())
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `‖χ_r‖² = 2^r C(n - 2r, k - r) / C(n, k)`.
pub fn chi_r_norm_sq(n: usize, k: usize, r: usize) -> Rational {
    Rational::new(
        BigInt::from(choose(n - 2 * r, k - r)) << r,
        BigInt::from(choose(n, k)),
    )
}

#[derive(Debug, Clone)]
pub struct BasisElement {
    pub seq: TopSequence,
    /// `χ_B` on the slice, colex order.
    pub values: Vec<i64>,
    /// `sum_R χ_B(R)^2`, i.e. `C(n, k) ‖χ_B‖²`.
    pub sum_sq: i128,
}

/// The full basis `{χ_B : B ∈ B_{n,r}, 0 <= r <= k}` of functions on the slice.
#[derive(Debug, Clone)]
pub struct SliceBasis {
    n: usize,
    k: usize,
    levels: Vec<Vec<BasisElement>>,
}

type BasisCache = Mutex<HashMap<(usize, usize), Arc<SliceBasis>>>;

static BASIS_CACHE: Lazy<BasisCache> = Lazy::new(|| Mutex::new(HashMap::new()));

impl SliceBasis {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        check_basis_shape(n, k)?;
        let mut levels = Vec::with_capacity(k + 1);
        for r in 0..=k {
            let seqs = top_sequences(n, r)?;
            let elems = seqs
                .into_par_iter()
                .map(|seq| {
                    let values = chi_values(&seq.predecessors(), &seq.b, n, k);
                    let sum_sq = values.iter().map(|&v| (v as i128) * (v as i128)).sum();
                    BasisElement {
                        seq,
                        values,
                        sum_sq,
                    }
                })
                .collect();
            levels.push(elems);
        }
        Ok(SliceBasis { n, k, levels })
    }

    /// Cached per `(n, k)`.
    pub fn shared(n: usize, k: usize) -> Result<Arc<SliceBasis>> {
        if let Some(b) = BASIS_CACHE.lock().expect("cache lock").get(&(n, k)) {
            return Ok(Arc::clone(b));
        }
        let basis = Arc::new(SliceBasis::new(n, k)?);
        BASIS_CACHE
            .lock()
            .expect("cache lock")
            .entry((n, k))
            .or_insert_with(|| Arc::clone(&basis));
        Ok(basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn level(&self, r: usize) -> &[BasisElement] {
        &self.levels[r]
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = &BasisElement> {
        self.levels.iter().flatten()
    }

    /// Projection of `f` onto the level-r span.
    fn component(&self, nums: &[BigInt], den: &BigInt, r: usize) -> Vec<Rational> {
        let elems = &self.levels[r];
        // coefficient_B = <F, χ_B> / (den * sum χ_B²), with F = den * f.
        let coefs: Vec<Rational> = elems
            .iter()
            .map(|e| {
                let dot: BigInt = nums
                    .iter()
                    .zip(&e.values)
                    .filter(|(_, &c)| c != 0)
                    .map(|(x, &c)| x * c)
                    .sum();
                Rational::new(dot, den * BigInt::from(e.sum_sq))
            })
            .collect();
        let mut lcm = BigInt::one();
        for c in &coefs {
            lcm = lcm.lcm(c.denom());
        }
        let scaled: Vec<BigInt> = coefs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let lcm = Rational::from_integer(lcm);
        (0..nums.len())
            .map(|i| {
                let v: BigInt = scaled
                    .iter()
                    .zip(elems)
                    .filter(|(s, e)| e.values[i] != 0 && !s.is_zero())
                    .map(|(s, e)| s * e.values[i])
                    .sum();
                Rational::from_integer(v) / &lcm
            })
            .collect()
    }

    pub fn decompose(&self, f: &SliceFunction) -> Result<Decomposition> {
        if f.n() != self.n || f.k() != self.k {
            return Err(Error::ShapeMismatch(format!(
                "function on ({}, {}) for basis on ({}, {})",
                f.n(),
                f.k(),
                self.n,
                self.k
            )));
        }
        let (nums, den) = common_denominator(f.values());
        let components = (0..=self.k)
            .into_par_iter()
            .map(|r| SliceFunction::new(self.n, self.k, self.component(&nums, &den, r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Decomposition {
            source: f.clone(),
            components,
        })
    }
}

/// `f = f^{=0} + ... + f^{=k}` with mutually orthogonal components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub source: SliceFunction,
    pub components: Vec<SliceFunction>,
}

impl Decomposition {
    pub fn component(&self, r: usize) -> &SliceFunction {
        &self.components[r]
    }

    /// `‖f^{=r}‖²` for each level.
    pub fn norms_sq(&self) -> Vec<Rational> {
        self.components.iter().map(norm_sq).collect()
    }

    /// Sum of the components of level `< ell`.
    pub fn low_part(&self, ell: usize) -> SliceFunction {
        let mut acc = SliceFunction::zeros(self.source.n(), self.source.k())
            .expect("shape already validated");
        for c in &self.components[..ell.min(self.components.len())] {
            acc = acc.add(c).expect("same shape");
        }
        acc
    }

    pub fn reconstruct(&self) -> SliceFunction {
        self.low_part(self.components.len())
    }
}

pub fn decompose(f: &SliceFunction) -> Result<Decomposition> {
    SliceBasis::shared(f.n(), f.k())?.decompose(f)
}

/// `f~ = sum_{r < ell} f^{=r}`: the part of `f` whose levels `ell..=k` vanish.
pub fn truncate(f: &SliceFunction, ell: usize) -> Result<SliceFunction> {
    if ell < 1 || ell > f.k() {
        return Err(Error::invalid(format!("ell = {ell} outside 1..={}", f.k())));
    }
    Ok(decompose(f)?.low_part(ell))
}

/// Distance from `f` to its truncation, with the bounds it must satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationReport {
    pub truncated: SliceFunction,
    /// `ε² = max_{l <= r <= k} (W^r(f))²`.
    pub eps_sq: Rational,
    /// `‖f - f~‖²`.
    pub dist_sq: Rational,
    /// `#{R : (f - f~)(R)^4 > ε²}`, i.e. `|f - f~| > ε^{1/2}`.
    pub exceed_count: usize,
    /// `‖f - f~‖² <= 5^k ε²`.
    pub l2_holds: bool,
    /// `count <= 5^{k/2} ε^{1/2} C(n, k)`, compared as
    /// `(count / C(n, k))^4 <= 5^{2k} ε²`.
    pub count_holds: bool,
}

pub fn truncation_report(f: &SliceFunction, ell: usize) -> Result<TruncationReport> {
    let truncated = truncate(f, ell)?;
    let mut eps_sq = Rational::zero();
    for r in ell..=f.k() {
        eps_sq = eps_sq.max(w2_sq(f, r)?);
    }
    let diff = f.sub(&truncated)?;
    let dist_sq = norm_sq(&diff);
    let exceed_count = diff
        .values()
        .iter()
        .filter(|v| {
            let sq = *v * *v;
            &sq * &sq > eps_sq
        })
        .count();
    let five_k = Rational::from_integer(BigInt::from(5u32).pow(f.k() as u32));
    let l2_holds = dist_sq <= &five_k * &eps_sq;
    let frac = Rational::new(BigInt::from(exceed_count), BigInt::from(f.len()));
    let frac_sq = &frac * &frac;
    let count_holds = &frac_sq * &frac_sq <= &five_k * &five_k * &eps_sq;
    Ok(TruncationReport {
        truncated,
        eps_sq,
        dist_sq,
        exceed_count,
        l2_holds,
        count_holds,
    })
}

/// `E[f g]` under the uniform measure on the slice.
pub fn inner(f: &SliceFunction, g: &SliceFunction) -> Result<Rational> {
    f.same_shape(g)?;
    let sum: Rational = f.values().iter().zip(g.values()).map(|(a, b)| a * b).sum();
    Ok(sum / Rational::from_integer(BigInt::from(f.len())))
}

pub fn mean(f: &SliceFunction) -> Rational {
    let sum: Rational = f.values().iter().sum();
    sum / Rational::from_integer(BigInt::from(f.len()))
}

pub fn norm_sq(f: &SliceFunction) -> Rational {
    inner(f, f).expect("same shape")
}

pub fn variance(f: &SliceFunction) -> Rational {
    let m = mean(f);
    norm_sq(f) - &m * &m
}

/// `φ_{A,B}` at top level `k` with `A` the least predecessor of each
/// `B ∈ B_{n,k}`: `(-1)^{|R ∩ B|}` when `R` meets every pair once, else 0.
pub fn echelon_family(n: usize, k: usize) -> Result<Vec<SliceFunction>> {
    top_sequences(n, k)?
        .into_iter()
        .map(|b| {
            let a = least_predecessor(b.as_slice());
            let vals = chi_values(std::slice::from_ref(&a), b.as_slice(), n, k);
            SliceFunction::new(n, k, vals.into_iter().map(int).collect())
        })
        .collect()
}

/// Greedy choice of the smallest available `a_i < b_i`; exists for top `b`.
pub fn least_predecessor(b: &[u32]) -> Vec<u32> {
    let mut a = Vec::with_capacity(b.len());
    for &bi in b {
        let pick = (0..bi)
            .find(|v| !b.contains(v) && !a.contains(v))
            .expect("top sequence has a predecessor");
        a.push(pick);
    }
    a
}

/// A function `λ` on `binom([n], ell - 1)` with
/// `χ_{A,B}(R) = sum_{S ⊂ R, |S| = ell - 1} λ(S)` on `binom([n], k)`, for
/// `r = |A| <= ell - 1 <= k`: `C(k - r, ell - 1 - r)^{-1} (-1)^{|S ∩ B|}`
/// when `S` meets every pair once, else 0.
pub fn chi_preimage(a: &[u32], b: &[u32], n: usize, k: usize, ell: usize) -> Result<SliceFunction> {
    let r = a.len();
    if b.len() != r || ell < 1 || r > ell - 1 || ell - 1 > k {
        return Err(Error::invalid("need |A| = |B| <= ell - 1 <= k"));
    }
    let scale = Rational::new(BigInt::one(), BigInt::from(choose(k - r, ell - 1 - r)));
    let pairs: Vec<(u32, u32)> = a.iter().copied().zip(b.iter().copied()).collect();
    SliceFunction::from_fn(n, ell - 1, |s| {
        let mut sign = 1i64;
        for &(x, y) in &pairs {
            match (s.contains(&x), s.contains(&y)) {
                (true, false) => {}
                (false, true) => sign = -sign,
                _ => return Rational::zero(),
            }
        }
        &scale * int(sign)
    })
}
