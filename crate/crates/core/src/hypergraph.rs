//! k-uniform hypergraphs, rational-valued functions on the slice, patterns
//! and the small explicit constructions (designs, multipartite hosts,
//! cliques with isolated vertices).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinat::{
    checked_choose, choose, next_permutation, rank_colex, subsets, unrank_colex, BinomialTable,
    KSubset, Rational,
};
use crate::error::{Error, Result};

/// Largest slice `C(n, k)` we are willing to store densely.
pub const MAX_SLICE_LEN: u64 = 10_000_000;

/// Checks `k <= n` and `C(n, k) <= MAX_SLICE_LEN`, returning `C(n, k)`.
pub fn slice_len(n: usize, k: usize) -> Result<usize> {
    if k > n {
        return Err(Error::invalid(format!(
            "arity {k} exceeds vertex count {n}"
        )));
    }
    let len = checked_choose(n, k).unwrap_or(u64::MAX);
    if len > MAX_SLICE_LEN {
        return Err(Error::guard(
            format!("dense slice C({n}, {k})"),
            len as u128,
            MAX_SLICE_LEN as u128,
        ));
    }
    Ok(len as usize)
}

/// Fixed-length bitset over colex ranks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    len: usize,
    words: Vec<u64>,
}

impl EdgeSet {
    pub fn new(len: usize) -> Self {
        EdgeSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = EdgeSet {
            len,
            words: vec![u64::MAX; len.div_ceil(64)],
        };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersection_count(&self, other: &EdgeSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn complement(&self) -> EdgeSet {
        let mut out = EdgeSet {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.trim();
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A k-uniform hypergraph on the vertex set `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: EdgeSet,
}

impl Hypergraph {
    pub fn empty(n: usize, k: usize) -> Result<Self> {
        let len = slice_len(n, k)?;
        Ok(Hypergraph {
            n,
            k,
            edges: EdgeSet::new(len),
        })
    }

    pub fn complete(n: usize, k: usize) -> Result<Self> {
        let len = slice_len(n, k)?;
        Ok(Hypergraph {
            n,
            k,
            edges: EdgeSet::full(len),
        })
    }

    /// Builds from explicit edges; duplicates collapse.
    pub fn from_edges<I>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut g = Hypergraph::empty(n, k)?;
        for e in edges {
            let s = KSubset::new(e, n)?;
            if s.arity() != k {
                return Err(Error::invalid(format!(
                    "edge {s} has {} vertices, expected {k}",
                    s.arity()
                )));
            }
            g.edges.insert(rank_colex(&s) as usize);
        }
        Ok(g)
    }

    pub(crate) fn from_edge_set(n: usize, k: usize, edges: EdgeSet) -> Self {
        debug_assert_eq!(edges.len() as u64, choose(n, k));
        Hypergraph { n, k, edges }
    }

    pub fn from_fn(n: usize, k: usize, mut is_edge: impl FnMut(&[u32]) -> bool) -> Result<Self> {
        let mut g = Hypergraph::empty(n, k)?;
        for (i, s) in subsets(n, k).enumerate() {
            if is_edge(&s) {
                g.edges.insert(i);
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_set(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.count()
    }

    pub fn contains(&self, edge: &KSubset) -> bool {
        edge.arity() == self.k
            && edge
                .as_slice()
                .last()
                .is_none_or(|&v| (v as usize) < self.n)
            && self.edges.contains(rank_colex(edge) as usize)
    }

    /// Edges in colex order.
    pub fn edges(&self) -> Vec<KSubset> {
        self.edges
            .iter()
            .map(|i| unrank_colex(i as u64, self.n, self.k).expect("rank in range"))
            .collect()
    }

    pub fn indicator(&self) -> SliceFunction {
        let values = (0..self.edges.len())
            .map(|i| {
                if self.edges.contains(i) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        SliceFunction {
            n: self.n,
            k: self.k,
            values,
        }
    }

    /// `e(G) / C(n, k)`; zero for the degenerate empty slice.
    pub fn density(&self) -> Rational {
        if self.edges.is_empty() {
            return Rational::zero();
        }
        Rational::new(
            BigInt::from(self.edge_count()),
            BigInt::from(self.edges.len()),
        )
    }

    pub fn is_homogeneous(&self) -> bool {
        let e = self.edge_count();
        e == 0 || e == self.edges.len()
    }

    pub fn complement(&self) -> Hypergraph {
        Hypergraph {
            n: self.n,
            k: self.k,
            edges: self.edges.complement(),
        }
    }

    /// The sub-hypergraph induced on `vertices`, relabelled `0..|U|` in
    /// increasing order of the original labels.
    pub fn induced(&self, vertices: &[u32]) -> Result<Hypergraph> {
        let u = checked_vertex_set(vertices, self.n)?;
        if u.len() < self.k {
            return Err(Error::invalid(format!(
                "induced set has {} vertices, need at least k = {}",
                u.len(),
                self.k
            )));
        }
        let table = BinomialTable::new(self.n);
        let mut out = Hypergraph::empty(u.len(), self.k)?;
        let mut buf = vec![0u32; self.k];
        for (i, local) in subsets(u.len(), self.k).enumerate() {
            for (b, &j) in buf.iter_mut().zip(&local) {
                *b = u[j as usize];
            }
            if self.edges.contains(table.rank_sorted(&buf)) {
                out.edges.insert(i);
            }
        }
        Ok(out)
    }

    /// Image under the vertex map `v -> perm[v]`. This is a left action:
    /// relabelling by `pi` then by `sigma` equals relabelling by `sigma . pi`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Hypergraph> {
        check_permutation(perm, self.n)?;
        let table = BinomialTable::new(self.n);
        let mut out = Hypergraph::empty(self.n, self.k)?;
        let mut buf = vec![0u32; self.k];
        for e in self.edges.iter() {
            let s = unrank_colex(e as u64, self.n, self.k)?;
            for (b, &v) in buf.iter_mut().zip(s.as_slice()) {
                *b = perm[v as usize];
            }
            buf.sort_unstable();
            out.edges.insert(table.rank_sorted(&buf));
        }
        Ok(out)
    }

    /// True iff every r-subset of the vertices lies in exactly `lambda` edges.
    pub fn is_block_design(&self, r: usize, lambda: u64) -> Result<bool> {
        if r > self.k {
            return Err(Error::invalid(format!("r = {r} exceeds k = {}", self.k)));
        }
        Ok(self.r_set_degrees(r)?.iter().all(|&d| d == lambda))
    }

    /// For each r-subset (colex order), the number of edges containing it.
    pub fn r_set_degrees(&self, r: usize) -> Result<Vec<u64>> {
        if r > self.k {
            return Err(Error::invalid(format!("r = {r} exceeds k = {}", self.k)));
        }
        let len = slice_len(self.n, r)?;
        let table = BinomialTable::new(self.n);
        let mut counts = vec![0u64; len];
        let mut buf = vec![0u32; r];
        for e in self.edges.iter() {
            let s = unrank_colex(e as u64, self.n, self.k)?;
            for pos in subsets(self.k, r) {
                for (b, &p) in buf.iter_mut().zip(&pos) {
                    *b = s.as_slice()[p as usize];
                }
                counts[table.rank_sorted(&buf)] += 1;
            }
        }
        Ok(counts)
    }

    /// Lexicographically least sorted edge-rank list over all relabellings.
    /// Exhaustive over `n!` permutations, so limited to `n <= 8`.
    pub fn canonical_form(&self) -> Result<Vec<usize>> {
        if self.n > 8 {
            return Err(Error::guard(
                "canonical form permutation scan",
                crate::combinat::factorial(self.n)
                    .try_into()
                    .unwrap_or(u128::MAX),
                40_320,
            ));
        }
        let mut perm: Vec<u32> = (0..self.n as u32).collect();
        let mut best: Option<Vec<usize>> = None;
        loop {
            let img: Vec<usize> = self.relabel(&perm)?.edges.iter().collect();
            if best.as_ref().is_none_or(|b| img < *b) {
                best = Some(img);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(best.unwrap_or_default())
    }
}

fn checked_vertex_set(vertices: &[u32], n: usize) -> Result<Vec<u32>> {
    let mut u = vertices.to_vec();
    u.sort_unstable();
    u.dedup();
    if u.len() != vertices.len() {
        return Err(Error::invalid("vertex set has repeated entries"));
    }
    if let Some(&v) = u.last() {
        if v as usize >= n {
            return Err(Error::invalid(format!("vertex {v} not below n = {n}")));
        }
    }
    Ok(u)
}

pub fn check_permutation(perm: &[u32], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p as usize >= n || std::mem::replace(&mut seen[p as usize], true) {
            return Err(Error::invalid("not a permutation"));
        }
    }
    Ok(())
}

/// A rational-valued function on `binom([n], k)`, stored densely by colex rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SliceFunction {
    n: usize,
    k: usize,
    values: Vec<Rational>,
}

impl SliceFunction {
    pub fn new(n: usize, k: usize, values: Vec<Rational>) -> Result<Self> {
        let len = slice_len(n, k)?;
        if values.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "{} values for C({n}, {k}) = {len} sets",
                values.len()
            )));
        }
        Ok(SliceFunction { n, k, values })
    }

    pub fn zeros(n: usize, k: usize) -> Result<Self> {
        Self::constant(n, k, Rational::zero())
    }

    pub fn constant(n: usize, k: usize, c: Rational) -> Result<Self> {
        let len = slice_len(n, k)?;
        Ok(SliceFunction {
            n,
            k,
            values: vec![c; len],
        })
    }

    pub fn from_fn(n: usize, k: usize, mut f: impl FnMut(&[u32]) -> Rational) -> Result<Self> {
        slice_len(n, k)?;
        let values = subsets(n, k).map(|s| f(&s)).collect();
        Ok(SliceFunction { n, k, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn at_rank(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn get(&self, s: &KSubset) -> &Rational {
        &self.values[rank_colex(s) as usize]
    }

    pub fn same_shape(&self, other: &SliceFunction) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::ShapeMismatch(format!(
                "slice ({}, {}) vs ({}, {})",
                self.n, self.k, other.n, other.k
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SliceFunction) -> Result<SliceFunction> {
        self.same_shape(other)?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &SliceFunction) -> Result<SliceFunction> {
        self.same_shape(other)?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    fn zip_map(
        &self,
        other: &SliceFunction,
        op: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Self {
        SliceFunction {
            n: self.n,
            k: self.k,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| op(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> SliceFunction {
        SliceFunction {
            n: self.n,
            k: self.k,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> Rational {
        self.values
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_boolean(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    /// The hypergraph of sets where the value is 1, if the function is 0/1.
    pub fn to_hypergraph(&self) -> Result<Hypergraph> {
        if !self.is_boolean() {
            return Err(Error::invalid("slice function is not 0/1-valued"));
        }
        let mut edges = EdgeSet::new(self.values.len());
        for (i, v) in self.values.iter().enumerate() {
            if v.is_one() {
                edges.insert(i);
            }
        }
        Ok(Hypergraph::from_edge_set(self.n, self.k, edges))
    }

    /// Restriction to `binom(U, k)`, relabelled `0..|U|` in increasing order.
    pub fn restrict(&self, vertices: &[u32]) -> Result<SliceFunction> {
        let u = checked_vertex_set(vertices, self.n)?;
        if u.len() < self.k {
            return Err(Error::invalid("restriction set smaller than k"));
        }
        let table = BinomialTable::new(self.n);
        let mut buf = vec![0u32; self.k];
        let values = subsets(u.len(), self.k)
            .map(|local| {
                for (b, &j) in buf.iter_mut().zip(&local) {
                    *b = u[j as usize];
                }
                self.values[table.rank_sorted(&buf)].clone()
            })
            .collect();
        Ok(SliceFunction {
            n: u.len(),
            k: self.k,
            values,
        })
    }

    /// The function `g` with `g(perm(R)) = f(R)`.
    pub fn relabel(&self, perm: &[u32]) -> Result<SliceFunction> {
        check_permutation(perm, self.n)?;
        let table = BinomialTable::new(self.n);
        let mut values = vec![Rational::zero(); self.values.len()];
        let mut buf = vec![0u32; self.k];
        for (i, s) in subsets(self.n, self.k).enumerate() {
            for (b, &v) in buf.iter_mut().zip(&s) {
                *b = perm[v as usize];
            }
            buf.sort_unstable();
            values[table.rank_sorted(&buf)] = self.values[i].clone();
        }
        Ok(SliceFunction {
            n: self.n,
            k: self.k,
            values,
        })
    }
}

/// Intersection profile `(|S ∩ V_1|, ..., |S ∩ V_t|)` for parts of size `s`
/// laid out as consecutive blocks.
pub fn block_profile(set: &[u32], t: usize, s: usize) -> Vec<u32> {
    let mut c = vec![0u32; t];
    for &v in set {
        c[v as usize / s] += 1;
    }
    c
}

/// All compositions `(c_1, ..., c_t)` of `k` with `0 <= c_i <= s`, in
/// lexicographic order.
pub fn compositions(k: usize, t: usize, s: usize) -> Vec<Vec<u32>> {
    fn rec(rest: usize, t: usize, s: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == t {
            if rest <= s {
                cur.push(rest as u32);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for c in 0..=rest.min(s) {
            cur.push(c as u32);
            rec(rest - c, t, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if t > 0 {
        rec(k, t, s, &mut Vec::with_capacity(t), &mut out);
    }
    out
}

/// A `(k, t, s)`-pattern: `t` parts of size `s`, edges decided by the
/// intersection profile alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSpec {
    k: usize,
    t: usize,
    s: usize,
    profile: BTreeMap<Vec<u32>, bool>,
}

impl PatternSpec {
    pub fn new(k: usize, t: usize, s: usize, profile: BTreeMap<Vec<u32>, bool>) -> Result<Self> {
        if k < 1 || t < 1 || t * s < k {
            return Err(Error::invalid(format!(
                "pattern needs k, t >= 1 and t*s >= k; got k={k}, t={t}, s={s}"
            )));
        }
        let comps = compositions(k, t, s);
        if profile.len() != comps.len() || comps.iter().any(|c| !profile.contains_key(c)) {
            return Err(Error::invalid(
                "profile must be defined on exactly the admissible compositions",
            ));
        }
        Ok(PatternSpec { k, t, s, profile })
    }

    pub fn from_fn(k: usize, t: usize, s: usize, f: impl Fn(&[u32]) -> bool) -> Result<Self> {
        let profile = compositions(k, t, s)
            .into_iter()
            .map(|c| {
                let b = f(&c);
                (c, b)
            })
            .collect();
        Self::new(k, t, s, profile)
    }

    /// The `(k, 2, k)` pattern with `profile(i, k - i) = alpha[i]`.
    pub fn bipartite(alpha: &[bool]) -> Result<Self> {
        if alpha.len() < 2 {
            return Err(Error::invalid("alpha needs length k + 1 >= 2"));
        }
        let k = alpha.len() - 1;
        Self::from_fn(k, 2, k, |c| alpha[c[0] as usize])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn parts(&self) -> usize {
        self.t
    }

    pub fn part_size(&self) -> usize {
        self.s
    }

    pub fn profile(&self) -> &BTreeMap<Vec<u32>, bool> {
        &self.profile
    }
}

/// Realizes a pattern on `t * s` vertices with consecutive blocks as parts.
pub fn build_pattern(spec: &PatternSpec) -> Result<Hypergraph> {
    let (k, t, s) = (spec.k, spec.t, spec.s);
    Hypergraph::from_fn(t * s, k, |set| spec.profile[&block_profile(set, t, s)])
}

/// Part sizes of `[n]` split into `parts` near-equal blocks, larger first.
pub fn balanced_parts(n: usize, parts: usize) -> Vec<usize> {
    (0..parts)
        .map(|i| n / parts + usize::from(i < n % parts))
        .collect()
}

/// The host of the zero-discrepancy pair: `[n]` split into `k - 1`
/// near-equal consecutive blocks (larger first); edges are the k-sets
/// meeting every block.
pub fn multipartite_h(n: usize, k: usize) -> Result<Hypergraph> {
    if k < 3 || n < k {
        return Err(Error::invalid(format!(
            "need n >= k >= 3, got n={n}, k={k}"
        )));
    }
    let sizes = balanced_parts(n, k - 1);
    let mut part_of = Vec::with_capacity(n);
    for (p, &sz) in sizes.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(p, sz));
    }
    Hypergraph::from_fn(n, k, |set| {
        let mut hit = vec![false; k - 1];
        for &v in set {
            hit[part_of[v as usize]] = true;
        }
        hit.iter().all(|&h| h)
    })
}

/// `H_m`: complete k-graph on `0..m` plus `n - m` isolated vertices.
pub fn clique_plus_isolated(n: usize, m: usize, k: usize) -> Result<Hypergraph> {
    if m < k || m > n {
        return Err(Error::invalid(format!(
            "need k <= m <= n, got k={k}, m={m}, n={n}"
        )));
    }
    Hypergraph::from_fn(n, k, |set| set.iter().all(|&v| (v as usize) < m))
}

pub const FANO_LINES: [[u32; 3]; 7] = [
    [0, 1, 2],
    [0, 3, 4],
    [0, 5, 6],
    [1, 3, 5],
    [1, 4, 6],
    [2, 3, 6],
    [2, 4, 5],
];

/// The Fano plane, the (7, 3, 2, 1) design.
pub fn fano() -> Hypergraph {
    Hypergraph::from_edges(7, 3, FANO_LINES.iter().map(|l| l.to_vec())).expect("valid lines")
}
