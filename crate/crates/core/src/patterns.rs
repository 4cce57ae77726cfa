//! Bipartite patterns: two parts `V_1 = {0..k-1}`, `V_2 = {k..2k-1}` and a
//! k-set is an edge iff `α_i = 1` for `i = |R ∩ V_1|`.
//!
//! W levels are computed on the minimal realization with `2k` vertices, the
//! smallest vertex count for which every level up to `k` is defined.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::combinat::{binomial, Rational};
use crate::error::{Error, Result};
use crate::gk::AlphaVector;
use crate::hypergraph::{block_profile, build_pattern, compositions, Hypergraph, PatternSpec};
use crate::inclusion::solve_h;
use crate::wvector::WProfile;

pub const MAX_SCAN_K: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartitePattern {
    alpha: AlphaVector,
    realized: Hypergraph,
}

impl BipartitePattern {
    pub fn new(alpha: AlphaVector) -> Result<Self> {
        let spec = PatternSpec::bipartite(alpha.bits())?;
        let realized = build_pattern(&spec)?;
        Ok(BipartitePattern { alpha, realized })
    }

    pub fn k(&self) -> usize {
        self.alpha.m()
    }

    pub fn alpha(&self) -> &AlphaVector {
        &self.alpha
    }

    pub fn realized(&self) -> &Hypergraph {
        &self.realized
    }
}

/// One row of a pattern scan: the squared weights of levels `k-g..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub alpha: AlphaVector,
    pub levels: BTreeMap<usize, Rational>,
    pub vanishing: bool,
}

fn check_scan(k: usize, g: usize) -> Result<()> {
    if !(2..=MAX_SCAN_K).contains(&k) {
        return Err(Error::invalid(format!(
            "pattern scan needs 2 <= k <= {MAX_SCAN_K}, got {k}"
        )));
    }
    if g >= k {
        return Err(Error::invalid(format!("need g < k, got g = {g}, k = {k}")));
    }
    Ok(())
}

/// Every `α ∈ {0,1}^{k+1}` with its levels `k-g..=k`, in increasing mask order.
pub fn scan_bipartite_table(k: usize, g: usize) -> Result<Vec<ScanRow>> {
    check_scan(k, g)?;
    (0u64..1 << (k + 1))
        .into_par_iter()
        .map(|mask| {
            let alpha = AlphaVector::from_mask(mask, k);
            let pattern = BipartitePattern::new(alpha.clone())?;
            let profile = WProfile::compute(&pattern.realized.indicator(), k - g..=k)?;
            let vanishing = profile.all_levels_zero();
            Ok(ScanRow {
                alpha,
                levels: profile.levels().clone(),
                vanishing,
            })
        })
        .collect()
}

/// The `α` whose pattern has `W^r = 0` for all `r ∈ [k-g, k]`.
pub fn scan_bipartite(k: usize, g: usize) -> Result<Vec<AlphaVector>> {
    Ok(scan_bipartite_table(k, g)?
        .into_iter()
        .filter(|row| row.vanishing)
        .map(|row| row.alpha)
        .collect())
}

/// With `α_i = sum_j C(i, j) C(k - i, l - 1 - j) β_j`, the residuals
/// `sum_i (-1)^i C(r, i) α_i` for `r = l..=k`.
pub fn claim46_residuals(k: usize, ell: usize, beta: &[Rational]) -> Result<Vec<Rational>> {
    if ell < 1 || ell > k {
        return Err(Error::invalid(format!(
            "need 1 <= l <= k, got l = {ell}, k = {k}"
        )));
    }
    if beta.len() != ell {
        return Err(Error::ShapeMismatch(format!(
            "beta has length {}, expected {ell}",
            beta.len()
        )));
    }
    let c = |n: usize, r: usize| -> Rational {
        Rational::from_integer(BigInt::from(binomial(n as u64, r as i64)))
    };
    let alpha: Vec<Rational> = (0..=k)
        .map(|i| {
            beta.iter()
                .enumerate()
                .filter(|&(j, _)| j <= i && ell - 1 - j <= k - i)
                .map(|(j, b)| c(i, j) * c(k - i, ell - 1 - j) * b)
                .sum()
        })
        .collect();
    Ok((ell..=k)
        .map(|r| {
            (0..=r)
                .map(|i| {
                    let t = c(r, i) * &alpha[i];
                    if i % 2 == 0 {
                        t
                    } else {
                        -t
                    }
                })
                .sum()
        })
        .collect())
}

/// Whether the unique `h` with `1_F = M^k_{l-1} h` depends only on
/// `(|S ∩ V_1|, |S ∩ V_2|)`. Errors when no such `h` exists.
pub fn profile_symmetry(pattern: &BipartitePattern, ell: usize) -> Result<bool> {
    let k = pattern.k();
    let h = solve_h(&pattern.realized.indicator(), ell)?.ok_or_else(|| {
        Error::invalid(format!(
            "pattern {} is not in the image at l = {ell}",
            pattern.alpha
        ))
    })?;
    let mut class_value: BTreeMap<Vec<u32>, &Rational> = BTreeMap::new();
    for (s, v) in crate::combinat::subsets(2 * k, ell - 1).zip(h.values()) {
        let class = block_profile(&s, 2, k);
        if *class_value.entry(class).or_insert(v) != v {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The pattern induced on the parts other than `part`: a `(k, t-1, s)`
/// pattern whose profile keeps the compositions avoiding `part`.
pub fn delete_part(spec: &PatternSpec, part: usize) -> Result<PatternSpec> {
    let (k, t, s) = (spec.k(), spec.parts(), spec.part_size());
    if part >= t || t < 2 {
        return Err(Error::invalid(format!("cannot delete part {part} of {t}")));
    }
    let profile = compositions(k, t - 1, s)
        .into_iter()
        .map(|c| {
            let mut full = c.clone();
            full.insert(part, 0);
            (c, spec.profile()[&full])
        })
        .collect();
    PatternSpec::new(k, t - 1, s, profile)
}

/// True iff both constant vectors are the only members of `alphas`.
pub fn constants_only(alphas: &[AlphaVector]) -> bool {
    alphas.iter().all(AlphaVector::is_constant)
}
