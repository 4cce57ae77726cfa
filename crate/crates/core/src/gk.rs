//! The binary system `sum_{i<=r} (-1)^i C(r,i) α_i = 0`, `m - g <= r <= m`,
//! over `α ∈ {0,1}^{m+1}`, and the numbers built from it.
//!
//! `Γ(m)` is the least `g` for which only the two constant vectors solve the
//! system, `g(k) = max_{2<=m<=k} Γ(m)`, and `G(k)` is the prime-gap bound.
//!
//! The exhaustive scan keeps the top residual as an `i64`: every residual is
//! bounded by `sum_i C(r, i) = 2^r <= 2^28`, so no intermediate value comes
//! near the 64-bit range. The scan is checked against the big-integer
//! [`system_residual`] in tests.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use rayon::prelude::*;

use crate::combinat::{binomial, choose, is_prime, largest_prime_leq};
use crate::error::{Error, Result};

/// Largest `m` handled by the exhaustive scan.
pub const MAX_EXACT_M: usize = 28;

/// Number of high bits fixed per parallel chunk.
const PREFIX_BITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlphaVector {
    bits: Vec<bool>,
}

impl AlphaVector {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::invalid("alpha vector must have at least one entry"));
        }
        Ok(AlphaVector { bits })
    }

    /// Bit `i` of `mask` is `α_i`.
    pub fn from_mask(mask: u64, m: usize) -> Self {
        AlphaVector {
            bits: (0..=m).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn constant(m: usize, value: bool) -> Self {
        AlphaVector {
            bits: vec![value; m + 1],
        }
    }

    pub fn m(&self) -> usize {
        self.bits.len() - 1
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_constant(&self) -> bool {
        self.bits.iter().all(|&b| b == self.bits[0])
    }

    pub fn mask(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |m, (i, &b)| m | (b as u64) << i)
    }
}

impl fmt::Display for AlphaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub fn system_residual(alpha: &AlphaVector, r: usize) -> Result<BigInt> {
    if r > alpha.m() {
        return Err(Error::invalid(format!("r = {r} exceeds m = {}", alpha.m())));
    }
    let mut acc = BigInt::zero();
    for (i, &b) in alpha.bits[..=r].iter().enumerate() {
        if b {
            let c = BigInt::from(binomial(r as u64, i as i64));
            if i % 2 == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
    }
    Ok(acc)
}

/// True iff `alpha` solves the equations `r = lo..=m`.
pub fn solves(alpha: &AlphaVector, lo: usize) -> bool {
    (lo..=alpha.m()).all(|r| system_residual(alpha, r).expect("r <= m").is_zero())
}

fn check_exact(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::invalid(format!("need m >= 2, got {m}")));
    }
    if m > MAX_EXACT_M {
        return Err(Error::guard(
            format!("exhaustive scan at m = {m} (use prime_upper for a bound)"),
            1u128 << (m + 1),
            1u128 << (MAX_EXACT_M + 1),
        ));
    }
    Ok(())
}

/// Signed coefficients `(-1)^i C(r, i)` for `r, i <= m`.
fn coefficient_table(m: usize) -> Vec<Vec<i64>> {
    (0..=m)
        .map(|r| {
            (0..=m)
                .map(|i| {
                    if i > r {
                        0
                    } else if i % 2 == 0 {
                        choose(r, i) as i64
                    } else {
                        -(choose(r, i) as i64)
                    }
                })
                .collect()
        })
        .collect()
}

fn residual_fast(coef: &[i64], mask: u64) -> i64 {
    let mut acc = 0;
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        acc += coef[i];
        rest &= rest - 1;
    }
    acc
}

/// Number of consecutive vanishing residuals `r = m, m-1, ...` of `mask`,
/// given that residual `m` already vanishes.
fn zero_run(coef: &[Vec<i64>], mask: u64, m: usize) -> usize {
    let mut run = 1;
    while run <= m && residual_fast(&coef[m - run], mask) == 0 {
        run += 1;
    }
    run
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ChunkBest {
    run: usize,
    mask: Option<u64>,
}

impl ChunkBest {
    fn merge(self, other: ChunkBest) -> ChunkBest {
        match (self.run.cmp(&other.run), self.mask, other.mask) {
            (std::cmp::Ordering::Greater, ..) => self,
            (std::cmp::Ordering::Less, ..) => other,
            (_, Some(a), Some(b)) => {
                if a <= b {
                    self
                } else {
                    other
                }
            }
            (_, None, _) => other,
            _ => self,
        }
    }
}

/// Gray-code scan over all non-constant `α ∈ {0,1}^{m+1}`. Returns the
/// longest run of vanishing top residuals and the smallest mask attaining
/// it. With `stop_at = Some(t)` the scan may stop once a run `>= t` is seen.
fn scan(m: usize, stop_at: Option<usize>) -> ChunkBest {
    let coef = coefficient_table(m);
    let top = &coef[m];
    let width = m + 1;
    let prefix_bits = PREFIX_BITS.min(width);
    let low_bits = width - prefix_bits;
    let full = (1u64 << width) - 1;
    let stop = AtomicBool::new(false);

    (0u64..1 << prefix_bits)
        .into_par_iter()
        .map(|prefix| {
            let mut best = ChunkBest { run: 0, mask: None };
            if stop.load(Ordering::Relaxed) {
                return best;
            }
            let mut mask = prefix << low_bits;
            let mut res = residual_fast(top, mask);
            let visit = |mask: u64, res: i64, best: &mut ChunkBest| {
                if res == 0 && mask != 0 && mask != full {
                    let run = zero_run(&coef, mask, m);
                    *best = best.merge(ChunkBest {
                        run,
                        mask: Some(mask),
                    });
                    if stop_at.is_some_and(|t| run >= t) {
                        stop.store(true, Ordering::Relaxed);
                    }
                }
            };
            visit(mask, res, &mut best);
            for j in 1u64..1 << low_bits {
                let bit = j.trailing_zeros() as usize;
                mask ^= 1 << bit;
                if mask >> bit & 1 == 1 {
                    res += top[bit];
                } else {
                    res -= top[bit];
                }
                visit(mask, res, &mut best);
                if j & 0xffff == 0 && stop.load(Ordering::Relaxed) {
                    break;
                }
            }
            best
        })
        .reduce(|| ChunkBest { run: 0, mask: None }, ChunkBest::merge)
}

/// True iff only the constant vectors solve the equations `r = m-g..=m`.
pub fn only_trivial(m: usize, g: usize) -> Result<bool> {
    check_exact(m)?;
    if g > m {
        return Err(Error::invalid(format!("need g <= m, got g = {g}, m = {m}")));
    }
    Ok(scan(m, Some(g + 1)).run <= g)
}

/// `m -> (Γ(m), smallest witness mask)`.
type GammaCache = Mutex<HashMap<usize, (usize, Option<u64>)>>;

static GAMMA_CACHE: Lazy<GammaCache> = Lazy::new(|| Mutex::new(HashMap::new()));

fn gamma_entry(m: usize) -> Result<(usize, Option<u64>)> {
    check_exact(m)?;
    if let Some(&e) = GAMMA_CACHE.lock().expect("cache lock").get(&m) {
        return Ok(e);
    }
    let best = scan(m, None);
    let entry = (best.run, best.mask);
    GAMMA_CACHE.lock().expect("cache lock").insert(m, entry);
    Ok(entry)
}

/// `Γ(m)`: the longest run of vanishing top residuals over non-constant `α`.
pub fn gamma_m(m: usize) -> Result<usize> {
    gamma_entry(m).map(|e| e.0)
}

/// A non-constant solution of the equations `r = m-Γ(m)+1..=m` (the
/// smallest as a bit mask), showing that `Γ(m) - 1` does not suffice.
/// `None` when `Γ(m) = 0`.
pub fn gamma_witness(m: usize) -> Result<Option<AlphaVector>> {
    let (gamma, mask) = gamma_entry(m)?;
    Ok(if gamma == 0 {
        None
    } else {
        mask.map(|x| AlphaVector::from_mask(x, m))
    })
}

pub fn g_of_k(k: usize) -> Result<usize> {
    if k < 2 {
        return Err(Error::invalid(format!("need k >= 2, got {k}")));
    }
    let mut g = 0;
    for m in 2..=k {
        g = g.max(gamma_m(m)?);
    }
    Ok(g)
}

/// `(m + 1) - p` for the largest prime `p <= m + 1`; an upper bound on `Γ(m)`.
pub fn prime_upper(m: usize) -> usize {
    let p = largest_prime_leq(m as u64 + 1).expect("m + 1 >= 2");
    m + 1 - p as usize
}

#[allow(non_snake_case)]
pub fn G_of_k(k: usize) -> usize {
    (3..=k + 1)
        .map(|m| m - largest_prime_leq(m as u64).expect("m >= 3") as usize)
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeCertificate {
    pub m: usize,
    pub g: usize,
    pub p: usize,
}

pub fn prime_certificate(m: usize) -> PrimeCertificate {
    let p = largest_prime_leq(m as u64 + 1).expect("m + 1 >= 2") as usize;
    PrimeCertificate { m, g: m + 1 - p, p }
}

/// Solves equation `r` for `α_r` given `α_0..α_{r-1}`.
fn next_alpha(prefix: &[BigInt]) -> BigInt {
    let r = prefix.len();
    let mut s = BigInt::zero();
    for (i, a) in prefix.iter().enumerate() {
        let term = BigInt::from(binomial(r as u64, i as i64)) * a;
        if i % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    // (-1)^r α_r + s = 0
    if r.is_multiple_of(2) {
        -s
    } else {
        s
    }
}

/// Checks that the system for `(m, g)` has only constant solutions by the
/// prime argument: `p` is prime with `m - g <= p - 1 <= m`; modulo `p` the
/// `r = p - 1` equation reads `α_0 + ... + α_{p-1} ≡ 0`, forcing those
/// entries equal; then equations `r = p..=m` determine the remaining entries
/// one at a time, and from either constant start they stay constant.
pub fn verify_prime_certificate(cert: &PrimeCertificate) -> bool {
    let PrimeCertificate { m, g, p } = *cert;
    if !is_prime(p as u64) || p == 0 || p - 1 > m || p - 1 + g < m {
        return false;
    }
    let pb = BigInt::from(p);
    let collapses = (0..p).all(|i| {
        let c = BigInt::from(binomial(p as u64 - 1, i as i64));
        let sign = if i % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        (c - sign).mod_floor(&pb).is_zero()
    });
    if !collapses {
        return false;
    }
    [BigInt::zero(), BigInt::one()].iter().all(|c| {
        let mut alpha = vec![c.clone(); p];
        while alpha.len() <= m {
            let next = next_alpha(&alpha);
            if next.is_negative() || next > BigInt::one() {
                return false;
            }
            alpha.push(next);
        }
        alpha.iter().all(|a| a == c)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Exact(usize),
    AtMost(usize),
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(v) => write!(f, "{v}"),
            Bound::AtMost(v) => write!(f, "<={v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Exact,
    Prime,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::Exact => "exact",
            CertificateKind::Prime => "prime",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GkRow {
    pub k: usize,
    pub gamma: Bound,
    pub g: Bound,
    pub certificate: CertificateKind,
}

/// Rows `k = 2..=max`: exact scans up to `exact_limit` (at most
/// [`MAX_EXACT_M`]), prime bounds beyond.
pub fn gk_table(max: usize, exact_limit: usize) -> Result<Vec<GkRow>> {
    let exact_limit = exact_limit.min(MAX_EXACT_M);
    let mut rows = Vec::new();
    let mut g_bound = 0;
    for k in 2..=max {
        let row = if k <= exact_limit {
            let gamma = gamma_m(k)?;
            g_bound = g_bound.max(gamma);
            GkRow {
                k,
                gamma: Bound::Exact(gamma),
                g: Bound::Exact(g_bound),
                certificate: CertificateKind::Exact,
            }
        } else {
            let cert = prime_certificate(k);
            debug_assert!(verify_prime_certificate(&cert));
            g_bound = g_bound.max(cert.g);
            GkRow {
                k,
                gamma: Bound::AtMost(cert.g),
                g: Bound::AtMost(g_bound),
                certificate: CertificateKind::Prime,
            }
        };
        rows.push(row);
    }
    Ok(rows)
}
