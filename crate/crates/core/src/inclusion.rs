//! Higher inclusion matrices and the algebraic vanishing criterion.
//!
//! `M^r_s` has rows indexed by r-subsets and columns by s-subsets (both in
//! colex order), with a one where the column set is contained in the row
//! set. For `n >= 2k >= 2l`, the top levels `l..=k` of the W-vector of `f`
//! vanish exactly when `f = M^k_{l-1} h` for some (then unique) `h`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinat::{choose, common_denominator, subsets, BinomialTable, Rational};
use crate::error::{Error, Result};
use crate::hypergraph::{slice_len, SliceFunction};
use crate::linalg::IntMatrix;

/// Largest `C(n, k) * C(n, l - 1)` handed to the exact solver.
pub const MAX_ELIMINATION_CELLS: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionMatrix {
    n: usize,
    r: usize,
    s: usize,
    /// Column indices of the ones in each row, increasing.
    ones: Vec<Vec<usize>>,
}

pub fn inclusion_matrix(n: usize, r: usize, s: usize) -> Result<InclusionMatrix> {
    if !(n >= r && r >= s) {
        return Err(Error::invalid(format!(
            "inclusion matrix needs n >= r >= s, got ({n}, {r}, {s})"
        )));
    }
    slice_len(n, r)?;
    slice_len(n, s)?;
    let table = BinomialTable::new(n);
    let mut buf = vec![0u32; s];
    let ones = subsets(n, r)
        .map(|row| {
            subsets(r, s)
                .map(|pos| {
                    for (b, &p) in buf.iter_mut().zip(&pos) {
                        *b = row[p as usize];
                    }
                    table.rank_sorted(&buf)
                })
                .collect::<Vec<_>>()
        })
        .map(|mut v| {
            v.sort_unstable();
            v
        })
        .collect();
    Ok(InclusionMatrix { n, r, s, ones })
}

impl InclusionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nrows(&self) -> usize {
        self.ones.len()
    }

    pub fn ncols(&self) -> usize {
        choose(self.n, self.s) as usize
    }

    pub fn entry(&self, row: usize, col: usize) -> bool {
        self.ones[row].binary_search(&col).is_ok()
    }

    pub fn row_ones(&self, row: usize) -> &[usize] {
        &self.ones[row]
    }

    pub fn column_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.ncols()];
        for row in &self.ones {
            for &c in row {
                counts[c] += 1;
            }
        }
        counts
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.nrows(), self.ncols());
        for (i, row) in self.ones.iter().enumerate() {
            for &j in row {
                m.set(i, j, BigInt::one());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        rank_exact(&self.to_int_matrix())
    }

    /// `(M h)(R) = sum over s-subsets S of R of h(S)`.
    pub fn apply(&self, h: &SliceFunction) -> Result<SliceFunction> {
        if h.n() != self.n || h.k() != self.s {
            return Err(Error::ShapeMismatch(format!(
                "h on ({}, {}) for M^{}_{} with n = {}",
                h.n(),
                h.k(),
                self.r,
                self.s,
                self.n
            )));
        }
        let values = self
            .ones
            .iter()
            .map(|row| row.iter().map(|&c| h.at_rank(c)).sum())
            .collect();
        SliceFunction::new(self.n, self.r, values)
    }
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank_exact(m: &IntMatrix) -> usize {
    m.rank()
}

/// Lifts `h` on `binom([n], s)` to `f(R) = sum_{S ⊂ R} h(S)` on `binom([n], k)`.
pub fn lift(h: &SliceFunction, k: usize) -> Result<SliceFunction> {
    inclusion_matrix(h.n(), k, h.k())?.apply(h)
}

fn check_criterion_args(f: &SliceFunction, ell: usize) -> Result<()> {
    let (n, k) = (f.n(), f.k());
    if ell < 1 || ell > k || n < 2 * k {
        return Err(Error::invalid(format!(
            "need n >= 2k >= 2l >= 2, got n = {n}, k = {k}, l = {ell}"
        )));
    }
    let cells = choose(n, k).saturating_mul(choose(n, ell - 1));
    if cells > MAX_ELIMINATION_CELLS {
        return Err(Error::guard(
            "exact elimination",
            cells as u128,
            MAX_ELIMINATION_CELLS as u128,
        ));
    }
    Ok(())
}

/// The unique `h` on `binom([n], l - 1)` with `f(R) = sum_{S ⊂ R} h(S)`,
/// or `None` if `f` is not of that form.
pub fn solve_h(f: &SliceFunction, ell: usize) -> Result<Option<SliceFunction>> {
    check_criterion_args(f, ell)?;
    let m = inclusion_matrix(f.n(), f.k(), ell - 1)?;
    let (nums, den) = common_denominator(f.values());
    let Some(x) = m.to_int_matrix().solve(&nums)? else {
        return Ok(None);
    };
    let den = Rational::from_integer(den);
    let values = x.into_iter().map(|v| v / &den).collect();
    SliceFunction::new(f.n(), ell - 1, values).map(Some)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion {
    /// Whether `f` lies in the image of `M^k_{l-1}`.
    pub holds: bool,
    pub h: Option<SliceFunction>,
}

pub fn criterion(f: &SliceFunction, ell: usize) -> Result<Criterion> {
    let h = solve_h(f, ell)?;
    Ok(Criterion {
        holds: h.is_some(),
        h,
    })
}

/// True iff `h` is zero. Convenience for the uniqueness remark.
pub fn is_trivial_witness(h: &SliceFunction) -> bool {
    h.values().iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::rat;
    use crate::hypergraph::{fano, Hypergraph};
    use crate::wvector::{w2_sq, w_profile};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_h(rng: &mut impl Rng, n: usize, s: usize) -> SliceFunction {
        SliceFunction::from_fn(n, s, |_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))).unwrap()
    }

    #[test]
    fn small_matrices() {
        let m = inclusion_matrix(3, 1, 0).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (3, 1));
        assert!((0..3).all(|i| m.entry(i, 0)));
        let m = inclusion_matrix(4, 2, 1).unwrap();
        assert!((0..m.nrows()).all(|i| m.row_ones(i).len() == 2));
        let m = inclusion_matrix(7, 3, 2).unwrap();
        assert!(m.column_counts().iter().all(|&c| c == 5));
        assert!(inclusion_matrix(3, 1, 2).is_err());
        assert!(inclusion_matrix(3, 4, 2).is_err());
    }

    #[test]
    fn entries_mean_containment() {
        let m = inclusion_matrix(6, 3, 2).unwrap();
        let rows: Vec<_> = subsets(6, 3).collect();
        let cols: Vec<_> = subsets(6, 2).collect();
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter().enumerate() {
                assert_eq!(m.entry(i, j), c.iter().all(|v| r.contains(v)));
            }
        }
    }

    #[test]
    fn gottlieb_ranks() {
        assert_eq!(inclusion_matrix(7, 3, 2).unwrap().rank(), 21);
        assert_eq!(inclusion_matrix(5, 2, 1).unwrap().rank(), 5);
        for n in 0..=9 {
            for r in 0..=4.min(n) {
                for s in 0..=r {
                    let m = inclusion_matrix(n, r, s).unwrap();
                    let expected = choose(n, r).min(choose(n, s)) as usize;
                    assert_eq!(m.rank(), expected, "n={n} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn constant_and_zero_functions() {
        let one = SliceFunction::constant(7, 3, rat(1, 1)).unwrap();
        let h = solve_h(&one, 2).unwrap().unwrap();
        assert!(h.values().iter().all(|v| *v == rat(1, 3)));
        let zero = SliceFunction::zeros(7, 3).unwrap();
        for ell in 1..=3 {
            assert!(is_trivial_witness(&solve_h(&zero, ell).unwrap().unwrap()));
        }
        let c = criterion(&Hypergraph::complete(8, 3).unwrap().indicator(), 3).unwrap();
        assert!(c.holds);
        let expected = rat(1, choose(3, 2) as i64);
        assert!(c.h.unwrap().values().iter().all(|v| *v == expected));
    }

    #[test]
    fn constructive_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for (n, k, ell) in [(7, 3, 2), (7, 3, 3), (6, 3, 1), (8, 4, 3), (8, 3, 2)] {
            for _ in 0..5 {
                let h = random_h(&mut rng, n, ell - 1);
                let f = lift(&h, k).unwrap();
                assert_eq!(solve_h(&f, ell).unwrap().unwrap(), h);
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let f = SliceFunction::zeros(5, 3).unwrap();
        assert!(solve_h(&f, 2).is_err());
        let f = SliceFunction::zeros(7, 3).unwrap();
        assert!(solve_h(&f, 0).is_err());
        assert!(solve_h(&f, 4).is_err());
    }

    #[test]
    fn fano_criterion_matches_top_weight() {
        let f = fano().indicator();
        for ell in 1..=3 {
            let holds = criterion(&f, ell).unwrap().holds;
            assert_eq!(
                holds,
                w_profile(&f, ell).unwrap().all_levels_zero(),
                "l={ell}"
            );
        }
        // Fano is not of the form sum over pairs.
        assert_eq!(
            criterion(&f, 3).unwrap().holds,
            w2_sq(&f, 3).unwrap().is_zero()
        );
    }

    #[test]
    fn random_boolean_functions_agree_with_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..100 {
            let g = Hypergraph::from_fn(7, 3, |_| rng.gen_bool(0.5)).unwrap();
            let f = g.indicator();
            for ell in [2, 3] {
                assert_eq!(
                    criterion(&f, ell).unwrap().holds,
                    w_profile(&f, ell).unwrap().all_levels_zero()
                );
            }
        }
    }

    #[test]
    fn nested_witness_has_vanishing_top_level() {
        // f in the image from arity 1; the arity-(k-1) witness h_1 then has
        // its own top level zero.
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for (n, k) in [(7, 3), (8, 3), (8, 4)] {
            let f = lift(&random_h(&mut rng, n, 1), k).unwrap();
            let h1 = solve_h(&f, k).unwrap().unwrap();
            assert_eq!(h1.k(), k - 1);
            assert!(w2_sq(&h1, k - 1).unwrap().is_zero());
            assert!(criterion(&h1, k - 1).unwrap().holds);
        }
    }

    #[test]
    fn elimination_guard() {
        let f = SliceFunction::zeros(40, 5).unwrap();
        assert!(solve_h(&f, 5).unwrap_err().is_guard());
    }
}
