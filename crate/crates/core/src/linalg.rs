//! Fraction-free (Bareiss) elimination over the integers.
//!
//! After the step that uses pivot `p_t`, every entry below the pivot rows is
//! a `(t+1) x (t+1)` minor of the input, so the division by the previous
//! pivot is exact. Pivots are chosen as the first nonzero entry in the
//! column, scanning rows top to bottom; the pivot order is deterministic.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinat::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows: vec![vec![BigInt::zero(); cols]; rows],
            cols,
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        Ok(IntMatrix { rows, cols })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.rows[i][j] = v;
    }

    /// Appends `col` as a new last column.
    pub fn augment(mut self, col: &[BigInt]) -> Result<Self> {
        if col.len() != self.rows.len() {
            return Err(Error::ShapeMismatch(format!(
                "column of length {} for {} rows",
                col.len(),
                self.rows.len()
            )));
        }
        for (row, v) in self.rows.iter_mut().zip(col) {
            row.push(v.clone());
        }
        self.cols += 1;
        Ok(self)
    }

    /// Reduces in place to fraction-free row echelon form, looking for
    /// pivots only in the first `search_cols` columns (the remaining columns
    /// are carried along). Returns the pivot column of each pivot row.
    pub fn bareiss(&mut self, search_cols: usize) -> Vec<usize> {
        let nrows = self.rows.len();
        let search_cols = search_cols.min(self.cols);
        let mut prev = BigInt::one();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..search_cols {
            if row == nrows {
                break;
            }
            let Some(p) = (row..nrows).find(|&i| !self.rows[i][col].is_zero()) else {
                continue;
            };
            self.rows.swap(row, p);
            let (top, below) = self.rows.split_at_mut(row + 1);
            let pivot_row = &top[row];
            let pivot = &pivot_row[col];
            for r in below.iter_mut() {
                let factor = std::mem::take(&mut r[col]);
                for j in col + 1..self.cols {
                    let mut v = pivot * &r[j];
                    if !factor.is_zero() && !pivot_row[j].is_zero() {
                        v -= &factor * &pivot_row[j];
                    }
                    r[j] = if prev.is_one() { v } else { v / &prev };
                }
            }
            prev = self.rows[row][col].clone();
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.bareiss(self.cols).len()
    }

    /// Solves `A x = b` for a matrix of full column rank. Returns `None` when
    /// the system is inconsistent, detected as a zero coefficient row with a
    /// nonzero right-hand side after elimination.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<Rational>>> {
        let n = self.cols;
        let mut aug = self.clone().augment(b)?;
        let pivots = aug.bareiss(n);
        if aug.rows[pivots.len()..].iter().any(|r| !r[n].is_zero()) {
            return Ok(None);
        }
        if pivots.len() < n {
            return Err(Error::invalid(format!(
                "system is underdetermined: rank {} < {n} unknowns",
                pivots.len()
            )));
        }
        // Full column rank: pivot i sits in column i.
        let mut x = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let row = &aug.rows[i];
            let mut acc = Rational::from_integer(row[n].clone());
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                if !row[j].is_zero() {
                    acc -= xj * &row[j];
                }
            }
            x[i] = acc / &row[i];
        }
        Ok(Some(x))
    }
}
