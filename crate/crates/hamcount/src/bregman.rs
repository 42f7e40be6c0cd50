//! Row-sum upper bound on the permanent for matrices with entries in [0, 1],
//! and the incremental minor machinery that keeps one sampler level at O(r).
//!
//! The bound is Br(A) = prod_i g(r(i))/e with r(i) the sum of row i and
//!
//! ```text
//! g(r) = 1 + (e-1) r            for r in [0, 1]
//! g(r) = r + (1/2) ln r + e - 1 for r >= 1
//! ```
//!
//! Both branches give e at r = 1. Br dominates the permanent, and removing
//! row i and column 1 only shrinks it, which is what makes the level
//! probabilities of the sampler sum to at most one. Everything here is kept
//! in log space: at order a few hundred, Br spans hundreds of orders of
//! magnitude.

use std::f64::consts::E;

use thiserror::Error;

use crate::matrix::LogMatrix;
use crate::numeric::KahanSum;

/// Entries may exceed 1 by this much before `log_bregman_bound` rejects the
/// matrix; anything in between is clamped and counted. Scaling guarantees
/// entries <= 1 only in exact arithmetic.
pub const ENTRY_CLAMP_TOL: f64 = 1e-12;

/// Reduced row sums may undershoot 0 by this much before it is treated as a
/// bug rather than round-off.
pub const ROW_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum BregmanError {
    #[error("row sum argument is negative: {0}")]
    NegativeArgument(f64),
    #[error("entry ({row},{col}) = {value} exceeds 1 beyond tolerance")]
    EntryAboveOne { row: usize, col: usize, value: f64 },
    #[error("the bound is undefined for an empty matrix")]
    EmptyMatrix,
    #[error("row {row} sum {value} is negative beyond tolerance")]
    NegativeRowSum { row: usize, value: f64 },
    #[error("column length {col} does not match row count {rows}")]
    LengthMismatch { col: usize, rows: usize },
    #[error("column entry {col_value} exceeds row sum {row_sum} at row {row} beyond tolerance")]
    ColumnExceedsRow {
        row: usize,
        col_value: f64,
        row_sum: f64,
    },
}

/// The per-row factor g(r). Nondecreasing, continuous, g(0) = 1, g(1) = e.
pub fn bregman_factor(r: f64) -> Result<f64, BregmanError> {
    if !(r >= 0.0) {
        return Err(BregmanError::NegativeArgument(r));
    }
    Ok(if r <= 1.0 {
        1.0 + (E - 1.0) * r
    } else {
        r + 0.5 * r.ln() + E - 1.0
    })
}

/// ln g(r) - 1, the log-space contribution of one row to the bound.
fn log_row_term(r: f64) -> Result<f64, BregmanError> {
    Ok(bregman_factor(r)?.ln() - 1.0)
}

pub struct BoundOutcome {
    pub log_br: f64,
    /// Entries above 1 that were clamped down to 1 (within tolerance).
    pub clamped_entries: u64,
}

/// log Br(A) for a matrix with entries in [0, 1]. Entries above 1 by at
/// most [`ENTRY_CLAMP_TOL`] are clamped to 1 and counted; larger ones are
/// an error.
pub fn log_bregman_bound(a: &LogMatrix) -> Result<BoundOutcome, BregmanError> {
    let n = a.order();
    if n == 0 {
        return Err(BregmanError::EmptyMatrix);
    }
    let mut clamped = 0u64;
    let mut acc = KahanSum::new();
    for i in 0..n {
        let mut row_sum = KahanSum::new();
        for j in 0..n {
            let v = a.value(i, j);
            if v > 1.0 {
                if v > 1.0 + ENTRY_CLAMP_TOL {
                    return Err(BregmanError::EntryAboveOne {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                clamped += 1;
                row_sum.add(1.0);
            } else {
                row_sum.add(v);
            }
        }
        acc.add(log_row_term(row_sum.value())?);
    }
    Ok(BoundOutcome {
        log_br: acc.value(),
        clamped_entries: clamped,
    })
}

/// Row sums of the active submatrix plus the cached log of its bound.
/// Owned and advanced by a single sampler trial.
#[derive(Clone, Debug)]
pub struct RowSums {
    sums: Vec<f64>,
    log_br: f64,
}

impl RowSums {
    /// Wraps the given sums; tiny negatives (within [`ROW_SUM_TOL`]) are
    /// clamped to zero, anything worse is an error.
    pub fn new(mut sums: Vec<f64>) -> Result<Self, BregmanError> {
        let mut acc = KahanSum::new();
        for (row, s) in sums.iter_mut().enumerate() {
            if *s < 0.0 {
                if *s < -ROW_SUM_TOL {
                    return Err(BregmanError::NegativeRowSum { row, value: *s });
                }
                *s = 0.0;
            }
            acc.add(log_row_term(*s)?);
        }
        Ok(Self {
            sums,
            log_br: acc.value(),
        })
    }

    /// Row sums of a matrix with entries in [0, 1] (values above 1 within
    /// tolerance contribute their clamped value).
    pub fn from_matrix(a: &LogMatrix) -> Result<Self, BregmanError> {
        let n = a.order();
        let mut sums = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = KahanSum::new();
            for j in 0..n {
                acc.add(a.value(i, j).min(1.0));
            }
            sums.push(acc.value());
        }
        Self::new(sums)
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    /// log Br of the matrix these row sums describe.
    pub fn log_br(&self) -> f64 {
        self.log_br
    }

    /// For every row k, log Br of the minor that deletes row k and the
    /// first column: each surviving row j contributes g(r(j) - col1[j])/e.
    /// Computed in O(r) via the shared total, subtracting the k-th term.
    pub fn log_bound_minors(&self, col1: &[f64]) -> Result<Vec<f64>, BregmanError> {
        if col1.len() != self.sums.len() {
            return Err(BregmanError::LengthMismatch {
                col: col1.len(),
                rows: self.sums.len(),
            });
        }
        let mut terms = Vec::with_capacity(col1.len());
        let mut total = KahanSum::new();
        for (row, (&r, &d)) in self.sums.iter().zip(col1).enumerate() {
            let mut reduced = r - d;
            if reduced < 0.0 {
                if reduced < -ROW_SUM_TOL {
                    return Err(BregmanError::ColumnExceedsRow {
                        row,
                        col_value: d,
                        row_sum: r,
                    });
                }
                reduced = 0.0;
            }
            let t = log_row_term(reduced)?;
            terms.push(t);
            total.add(t);
        }
        let total = total.value();
        Ok(terms.into_iter().map(|t| total - t).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::permanent_enum;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unit_matrix(n: usize, seed: u64) -> LogMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>()).collect();
        LogMatrix::from_values(n, &vals).unwrap()
    }

    #[test]
    fn factor_frozen_values() {
        assert!((bregman_factor(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((bregman_factor(1.0).unwrap() - E).abs() < 1e-15);
        // 2 + 0.5 ln 2 + e - 1, evaluated directly.
        let expected = 2.0 + 0.5 * 2f64.ln() + E - 1.0;
        assert!((expected - 4.064855418739018).abs() < 1e-12);
        assert!((bregman_factor(2.0).unwrap() - expected).abs() < 1e-15);
        assert!(bregman_factor(-0.5).is_err());
    }

    #[test]
    fn factor_is_continuous_and_monotone() {
        let below = bregman_factor(1.0 - 1e-12).unwrap();
        let above = bregman_factor(1.0 + 1e-12).unwrap();
        assert!((below - above).abs() < 1e-10);
        let mut last = 0.0;
        for k in 0..=4000 {
            let r = k as f64 * 0.005;
            let v = bregman_factor(r).unwrap();
            assert!(v >= last, "g not monotone at r={r}");
            last = v;
        }
    }

    #[test]
    fn bound_frozen_values() {
        let ones = LogMatrix::from_values(2, &[1.0; 4]).unwrap();
        let g2 = bregman_factor(2.0).unwrap();
        let expected = 2.0 * (g2 / E).ln();
        let got = log_bregman_bound(&ones).unwrap().log_br;
        assert!((got - expected).abs() < 1e-12);
        // (g(2)/e)^2 = 2.2361474..., the linear form of the bound.
        assert!((got.exp() - 2.236147450757298).abs() < 1e-10);

        let id = LogMatrix::from_values(2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(log_bregman_bound(&id).unwrap().log_br.abs() < 1e-15);
    }

    #[test]
    fn bound_rejects_bad_inputs() {
        assert!(matches!(
            log_bregman_bound(&LogMatrix::empty()),
            Err(BregmanError::EmptyMatrix)
        ));
        let big = LogMatrix::from_values(1, &[1.5]).unwrap();
        assert!(matches!(
            log_bregman_bound(&big),
            Err(BregmanError::EntryAboveOne { .. })
        ));
    }

    #[test]
    fn bound_dominates_permanent() {
        for seed in 0..30 {
            let n = 1 + (seed as usize % 9);
            let a = random_unit_matrix(n, 1_000 + seed);
            let log_br = log_bregman_bound(&a).unwrap().log_br;
            let per = permanent_enum(&a).unwrap().log_value();
            assert!(
                log_br >= per - 1e-9,
                "violation at n={n} seed={seed}: {log_br} < {per}"
            );
        }
    }

    #[test]
    fn minors_match_explicit_deletion() {
        for seed in 0..12 {
            let n = 2 + (seed as usize % 11);
            let a = random_unit_matrix(n, 2_000 + seed);
            let rs = RowSums::from_matrix(&a).unwrap();
            let col1: Vec<f64> = (0..n).map(|i| a.value(i, 0)).collect();
            let fast = rs.log_bound_minors(&col1).unwrap();
            for k in 0..n {
                let minor = a.minor(k, 0);
                let direct = if minor.order() == 0 {
                    0.0
                } else {
                    log_bregman_bound(&minor).unwrap().log_br
                };
                assert!(
                    (fast[k] - direct).abs() < 1e-9,
                    "n={n} seed={seed} k={k}: {} vs {direct}",
                    fast[k]
                );
            }
        }
    }

    #[test]
    fn single_remaining_row_example() {
        // 2x2 all-ones: deleting row 2 and column 1 leaves one row with
        // reduced sum 1, so the minor bound is g(1)/e = 1.
        let rs = RowSums::new(vec![2.0, 2.0]).unwrap();
        let minors = rs.log_bound_minors(&[1.0, 1.0]).unwrap();
        assert!(minors[0].abs() < 1e-15);
        assert!(minors[1].abs() < 1e-15);
    }

    #[test]
    fn uniform_rows_give_equal_minors() {
        let rs = RowSums::new(vec![3.0; 5]).unwrap();
        let minors = rs.log_bound_minors(&[0.5; 5]).unwrap();
        for w in minors.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn row_sum_guard_rails() {
        assert!(RowSums::new(vec![1.0, -1e-10]).is_ok());
        assert!(matches!(
            RowSums::new(vec![1.0, -1e-6]),
            Err(BregmanError::NegativeRowSum { row: 1, .. })
        ));
        let rs = RowSums::new(vec![1.0]).unwrap();
        assert!(matches!(
            rs.log_bound_minors(&[1.0, 1.0]),
            Err(BregmanError::LengthMismatch { .. })
        ));
        assert!(matches!(
            rs.log_bound_minors(&[1.5]),
            Err(BregmanError::ColumnExceedsRow { .. })
        ));
    }

    #[test]
    fn recursion_inequality_on_random_unit_matrices() {
        // Br(A) >= sum_i A(i,1) Br(A_{i1}) on matrices with entries in [0,1].
        for seed in 0..15 {
            let n = 2 + (seed as usize % 8);
            let a = random_unit_matrix(n, 4_000 + seed);
            let log_br = log_bregman_bound(&a).unwrap().log_br;
            let mut rhs = KahanSum::new();
            for i in 0..n {
                let minor = a.minor(i, 0);
                let m_log = if minor.order() == 0 {
                    0.0
                } else {
                    log_bregman_bound(&minor).unwrap().log_br
                };
                rhs.add(a.value(i, 0) * (m_log - log_br).exp());
            }
            assert!(
                rhs.value() <= 1.0 + 1e-9,
                "n={n} seed={seed}: normalized rhs {}",
                rhs.value()
            );
        }
    }
}
