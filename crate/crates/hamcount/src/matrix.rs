//! Dense square matrices stored entrywise as natural logarithms.
//!
//! Every quantity in the counting pipeline is a product of many entries, so
//! the matrix keeps `ln w` per entry and marks absent edges with an explicit
//! structural zero (`-inf`). Exponentiating any non-zero entry gives back a
//! finite positive value.

use thiserror::Error;

/// Log-value marking an entry that is exactly zero (a non-edge).
pub const STRUCTURAL_ZERO: f64 = f64::NEG_INFINITY;

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("entry ({row},{col}) is not representable in log space: {value}")]
    BadEntry { row: usize, col: usize, value: f64 },
    #[error("expected {expected} entries for order {order}, got {got}")]
    BadShape {
        order: usize,
        expected: usize,
        got: usize,
    },
}

/// Square matrix of log-entries, row major. Immutable after construction
/// apart from the crate-internal builder hooks.
#[derive(Clone, Debug, PartialEq)]
pub struct LogMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl LogMatrix {
    /// Matrix of the given order with every entry a structural zero.
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            entries: vec![STRUCTURAL_ZERO; order * order],
        }
    }

    /// The order-0 matrix. Only the permanent oracle accepts it (its
    /// permanent is 1, the base case of the column expansion); everything
    /// else in the crate works with order ≥ 1.
    pub fn empty() -> Self {
        Self {
            order: 0,
            entries: Vec::new(),
        }
    }

    /// Build from row-major log-entries. Entries must be finite or `-inf`.
    pub fn from_log_entries(order: usize, entries: Vec<f64>) -> Result<Self, MatrixError> {
        if entries.len() != order * order {
            return Err(MatrixError::BadShape {
                order,
                expected: order * order,
                got: entries.len(),
            });
        }
        for (k, &e) in entries.iter().enumerate() {
            if e.is_nan() || e == f64::INFINITY {
                return Err(MatrixError::BadEntry {
                    row: k / order,
                    col: k % order,
                    value: e,
                });
            }
        }
        Ok(Self { order, entries })
    }

    /// Build from row-major linear values; `0` becomes a structural zero,
    /// negative values are rejected.
    pub fn from_values(order: usize, values: &[f64]) -> Result<Self, MatrixError> {
        if values.len() != order * order {
            return Err(MatrixError::BadShape {
                order,
                expected: order * order,
                got: values.len(),
            });
        }
        let mut entries = Vec::with_capacity(values.len());
        for (k, &v) in values.iter().enumerate() {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(MatrixError::BadEntry {
                    row: k / order,
                    col: k % order,
                    value: v,
                });
            }
            entries.push(if v == 0.0 { STRUCTURAL_ZERO } else { v.ln() });
        }
        Ok(Self { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_empty(&self) -> bool {
        self.order == 0
    }

    /// Log of entry (i, j); `-inf` for a structural zero. 0-based indices.
    #[inline]
    pub fn log_entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    /// Linear value of entry (i, j); underflows to 0 for very negative logs.
    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.log_entry(i, j).exp()
    }

    #[inline]
    pub fn is_zero(&self, i: usize, j: usize) -> bool {
        self.log_entry(i, j) == STRUCTURAL_ZERO
    }

    pub(crate) fn set_log(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.order + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn count_nonzero(&self) -> usize {
        self.entries.iter().filter(|&&e| e != STRUCTURAL_ZERO).count()
    }

    /// Largest log-entry; `-inf` if all entries are structural zeros.
    pub fn max_log_entry(&self) -> f64 {
        self.entries
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when every entry is either a structural zero or exactly 1.
    pub fn is_zero_one(&self) -> bool {
        self.entries
            .iter()
            .all(|&e| e == STRUCTURAL_ZERO || e == 0.0)
    }

    /// Minor obtained by deleting `row` and `col` (0-based), keeping the
    /// remaining rows and columns in order.
    pub fn minor(&self, row: usize, col: usize) -> LogMatrix {
        debug_assert!(self.order >= 1 && row < self.order && col < self.order);
        let m = self.order - 1;
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..self.order {
            if i == row {
                continue;
            }
            for j in 0..self.order {
                if j == col {
                    continue;
                }
                entries.push(self.log_entry(i, j));
            }
        }
        LogMatrix { order: m, entries }
    }

    /// Reduced matrix used by the sequential selection walk after picking
    /// row `row` (0-based, `row ≥ 1`) against column 0: column 0 and the
    /// picked row are deleted and the former row 0 takes the picked row's
    /// slot, all other rows keeping their relative order.
    pub fn selection_minor(&self, row: usize) -> LogMatrix {
        debug_assert!(self.order >= 2 && row >= 1 && row < self.order);
        let m = self.order - 1;
        let mut entries = Vec::with_capacity(m * m);
        for new_i in 0..m {
            // new row index `new_i` holds old row `new_i + 1`, except slot
            // `row - 1` which holds old row 0.
            let old_i = if new_i == row - 1 { 0 } else { new_i + 1 };
            for j in 1..self.order {
                entries.push(self.log_entry(old_i, j));
            }
        }
        LogMatrix { order: m, entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_values_marks_zeros() {
        let m = LogMatrix::from_values(2, &[1.0, 0.0, 2.0, 0.5]).unwrap();
        assert!(!m.is_zero(0, 0));
        assert!(m.is_zero(0, 1));
        assert!((m.value(1, 0) - 2.0).abs() < 1e-15);
        assert_eq!(m.log_entry(0, 0), 0.0);
        assert_eq!(m.count_nonzero(), 3);
    }

    #[test]
    fn from_values_rejects_negatives_and_nan() {
        assert!(LogMatrix::from_values(1, &[-1.0]).is_err());
        assert!(LogMatrix::from_values(1, &[f64::NAN]).is_err());
        assert!(LogMatrix::from_values(2, &[1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn zero_one_detection() {
        let m = LogMatrix::from_values(2, &[1.0, 0.0, 1.0, 1.0]).unwrap();
        assert!(m.is_zero_one());
        let w = LogMatrix::from_values(2, &[1.0, 0.0, 2.0, 1.0]).unwrap();
        assert!(!w.is_zero_one());
    }

    #[test]
    fn minor_deletes_row_and_col() {
        let m = LogMatrix::from_values(3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]).unwrap();
        let d = m.minor(1, 0);
        assert_eq!(d.order(), 2);
        assert!((d.value(0, 0) - 2.0).abs() < 1e-12);
        assert!((d.value(0, 1) - 3.0).abs() < 1e-12);
        assert!((d.value(1, 0) - 8.0).abs() < 1e-12);
        assert!((d.value(1, 1) - 9.0).abs() < 1e-12);
    }

    #[test]
    fn selection_minor_moves_first_row_into_picked_slot() {
        let m = LogMatrix::from_values(3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]).unwrap();
        // Pick row 1 (0-based): row 0 takes the picked slot, which is slot 0
        // here, so the minor rows are (old 0, old 2), cols (1, 2).
        let d = m.selection_minor(1);
        assert!((d.value(0, 0) - 2.0).abs() < 1e-12);
        assert!((d.value(0, 1) - 3.0).abs() < 1e-12);
        assert!((d.value(1, 0) - 8.0).abs() < 1e-12);
        assert!((d.value(1, 1) - 9.0).abs() < 1e-12);
        // Pick row 2: rows of the minor are (old 1, old 0).
        let d = m.selection_minor(2);
        assert!((d.value(0, 0) - 5.0).abs() < 1e-12);
        assert!((d.value(1, 0) - 2.0).abs() < 1e-12);
    }
}
