//! Padding and scaling of adjacency matrices.
//!
//! `pad_zeros` replaces every structural zero with the tiny positive value
//! gamma = (epsilon/3) / (n-1)!, carried as a log because it underflows any
//! linear representation long before n reaches 200. `scale` then finds
//! diagonal scalings X, Y by iterative proportional fitting until every row
//! and column sum of B = X A Y deviates from 1 by less than 0.1/n^2, and a
//! final diagonal Z = diag(1/max_j B(i,j)) that pulls every row maximum to
//! exactly 1. The combined factor l = prod_i X(i,i) Y(i,i) Z(i,i) relates
//! the scaled matrix back to the input: both the permanent and the Hamilton
//! pick up exactly the factor l.

use thiserror::Error;

use crate::matrix::LogMatrix;
use crate::numeric::{ln_factorial, KahanSum};

#[derive(Debug, Error, PartialEq)]
pub enum ScaleError {
    #[error("epsilon must lie in (0, 1], got {0}")]
    EpsilonOutOfRange(f64),
    #[error("padding requires order >= 2, got {0}")]
    OrderTooSmall(usize),
    #[error("scaling requires a strictly positive matrix; entry ({0},{1}) is zero")]
    NotPositive(usize, usize),
    #[error(
        "row/column sums did not reach the {band:e} band after {sweeps} sweeps \
         (achieved deviation {achieved:e})"
    )]
    IterationBudget {
        sweeps: u64,
        band: f64,
        achieved: f64,
    },
}

/// Strictly positive matrix produced by `pad_zeros`, remembering the
/// padding value and the epsilon that chose it.
#[derive(Clone, Debug)]
pub struct PaddedMatrix {
    pub matrix: LogMatrix,
    /// ln gamma = ln(epsilon/3) - ln((n-1)!).
    pub log_gamma: f64,
    pub epsilon: f64,
}

/// Replace every structural zero (including the diagonal) with gamma.
/// A matrix without zeros passes through unchanged.
pub fn pad_zeros(a: &LogMatrix, epsilon: f64) -> Result<PaddedMatrix, ScaleError> {
    let n = a.order();
    if n < 2 {
        return Err(ScaleError::OrderTooSmall(n));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(ScaleError::EpsilonOutOfRange(epsilon));
    }
    let log_gamma = (epsilon / 3.0).ln() - ln_factorial(n as u64 - 1);
    let mut matrix = a.clone();
    for i in 0..n {
        for j in 0..n {
            if matrix.is_zero(i, j) {
                matrix.set_log(i, j, log_gamma);
            }
        }
    }
    Ok(PaddedMatrix {
        matrix,
        log_gamma,
        epsilon,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct ScaleOptions {
    /// Full row+column sweeps before giving up.
    pub max_sweeps: u64,
    /// Row/column sums must come within band_factor / n^2 of 1.
    pub band_factor: f64,
}

impl Default for ScaleOptions {
    fn default() -> Self {
        Self {
            max_sweeps: 1_000_000,
            band_factor: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ScaleDiagnostics {
    pub sweeps: u64,
    pub max_deviation: f64,
}

/// Result of scaling: the matrix C with entries in [0, 1] and row maxima
/// exactly 1, the combined log scale factor, and the diagonal scalings kept
/// for verification.
#[derive(Clone, Debug)]
pub struct ScaledInstance {
    pub c: LogMatrix,
    /// ln l where ham(C) = l * ham(A_padded) and per(C) = l * per(A_padded).
    pub log_scale: f64,
    pub log_gamma: f64,
    pub epsilon: f64,
    /// ln X(i,i): row scalings of the doubly-stochastic step.
    pub log_row_scale: Vec<f64>,
    /// ln Y(j,j): column scalings.
    pub log_col_scale: Vec<f64>,
    /// ln Z(i,i) = -max_j ln B(i,j): the row-max normalizers.
    pub log_row_normalizer: Vec<f64>,
    pub diagnostics: ScaleDiagnostics,
}

impl ScaledInstance {
    pub fn order(&self) -> usize {
        self.c.order()
    }
}

/// ln Σ_j exp(terms with the row/col scaling applied), relative to the max.
fn log_axis_sum(vals: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = vals.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = KahanSum::new();
    for v in vals {
        acc.add((v - m).exp());
    }
    m + acc.value().ln()
}

pub fn scale(p: &PaddedMatrix) -> Result<ScaledInstance, ScaleError> {
    scale_with(p, &ScaleOptions::default())
}

pub fn scale_with(p: &PaddedMatrix, opts: &ScaleOptions) -> Result<ScaledInstance, ScaleError> {
    let a = &p.matrix;
    let n = a.order();
    if n == 0 {
        return Err(ScaleError::OrderTooSmall(0));
    }
    for i in 0..n {
        for j in 0..n {
            if a.is_zero(i, j) {
                return Err(ScaleError::NotPositive(i, j));
            }
        }
    }

    let band = opts.band_factor / (n as f64 * n as f64);
    let mut lx = vec![0.0f64; n];
    let mut ly = vec![0.0f64; n];

    let deviation = |lx: &[f64], ly: &[f64]| -> f64 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let s = log_axis_sum((0..n).map(|j| lx[i] + a.log_entry(i, j) + ly[j]));
            worst = worst.max((s.exp() - 1.0).abs());
        }
        for j in 0..n {
            let s = log_axis_sum((0..n).map(|i| lx[i] + a.log_entry(i, j) + ly[j]));
            worst = worst.max((s.exp() - 1.0).abs());
        }
        worst
    };

    let mut sweeps = 0u64;
    let mut achieved = deviation(&lx, &ly);
    while achieved >= band {
        if sweeps >= opts.max_sweeps {
            return Err(ScaleError::IterationBudget {
                sweeps,
                band,
                achieved,
            });
        }
        for i in 0..n {
            let s = log_axis_sum((0..n).map(|j| a.log_entry(i, j) + ly[j]));
            lx[i] = -s;
        }
        for j in 0..n {
            let s = log_axis_sum((0..n).map(|i| lx[i] + a.log_entry(i, j)));
            ly[j] = -s;
        }
        sweeps += 1;
        achieved = deviation(&lx, &ly);
    }

    // Z pulls each row maximum to exactly 1; the subtraction of the max is
    // exact in floating point, so the argmax entry of C is exactly 0 in log
    // space and nothing exceeds it.
    let mut lz = vec![0.0f64; n];
    let mut c = LogMatrix::zeros(n);
    for i in 0..n {
        let row_max = (0..n)
            .map(|j| lx[i] + a.log_entry(i, j) + ly[j])
            .fold(f64::NEG_INFINITY, f64::max);
        lz[i] = -row_max;
        for j in 0..n {
            c.set_log(i, j, lx[i] + a.log_entry(i, j) + ly[j] - row_max);
        }
    }

    let mut log_scale = KahanSum::new();
    for i in 0..n {
        log_scale.add(lx[i]);
        log_scale.add(ly[i]);
        log_scale.add(lz[i]);
    }

    Ok(ScaledInstance {
        c,
        log_scale: log_scale.value(),
        log_gamma: p.log_gamma,
        epsilon: p.epsilon,
        log_row_scale: lx,
        log_col_scale: ly,
        log_row_normalizer: lz,
        diagnostics: ScaleDiagnostics {
            sweeps,
            max_deviation: achieved,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{permanent_enum, relative_close};
    use crate::graph::WeightedDigraph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn padding_value_matches_formula() {
        let a = WeightedDigraph::directed_cycle(3).adjacency_matrix();
        let p = pad_zeros(&a, 0.3).unwrap();
        // gamma = (0.3/3) / 2! = 0.05
        assert!((p.log_gamma - 0.05f64.ln()).abs() < 1e-12);
        assert_eq!(p.matrix.count_nonzero(), 9);
        assert!((p.matrix.value(0, 0) - 0.05).abs() < 1e-15);
        assert!((p.matrix.value(0, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn padding_leaves_positive_matrices_unchanged() {
        let a = LogMatrix::from_values(2, &[0.5, 0.25, 0.125, 1.0]).unwrap();
        let p = pad_zeros(&a, 0.3).unwrap();
        assert_eq!(p.matrix, a);
    }

    #[test]
    fn padding_stays_finite_at_large_order() {
        let a = LogMatrix::zeros(100);
        let p = pad_zeros(&a, 0.3).unwrap();
        assert!(p.log_gamma.is_finite());
        assert!((p.log_gamma - (0.1f64.ln() - ln_factorial(99))).abs() < 1e-9);
    }

    #[test]
    fn padding_domain_errors() {
        let a = LogMatrix::zeros(1);
        assert_eq!(pad_zeros(&a, 0.3).unwrap_err(), ScaleError::OrderTooSmall(1));
        let a = LogMatrix::zeros(3);
        assert_eq!(
            pad_zeros(&a, 0.0).unwrap_err(),
            ScaleError::EpsilonOutOfRange(0.0)
        );
        assert_eq!(
            pad_zeros(&a, 1.5).unwrap_err(),
            ScaleError::EpsilonOutOfRange(1.5)
        );
    }

    #[test]
    fn doubly_stochastic_input_is_accepted_immediately() {
        let a = LogMatrix::from_values(2, &[0.5; 4]).unwrap();
        let p = pad_zeros(&a, 0.3).unwrap();
        let inst = scale(&p).unwrap();
        assert_eq!(inst.diagnostics.sweeps, 0);
        // Z = diag(2, 2), C = all ones, l = 4.
        for i in 0..2 {
            assert!((inst.log_row_normalizer[i] - 2f64.ln()).abs() < 1e-12);
            for j in 0..2 {
                assert!(inst.c.log_entry(i, j).abs() < 1e-12);
            }
        }
        assert!((inst.log_scale - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn row_maxima_are_exactly_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 7;
        let vals: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>() + 0.05).collect();
        let a = LogMatrix::from_values(n, &vals).unwrap();
        let inst = scale(&pad_zeros(&a, 0.25).unwrap()).unwrap();
        for i in 0..n {
            let row_max = (0..n)
                .map(|j| inst.c.log_entry(i, j))
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(row_max, 0.0, "row {i}");
            for j in 0..n {
                assert!(inst.c.log_entry(i, j) <= 0.0);
            }
        }
    }

    #[test]
    fn achieved_band_is_reported_and_met() {
        let g = crate::graph::gen_dense_digraph(12, 0.8, 3).unwrap();
        let p = pad_zeros(&g.adjacency_matrix(), 0.3).unwrap();
        let inst = scale(&p).unwrap();
        let band = 0.1 / 144.0;
        assert!(inst.diagnostics.max_deviation < band);
        // Recompute B's sums from the stored scalings.
        let n = 12;
        for i in 0..n {
            let mut s = KahanSum::new();
            for j in 0..n {
                s.add(
                    (inst.log_row_scale[i] + p.matrix.log_entry(i, j) + inst.log_col_scale[j])
                        .exp(),
                );
            }
            assert!((s.value() - 1.0).abs() < band, "row {i}: {}", s.value());
        }
    }

    #[test]
    fn scale_identity_for_permanent() {
        for seed in 0..8 {
            let n = 3 + (seed as usize % 6);
            let mut rng = ChaCha8Rng::seed_from_u64(10_000 + seed);
            let vals: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let a = LogMatrix::from_values(n, &vals).unwrap();
            let p = pad_zeros(&a, 0.3).unwrap();
            let inst = scale(&p).unwrap();
            let per_c = permanent_enum(&inst.c).unwrap();
            let per_a = permanent_enum(&p.matrix).unwrap();
            let transported = (inst.log_scale + per_a.log_value()).exp();
            assert!(
                relative_close(per_c.value(), transported, 1e-6),
                "seed {seed}: {} vs {transported}",
                per_c.value()
            );
        }
    }

    #[test]
    fn iteration_budget_is_enforced() {
        let g = crate::graph::gen_dense_digraph(10, 0.8, 1).unwrap();
        let p = pad_zeros(&g.adjacency_matrix(), 0.3).unwrap();
        let err = scale_with(
            &p,
            &ScaleOptions {
                max_sweeps: 0,
                band_factor: 0.1,
            },
        )
        .unwrap_err();
        assert!(matches!(err, ScaleError::IterationBudget { .. }));
    }
}
