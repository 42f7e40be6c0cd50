//! Exact permanents and Hamiltons at desk scale.
//!
//! Four independent routes are kept deliberately separate so they can check
//! one another: literal permutation enumeration (`permanent_enum`,
//! `hamilton_enum`), Gray-code subset inclusion-exclusion
//! (`permanent_ryser`), subset dynamic programming (`hamilton_dp`) and the
//! first-column expansion recursion (`hamilton_expand`). 0-1 inputs take an
//! exact integer pathway up to order 20 so comparisons against counts carry
//! no rounding at all; everything else is accumulated in f64 after
//! normalizing by the largest entry, with compensated summation on the long
//! reductions.

use thiserror::Error;

use crate::graph::UndirectedGraph;
use crate::matrix::LogMatrix;
use crate::numeric::KahanSum;

/// Hard ceiling for the O(n!) enumeration oracles.
pub const ENUM_CAP: usize = 9;
/// Default ceiling for the Gray-code permanent; ~2^n * n work.
pub const DEFAULT_PERMANENT_CAP: usize = 24;
/// Default ceiling for the subset DP Hamilton; ~2^n * n^2 work and
/// (2^(n-1) * (n-1)) table cells.
pub const DEFAULT_HAMILTON_CAP: usize = 22;
/// Largest order at which 0-1 inputs are counted in exact integers.
pub const INTEGER_COUNT_CAP: usize = 20;
/// Ceiling for the undirected Hamiltonian cycle counter.
pub const UNDIRECTED_COUNT_CAP: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("{what} oracle supports order <= {cap}, got {order}")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        order: usize,
    },
    #[error("{what} is undefined for an empty matrix")]
    EmptyMatrix { what: &'static str },
}

/// Nonnegative exact value carried as a log (with `-inf` meaning zero).
/// For 0-1 inputs within [`INTEGER_COUNT_CAP`] the integer count is kept
/// alongside, so equality checks between oracles can be exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactValue {
    log_value: f64,
    count: Option<u128>,
}

impl ExactValue {
    pub fn zero() -> Self {
        Self {
            log_value: f64::NEG_INFINITY,
            count: Some(0),
        }
    }

    pub fn one() -> Self {
        Self {
            log_value: 0.0,
            count: Some(1),
        }
    }

    pub fn from_count(count: u128) -> Self {
        Self {
            log_value: if count == 0 {
                f64::NEG_INFINITY
            } else {
                (count as f64).ln()
            },
            count: Some(count),
        }
    }

    pub fn from_log(log_value: f64) -> Self {
        Self {
            log_value,
            count: None,
        }
    }

    /// Natural log of the value; `-inf` when the value is zero.
    pub fn log_value(&self) -> f64 {
        self.log_value
    }

    /// Linear value. Exact when an integer count is attached and within
    /// f64 precision; may overflow to `inf` for huge logs.
    pub fn value(&self) -> f64 {
        match self.count {
            Some(c) => c as f64,
            None => self.log_value.exp(),
        }
    }

    pub fn count(&self) -> Option<u128> {
        self.count
    }

    pub fn is_zero(&self) -> bool {
        self.log_value == f64::NEG_INFINITY
    }
}

/// |a - b| <= tol * max(|a|, |b|), with zero handled symmetrically.
pub fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= tol * scale
}

/// Lexicographic next-permutation; returns false after the last one.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Linear entries scaled by the largest one, paired with n * ln(max) so the
/// caller can undo the normalization on a log result.
fn scaled_values(a: &LogMatrix) -> (Vec<f64>, f64) {
    let n = a.order();
    let m = a.max_log_entry();
    if m == f64::NEG_INFINITY {
        return (vec![0.0; n * n], 0.0);
    }
    let mut vals = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            vals.push((a.log_entry(i, j) - m).exp());
        }
    }
    (vals, n as f64 * m)
}

/// Permanent by direct enumeration of all permutations (order <= 9). The
/// empty matrix is allowed and yields 1, the base case of the first-column
/// expansion.
pub fn permanent_enum(a: &LogMatrix) -> Result<ExactValue, OracleError> {
    let n = a.order();
    if n > ENUM_CAP {
        return Err(OracleError::CapExceeded {
            what: "permanent enumeration",
            cap: ENUM_CAP,
            order: n,
        });
    }
    if n == 0 {
        return Ok(ExactValue::one());
    }
    let integer = a.is_zero_one();
    let (vals, log_shift) = scaled_values(a);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = KahanSum::new();
    let mut count: u128 = 0;
    loop {
        let mut prod = 1.0;
        for (i, &j) in perm.iter().enumerate() {
            prod *= vals[i * n + j];
            if prod == 0.0 {
                break;
            }
        }
        acc.add(prod);
        if integer && prod != 0.0 {
            count += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    if integer {
        return Ok(ExactValue::from_count(count));
    }
    let total = acc.value();
    Ok(if total <= 0.0 {
        ExactValue::from_log(f64::NEG_INFINITY)
    } else {
        ExactValue::from_log(total.ln() + log_shift)
    })
}

/// Hamilton by direct enumeration of the permutations of {2..n}
/// (order <= 9). Order 1 returns the (1,1) entry.
pub fn hamilton_enum(a: &LogMatrix) -> Result<ExactValue, OracleError> {
    let n = a.order();
    if n == 0 {
        return Err(OracleError::EmptyMatrix { what: "hamilton" });
    }
    if n > ENUM_CAP {
        return Err(OracleError::CapExceeded {
            what: "hamilton enumeration",
            cap: ENUM_CAP,
            order: n,
        });
    }
    let integer = a.is_zero_one();
    if n == 1 {
        return Ok(if integer {
            ExactValue::from_count(if a.is_zero(0, 0) { 0 } else { 1 })
        } else {
            ExactValue::from_log(a.log_entry(0, 0))
        });
    }
    let (vals, log_shift) = scaled_values(a);
    // perm[t] is the 0-based row of k_{t+1}; values range over 1..n.
    let mut perm: Vec<usize> = (1..n).collect();
    let mut acc = KahanSum::new();
    let mut count: u128 = 0;
    loop {
        // A(k1,1) * A(k2,k1) * ... * A(k_{n-1},k_{n-2}) * A(1,k_{n-1})
        let mut prod = vals[perm[0] * n];
        for t in 1..n - 1 {
            if prod == 0.0 {
                break;
            }
            prod *= vals[perm[t] * n + perm[t - 1]];
        }
        prod *= vals[perm[n - 2]];
        acc.add(prod);
        if integer && prod != 0.0 {
            count += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    if integer {
        return Ok(ExactValue::from_count(count));
    }
    let total = acc.value();
    Ok(if total <= 0.0 {
        ExactValue::from_log(f64::NEG_INFINITY)
    } else {
        ExactValue::from_log(total.ln() + log_shift)
    })
}

/// Hamilton via the first-column expansion
/// ham(A) = sum_{i=2..n} A(i,1) * ham(A'_{i1}), building each reduced
/// matrix explicitly. Exists to exercise the expansion identity and the
/// row-swap/delete construction; order <= 9.
pub fn hamilton_expand(a: &LogMatrix) -> Result<ExactValue, OracleError> {
    let n = a.order();
    if n == 0 {
        return Err(OracleError::EmptyMatrix { what: "hamilton" });
    }
    if n > ENUM_CAP {
        return Err(OracleError::CapExceeded {
            what: "hamilton expansion",
            cap: ENUM_CAP,
            order: n,
        });
    }
    let m = a.max_log_entry();
    if m == f64::NEG_INFINITY {
        return Ok(ExactValue::zero());
    }
    // Work on a copy normalized so every entry is in [0, 1].
    let scaled = LogMatrix::from_log_entries(
        n,
        (0..n * n)
            .map(|k| a.log_entry(k / n, k % n) - m)
            .collect(),
    )
    .expect("normalized entries stay representable");

    fn expand(a: &LogMatrix) -> f64 {
        let n = a.order();
        if n == 1 {
            return a.value(0, 0);
        }
        let mut acc = KahanSum::new();
        for i in 1..n {
            let w = a.value(i, 0);
            if w == 0.0 {
                continue;
            }
            acc.add(w * expand(&a.selection_minor(i)));
        }
        acc.value()
    }

    let total = expand(&scaled);
    Ok(if total <= 0.0 {
        ExactValue::from_log(f64::NEG_INFINITY)
    } else {
        ExactValue::from_log(total.ln() + n as f64 * m)
    })
}

pub fn permanent_ryser(a: &LogMatrix) -> Result<ExactValue, OracleError> {
    permanent_ryser_capped(a, DEFAULT_PERMANENT_CAP)
}

/// Permanent by Ryser's inclusion-exclusion over column subsets, iterated
/// in Gray-code order so each step updates the row sums by one column.
pub fn permanent_ryser_capped(a: &LogMatrix, cap: usize) -> Result<ExactValue, OracleError> {
    let n = a.order();
    if n > cap {
        return Err(OracleError::CapExceeded {
            what: "permanent",
            cap,
            order: n,
        });
    }
    if n == 0 {
        return Ok(ExactValue::one());
    }
    if a.is_zero_one() && n <= INTEGER_COUNT_CAP {
        return Ok(ExactValue::from_count(ryser_int(a)));
    }
    Ok(ryser_float(a))
}

fn ryser_int(a: &LogMatrix) -> u128 {
    let n = a.order();
    // Column-major 0/1 copies for cache-friendly row-sum updates.
    let cols: Vec<Vec<i64>> = (0..n)
        .map(|j| (0..n).map(|i| i64::from(!a.is_zero(i, j))).collect())
        .collect();
    let mut row_sums = vec![0i64; n];
    let mut total: i128 = 0;
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let bit = 1u64 << j;
        gray ^= bit;
        let add = gray & bit != 0;
        for (rs, &c) in row_sums.iter_mut().zip(&cols[j]) {
            if add {
                *rs += c;
            } else {
                *rs -= c;
            }
        }
        let mut term: i128 = 1;
        for &rs in &row_sums {
            if rs == 0 {
                term = 0;
                break;
            }
            term *= rs as i128;
        }
        if term != 0 {
            // Sign (-1)^(n - |S|).
            if (n as u32).wrapping_sub(gray.count_ones()) % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    debug_assert!(total >= 0);
    total.max(0) as u128
}

fn ryser_float(a: &LogMatrix) -> ExactValue {
    let n = a.order();
    let (vals, log_shift) = scaled_values(a);
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| vals[i * n + j]).collect())
        .collect();
    let mut row_sums = vec![0f64; n];
    let mut acc = KahanSum::new();
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let bit = 1u64 << j;
        gray ^= bit;
        let add = gray & bit != 0;
        for (rs, &c) in row_sums.iter_mut().zip(&cols[j]) {
            if add {
                *rs += c;
            } else {
                *rs -= c;
            }
        }
        let mut term = 1.0;
        for &rs in &row_sums {
            term *= rs;
            if term == 0.0 {
                break;
            }
        }
        if (n as u32).wrapping_sub(gray.count_ones()) % 2 == 0 {
            acc.add(term);
        } else {
            acc.add(-term);
        }
    }
    let total = acc.value();
    if total <= 0.0 {
        ExactValue::from_log(f64::NEG_INFINITY)
    } else {
        ExactValue::from_log(total.ln() + log_shift)
    }
}

pub fn hamilton_dp(a: &LogMatrix) -> Result<ExactValue, OracleError> {
    hamilton_dp_capped(a, DEFAULT_HAMILTON_CAP)
}

/// Hamilton via dynamic programming over (visited subset of {2..n},
/// endpoint) states, anchored at vertex 1.
pub fn hamilton_dp_capped(a: &LogMatrix, cap: usize) -> Result<ExactValue, OracleError> {
    let n = a.order();
    if n == 0 {
        return Err(OracleError::EmptyMatrix { what: "hamilton" });
    }
    if n > cap {
        return Err(OracleError::CapExceeded {
            what: "hamilton",
            cap,
            order: n,
        });
    }
    if n == 1 {
        return Ok(if a.is_zero_one() {
            ExactValue::from_count(if a.is_zero(0, 0) { 0 } else { 1 })
        } else {
            ExactValue::from_log(a.log_entry(0, 0))
        });
    }
    if a.is_zero_one() && n <= INTEGER_COUNT_CAP {
        return Ok(ExactValue::from_count(hamilton_dp_int(a)));
    }
    Ok(hamilton_dp_float(a))
}

fn hamilton_dp_int(a: &LogMatrix) -> u128 {
    let n = a.order();
    let m = n - 1; // interior vertices 2..n, 0-based original index v+1
    let full: usize = 1 << m;
    let mut dp = vec![0u64; full * m];
    for v in 0..m {
        if !a.is_zero(0, v + 1) {
            dp[(1 << v) * m + v] = 1;
        }
    }
    for mask in 1..full {
        for e in 0..m {
            if mask & (1 << e) == 0 {
                continue;
            }
            let cur = dp[mask * m + e];
            if cur == 0 {
                continue;
            }
            for u in 0..m {
                if mask & (1 << u) != 0 || a.is_zero(e + 1, u + 1) {
                    continue;
                }
                dp[(mask | (1 << u)) * m + u] += cur;
            }
        }
    }
    let mut total: u128 = 0;
    for e in 0..m {
        if !a.is_zero(e + 1, 0) {
            total += u128::from(dp[(full - 1) * m + e]);
        }
    }
    total
}

fn hamilton_dp_float(a: &LogMatrix) -> ExactValue {
    let n = a.order();
    let (vals, log_shift) = scaled_values(a);
    let m = n - 1;
    let full: usize = 1 << m;
    let mut dp = vec![0f64; full * m];
    for v in 0..m {
        dp[(1 << v) * m + v] = vals[v + 1];
    }
    for mask in 1..full {
        for e in 0..m {
            if mask & (1 << e) == 0 {
                continue;
            }
            let cur = dp[mask * m + e];
            if cur == 0.0 {
                continue;
            }
            let row = &vals[(e + 1) * n..(e + 2) * n];
            for u in 0..m {
                if mask & (1 << u) != 0 {
                    continue;
                }
                let w = row[u + 1];
                if w != 0.0 {
                    dp[(mask | (1 << u)) * m + u] += cur * w;
                }
            }
        }
    }
    let mut acc = KahanSum::new();
    for e in 0..m {
        acc.add(dp[(full - 1) * m + e] * vals[(e + 1) * n]);
    }
    let total = acc.value();
    if total <= 0.0 {
        ExactValue::from_log(f64::NEG_INFINITY)
    } else {
        ExactValue::from_log(total.ln() + log_shift)
    }
}

/// Number of Hamiltonian cycles of an undirected graph, counting a cycle
/// and its reversal once. Depth-first enumeration from vertex 1 with the
/// canonical orientation second-vertex < last-vertex.
pub fn count_hc_undirected(g: &UndirectedGraph) -> Result<u64, OracleError> {
    let n = g.order() as usize;
    if n > UNDIRECTED_COUNT_CAP {
        return Err(OracleError::CapExceeded {
            what: "undirected Hamiltonian cycle count",
            cap: UNDIRECTED_COUNT_CAP,
            order: n,
        });
    }
    if n < 3 {
        return Ok(0);
    }
    let mut adj = vec![0u16; n];
    for &(a, b) in g.edges() {
        adj[a as usize - 1] |= 1 << (b - 1);
        adj[b as usize - 1] |= 1 << (a - 1);
    }

    fn dfs(adj: &[u16], n: usize, current: usize, first: usize, visited: u16, count: &mut u64) {
        if visited == (1u16 << n) - 1 {
            // Close back to vertex 0; count once per undirected cycle.
            if adj[current] & 1 != 0 && first < current {
                *count += 1;
            }
            return;
        }
        let mut candidates = adj[current] & !visited;
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            dfs(adj, n, v, first, visited | (1 << v), count);
        }
    }

    let mut count = 0u64;
    let mut firsts = adj[0];
    while firsts != 0 {
        let v = firsts.trailing_zeros() as usize;
        firsts &= firsts - 1;
        dfs(&adj, n, v, v, 1 | (1 << v), &mut count);
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedDigraph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ones(n: usize) -> LogMatrix {
        LogMatrix::from_values(n, &vec![1.0; n * n]).unwrap()
    }

    fn complete_adj(n: u32) -> LogMatrix {
        WeightedDigraph::complete(n).adjacency_matrix()
    }

    pub(crate) fn random_matrix(n: usize, seed: u64) -> LogMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>()).collect();
        LogMatrix::from_values(n, &vals).unwrap()
    }

    pub(crate) fn random_zero_one(n: usize, density: f64, seed: u64) -> LogMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<f64> = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    0.0
                } else if rng.gen::<f64>() < density {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        LogMatrix::from_values(n, &vals).unwrap()
    }

    #[test]
    fn permanent_enum_small_cases() {
        assert_eq!(permanent_enum(&ones(3)).unwrap().count(), Some(6));
        assert_eq!(permanent_enum(&ones(4)).unwrap().count(), Some(24));
        assert_eq!(permanent_enum(&LogMatrix::empty()).unwrap().count(), Some(1));
        let zero_row = LogMatrix::from_values(3, &[1., 1., 1., 0., 0., 0., 1., 1., 1.]).unwrap();
        assert!(permanent_enum(&zero_row).unwrap().is_zero());
        let w = LogMatrix::from_values(2, &[1., 2., 3., 4.]).unwrap();
        assert!(relative_close(
            permanent_enum(&w).unwrap().value(),
            10.0,
            1e-12
        ));
    }

    #[test]
    fn permanent_ryser_small_cases() {
        assert_eq!(permanent_ryser(&ones(3)).unwrap().count(), Some(6));
        let id = LogMatrix::from_values(3, &[1., 0., 0., 0., 1., 0., 0., 0., 1.]).unwrap();
        assert_eq!(permanent_ryser(&id).unwrap().count(), Some(1));
        let w = LogMatrix::from_values(2, &[1., 2., 3., 4.]).unwrap();
        assert!(relative_close(
            permanent_ryser(&w).unwrap().value(),
            10.0,
            1e-12
        ));
    }

    #[test]
    fn ryser_matches_enumeration_on_random_inputs() {
        for seed in 0..20 {
            let n = 2 + (seed as usize % 8);
            let a = random_matrix(n, 900 + seed);
            let r = permanent_ryser(&a).unwrap().value();
            let e = permanent_enum(&a).unwrap().value();
            assert!(relative_close(r, e, 1e-9), "n={n} seed={seed}: {r} vs {e}");
        }
    }

    #[test]
    fn ryser_respects_cap() {
        let err = permanent_ryser_capped(&ones(5), 4).unwrap_err();
        assert!(matches!(err, OracleError::CapExceeded { cap: 4, order: 5, .. }));
    }

    #[test]
    fn hamilton_enum_small_cases() {
        let single = LogMatrix::from_values(1, &[5.0]).unwrap();
        assert!(relative_close(
            hamilton_enum(&single).unwrap().value(),
            5.0,
            1e-12
        ));
        assert_eq!(hamilton_enum(&complete_adj(4)).unwrap().count(), Some(6));
        let c3 = WeightedDigraph::directed_cycle(3).adjacency_matrix();
        assert_eq!(hamilton_enum(&c3).unwrap().count(), Some(1));
    }

    #[test]
    fn hamilton_dp_small_cases() {
        assert_eq!(hamilton_dp(&complete_adj(6)).unwrap().count(), Some(120));
        let c4 = WeightedDigraph::directed_cycle(4).adjacency_matrix();
        assert_eq!(hamilton_dp(&c4).unwrap().count(), Some(1));
        let err = hamilton_dp(&complete_adj(30)).unwrap_err();
        assert!(matches!(err, OracleError::CapExceeded { .. }));
    }

    #[test]
    fn hamilton_dp_matches_enum_on_random_01() {
        for seed in 0..10 {
            let a = random_zero_one(8, 0.6, 40 + seed);
            assert_eq!(
                hamilton_dp(&a).unwrap().count(),
                hamilton_enum(&a).unwrap().count(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn hamilton_expand_base_case_is_b_times_c() {
        let a = LogMatrix::from_values(2, &[0.3, 0.7, 0.2, 0.9]).unwrap();
        assert!(relative_close(
            hamilton_expand(&a).unwrap().value(),
            0.7 * 0.2,
            1e-12
        ));
        assert!(relative_close(
            hamilton_expand(&complete_adj(5)).unwrap().value(),
            24.0,
            1e-12
        ));
    }

    #[test]
    fn hamilton_routes_agree_on_random_weighted() {
        for seed in 0..10 {
            let n = 3 + (seed as usize % 5);
            let a = random_matrix(n, 7_000 + seed);
            let e = hamilton_enum(&a).unwrap().value();
            let x = hamilton_expand(&a).unwrap().value();
            let d = hamilton_dp(&a).unwrap().value();
            assert!(relative_close(e, x, 1e-9), "enum vs expand, seed {seed}");
            assert!(relative_close(e, d, 1e-9), "enum vs dp, seed {seed}");
        }
        let a = random_matrix(7, 99);
        assert!(relative_close(
            hamilton_expand(&a).unwrap().value(),
            hamilton_enum(&a).unwrap().value(),
            1e-9
        ));
    }

    #[test]
    fn hamilton_never_exceeds_permanent() {
        for seed in 0..15 {
            let n = 2 + (seed as usize % 8);
            let a = random_matrix(n, 3_000 + seed);
            assert!(
                hamilton_enum(&a).unwrap().log_value()
                    <= permanent_enum(&a).unwrap().log_value() + 1e-12
            );
        }
    }

    #[test]
    fn first_column_expansion_identity_for_permanent() {
        for seed in 0..8 {
            let n = 2 + (seed as usize % 7);
            let a = random_matrix(n, 500 + seed);
            let direct = permanent_enum(&a).unwrap().value();
            let mut acc = KahanSum::new();
            for i in 0..n {
                acc.add(a.value(i, 0) * permanent_enum(&a.minor(i, 0)).unwrap().value());
            }
            assert!(
                relative_close(direct, acc.value(), 1e-9),
                "seed {seed}: {direct} vs {}",
                acc.value()
            );
        }
    }

    #[test]
    fn enumeration_caps() {
        assert!(permanent_enum(&ones(10)).is_err());
        assert!(hamilton_enum(&ones(10)).is_err());
        assert!(hamilton_expand(&ones(10)).is_err());
    }

    #[test]
    fn undirected_counts() {
        assert_eq!(count_hc_undirected(&UndirectedGraph::complete(4)).unwrap(), 3);
        assert_eq!(count_hc_undirected(&UndirectedGraph::cycle(5)).unwrap(), 1);
        assert_eq!(count_hc_undirected(&UndirectedGraph::complete(5)).unwrap(), 12);
        let path = UndirectedGraph::new(4, vec![(1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(count_hc_undirected(&path).unwrap(), 0);
        assert!(count_hc_undirected(&UndirectedGraph::complete(13)).is_err());
    }
}
