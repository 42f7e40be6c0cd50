//! One acceptance/rejection trial over the first-column expansion of the
//! Hamilton, plus the bookkeeping that maps an accepted selection back to
//! the cycle it picked.
//!
//! A trial walks n levels. At a level of order r > 1 it picks a row index
//! I in {2..r} of the current reduced matrix D with probability
//! p(i) = D(i,1) Br(D'_{i1}) / Br(D), or rejects with the residual
//! probability; at order 1 it accepts with probability D/Br(D). The level
//! probabilities telescope, so a completed walk selects a cycle with
//! probability exactly weight/Br(C) — rejection soaks up the rest, which is
//! what makes accepted cycles perfectly weight-proportional.
//!
//! The reduced matrices are never materialized: an active-row permutation
//! tracks the row swaps of the walk and the column cursor just advances,
//! so one level costs O(r) and one trial O(n^2).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bregman::{BregmanError, RowSums};
use crate::graph::WeightedDigraph;
use crate::matrix::LogMatrix;
use crate::numeric::KahanSum;
use crate::scaling::ScaledInstance;

/// Tolerance on the level probability sum: values in (1, 1+tol] are
/// clamped (the residual rejection probability becomes 0) and counted,
/// anything larger is a hard error because the bound guarantees the sum
/// never exceeds 1 in exact arithmetic.
pub const PROBABILITY_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum SamplerError {
    #[error("selection vector invalid: {0}")]
    MalformedSelection(String),
    #[error("instance has order 0")]
    EmptyInstance,
    #[error("level {level}: selection probabilities sum to {sum} > 1 beyond tolerance")]
    ProbabilityOverflow { level: usize, sum: f64 },
    #[error("selected entry at ({row},{col}) is a structural zero")]
    ZeroEntry { row: u32, col: u32 },
    #[error(transparent)]
    Bound(#[from] BregmanError),
    #[error("failed to start worker threads: {0}")]
    ThreadPool(String),
}

/// The per-level picks of a completed walk. pi(k) is 1-based into the rows
/// of the k-th reduced matrix: 1 < pi(k) <= n-k+1 for k < n, and pi(n) = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionVector {
    pi: Vec<u32>,
}

impl SelectionVector {
    pub fn new(pi: Vec<u32>) -> Result<Self, SamplerError> {
        let n = pi.len();
        if n == 0 {
            return Err(SamplerError::MalformedSelection("empty vector".into()));
        }
        if pi[n - 1] != 1 {
            return Err(SamplerError::MalformedSelection(format!(
                "last entry must be 1, got {}",
                pi[n - 1]
            )));
        }
        for (idx, &v) in pi.iter().enumerate().take(n - 1) {
            let k = idx + 1;
            let order = (n - k + 1) as u32;
            if v < 2 || v > order {
                return Err(SamplerError::MalformedSelection(format!(
                    "entry {k} is {v}, expected 2..={order}"
                )));
            }
        }
        Ok(Self { pi })
    }

    pub fn order(&self) -> usize {
        self.pi.len()
    }

    /// pi(k), 1-based k.
    pub fn get(&self, k: usize) -> u32 {
        self.pi[k - 1]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.pi
    }
}

/// A directed Hamiltonian cycle (1, k_1, ..., k_{n-1}, 1) and the log of
/// its weight in the matrix it was selected from.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianCycle {
    pub vertices: Vec<u32>,
    pub log_weight: f64,
}

/// Result of one trial.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub accepted: bool,
    pub selection: Option<SelectionVector>,
    pub cycle: Option<HamiltonianCycle>,
    /// Levels that completed a selection; equals the order on acceptance.
    pub levels_completed: usize,
    /// 1-based level at which the walk rejected, if it did.
    pub rejection_level: Option<usize>,
    /// Probability-sum clamps that occurred during this trial.
    pub clamp_events: u64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TrialOptions {
    /// Row sums are refreshed from the matrix every this many levels to
    /// bound incremental drift; `None` means ceil(n/4).
    pub recompute_every: Option<usize>,
}

/// Row in the original matrix of the entry selected at step `m` (1-based):
/// walks the reduced-index back up through the row swaps of the earlier
/// levels. The column of that entry is `m` itself.
fn original_row(pi: &SelectionVector, m: usize) -> u32 {
    let mut a = pi.get(m);
    for j in (2..=m).rev() {
        if a == pi.get(j - 1) - 1 {
            a = 1;
        } else {
            a += 1;
        }
    }
    a
}

/// Positions in the original matrix of all n selected entries, in step
/// order; the k-th position always sits in column k. 1-based pairs.
pub fn shc_trace(pi: &SelectionVector) -> Vec<(u32, u32)> {
    (1..=pi.order())
        .map(|m| (original_row(pi, m), m as u32))
        .collect()
}

/// Vertex sequence (1, k_1, ..., k_{n-1}, 1) of the cycle a selection
/// vector picked. Requires order >= 2.
pub fn recover_vertices(pi: &SelectionVector) -> Result<Vec<u32>, SamplerError> {
    let n = pi.order();
    if n < 2 {
        return Err(SamplerError::MalformedSelection(
            "recovery needs order >= 2".into(),
        ));
    }
    // k[i-1] holds k_i. k_{n-1} = pi(1); then k_i is the original row of
    // the entry selected at step k_{i+1}.
    let mut k = vec![0u32; n - 1];
    k[n - 2] = pi.get(1);
    for i in (1..=n.saturating_sub(2)).rev() {
        k[i - 1] = original_row(pi, k[i] as usize);
    }
    let mut vertices = Vec::with_capacity(n + 1);
    vertices.push(1);
    vertices.extend_from_slice(&k);
    vertices.push(1);
    Ok(vertices)
}

/// Recovered cycle together with its log-weight read off the matrix the
/// selection walked over.
pub fn recover(pi: &SelectionVector, c: &LogMatrix) -> Result<HamiltonianCycle, SamplerError> {
    let vertices = recover_vertices(pi)?;
    let mut log_weight = KahanSum::new();
    for pair in vertices.windows(2) {
        let (tail, head) = (pair[0], pair[1]);
        let le = c.log_entry(tail as usize - 1, head as usize - 1);
        if le == f64::NEG_INFINITY {
            return Err(SamplerError::ZeroEntry {
                row: tail,
                col: head,
            });
        }
        log_weight.add(le);
    }
    Ok(HamiltonianCycle {
        vertices,
        log_weight: log_weight.value(),
    })
}

/// True when `vertices` is a Hamiltonian cycle of `g`: starts and ends at
/// vertex 1, visits 2..n exactly once, and every hop is an edge of `g`.
pub fn is_valid_cycle(vertices: &[u32], g: &WeightedDigraph) -> bool {
    let n = g.order() as usize;
    if vertices.len() != n + 1 || vertices[0] != 1 || vertices[n] != 1 {
        return false;
    }
    let mut seen = vec![false; n + 1];
    seen[1] = true;
    for &v in &vertices[1..n] {
        if v < 2 || v as usize > n || seen[v as usize] {
            return false;
        }
        seen[v as usize] = true;
    }
    vertices.windows(2).all(|p| g.has_edge(p[0], p[1]))
}

/// RNG for one trial: an independent, reproducible stream keyed by
/// (master seed, trial index), so aggregates never depend on scheduling.
pub fn trial_rng(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

pub fn run_trial<R: Rng>(
    inst: &ScaledInstance,
    rng: &mut R,
) -> Result<TrialOutcome, SamplerError> {
    run_trial_with(inst, &TrialOptions::default(), rng)
}

pub fn run_trial_with<R: Rng>(
    inst: &ScaledInstance,
    opts: &TrialOptions,
    rng: &mut R,
) -> Result<TrialOutcome, SamplerError> {
    let c = &inst.c;
    let n = c.order();
    if n == 0 {
        return Err(SamplerError::EmptyInstance);
    }
    let recompute_every = opts.recompute_every.unwrap_or((n + 3) / 4).max(1);

    // active[i] = original row sitting at 1-based position i+1 of the
    // current reduced matrix; the column cursor is the level index.
    let mut active: Vec<u32> = (0..n as u32).collect();
    let mut sums = row_sums_from(c, &active, 0);
    let mut pi: Vec<u32> = Vec::with_capacity(n);
    let mut log_weight = KahanSum::new();
    let mut clamp_events = 0u64;
    let mut scratch_p: Vec<f64> = Vec::with_capacity(n);

    for level in 0..n {
        let r = n - level;
        if level > 0 && level % recompute_every == 0 {
            sums = row_sums_from(c, &active, level);
        }

        if r == 1 {
            // Exact last-level probability: D/Br(D) with D the single entry.
            let row = active[0] as usize;
            let log_d = c.log_entry(row, level);
            let d = log_d.exp().min(1.0);
            let rs = RowSums::new(vec![d])?;
            let p_accept = (log_d - rs.log_br()).exp();
            if p_accept > 1.0 + PROBABILITY_TOL {
                return Err(SamplerError::ProbabilityOverflow {
                    level: level + 1,
                    sum: p_accept,
                });
            }
            if p_accept > 1.0 {
                clamp_events += 1;
            }
            let u: f64 = rng.gen();
            if u >= p_accept {
                return Ok(TrialOutcome {
                    accepted: false,
                    selection: None,
                    cycle: None,
                    levels_completed: level,
                    rejection_level: Some(level + 1),
                    clamp_events,
                });
            }
            pi.push(1);
            log_weight.add(log_d);
            break;
        }

        let col1: Vec<f64> = active
            .iter()
            .map(|&row| c.value(row as usize, level).min(1.0))
            .collect();
        let rs = RowSums::new(sums.clone())?;
        let minors = rs.log_bound_minors(&col1)?;
        let log_br = rs.log_br();

        // Level probabilities for positions 2..r (0-based 1..r), in log
        // space first, then normalized through the largest one.
        scratch_p.clear();
        scratch_p.resize(r, 0.0);
        let mut log_pmax = f64::NEG_INFINITY;
        for i in 1..r {
            let le = c.log_entry(active[i] as usize, level);
            let lp = if le == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                le.min(0.0) + minors[i] - log_br
            };
            scratch_p[i] = lp;
            log_pmax = log_pmax.max(lp);
        }
        let mut sum_p = 0.0;
        if log_pmax > f64::NEG_INFINITY {
            let mut acc = KahanSum::new();
            for i in 1..r {
                let p = if scratch_p[i] == f64::NEG_INFINITY {
                    0.0
                } else {
                    (scratch_p[i] - log_pmax).exp() * log_pmax.exp()
                };
                scratch_p[i] = p;
                acc.add(p);
            }
            sum_p = acc.value();
        } else {
            for p in scratch_p.iter_mut() {
                *p = 0.0;
            }
        }
        if sum_p > 1.0 + PROBABILITY_TOL {
            return Err(SamplerError::ProbabilityOverflow {
                level: level + 1,
                sum: sum_p,
            });
        }
        if sum_p > 1.0 {
            clamp_events += 1;
        }

        let u: f64 = rng.gen();
        let mut chosen = None;
        let mut cum = KahanSum::new();
        for i in 1..r {
            cum.add(scratch_p[i]);
            if u < cum.value() {
                chosen = Some(i);
                break;
            }
        }
        let picked = match chosen {
            Some(i) => i,
            None => {
                return Ok(TrialOutcome {
                    accepted: false,
                    selection: None,
                    cycle: None,
                    levels_completed: level,
                    rejection_level: Some(level + 1),
                    clamp_events,
                });
            }
        };

        pi.push(picked as u32 + 1);
        log_weight.add(c.log_entry(active[picked] as usize, level));

        // Descend to D'_{I1}: drop the picked row, subtract the consumed
        // column from the survivors, and move the former first row into the
        // picked slot so reduced indices keep matching the walk's ordering.
        for (s, &d) in sums.iter_mut().zip(&col1) {
            *s -= d;
        }
        sums.remove(picked);
        sums[..picked].rotate_left(1);
        active.remove(picked);
        active[..picked].rotate_left(1);
    }

    let selection = SelectionVector::new(pi)?;
    let cycle = if n >= 2 {
        let vertices = recover_vertices(&selection)?;
        HamiltonianCycle {
            vertices,
            log_weight: log_weight.value(),
        }
    } else {
        HamiltonianCycle {
            vertices: vec![1, 1],
            log_weight: log_weight.value(),
        }
    };
    Ok(TrialOutcome {
        accepted: true,
        selection: Some(selection),
        cycle: Some(cycle),
        levels_completed: n,
        rejection_level: None,
        clamp_events,
    })
}

fn row_sums_from(c: &LogMatrix, active: &[u32], level: usize) -> Vec<f64> {
    let n = c.order();
    active
        .iter()
        .map(|&row| {
            let mut acc = KahanSum::new();
            for col in level..n {
                acc.add(c.value(row as usize, col).min(1.0));
            }
            acc.value()
        })
        .collect()
}

enum Parallelism {
    Sequential,
    Pool(rayon::ThreadPool),
}

/// Endless iterator over trial outcomes in trial-index order. Trials are
/// executed in fixed-size chunks, in parallel when a pool is configured;
/// because every trial owns the RNG stream derived from its index, the
/// yielded sequence is identical for any thread count or chunking.
pub struct TrialStream<'a> {
    inst: &'a ScaledInstance,
    opts: TrialOptions,
    seed: u64,
    par: Parallelism,
    chunk_size: usize,
    buffer: std::vec::IntoIter<Result<TrialOutcome, SamplerError>>,
    next_index: u64,
}

impl<'a> TrialStream<'a> {
    /// `threads == 1` runs on the calling thread; any other value builds a
    /// dedicated pool (`0` = one worker per available core).
    pub fn new(
        inst: &'a ScaledInstance,
        seed: u64,
        threads: usize,
        opts: TrialOptions,
    ) -> Result<Self, SamplerError> {
        let par = if threads == 1 {
            Parallelism::Sequential
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| SamplerError::ThreadPool(e.to_string()))?;
            Parallelism::Pool(pool)
        };
        Ok(Self {
            inst,
            opts,
            seed,
            par,
            chunk_size: 512,
            buffer: Vec::new().into_iter(),
            next_index: 0,
        })
    }

    fn refill(&mut self) {
        use rayon::prelude::*;
        let start = self.next_index;
        let end = start + self.chunk_size as u64;
        let inst = self.inst;
        let opts = self.opts;
        let seed = self.seed;
        let run = move |i: u64| run_trial_with(inst, &opts, &mut trial_rng(seed, i));
        let results: Vec<Result<TrialOutcome, SamplerError>> = match &self.par {
            Parallelism::Sequential => (start..end).map(run).collect(),
            Parallelism::Pool(pool) => {
                pool.install(|| (start..end).into_par_iter().map(run).collect())
            }
        };
        self.next_index = end;
        self.buffer = results.into_iter();
    }
}

impl Iterator for TrialStream<'_> {
    type Item = Result<TrialOutcome, SamplerError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.buffer.len() == 0 {
            self.refill();
        }
        self.buffer.next()
    }
}
