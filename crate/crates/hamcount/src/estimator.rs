//! Sample budgeting, trial aggregation and the final estimate.
//!
//! The estimate of the total Hamiltonian cycle weight is
//! l^{-1} (s/t) Br(C): the acceptance rate s/t of the trials estimates
//! ham(C)/Br(C), multiplying by Br(C) recovers ham(C) and dividing by the
//! scale factor l maps back to the padded input matrix. Fixed-budget mode
//! takes the number of trials from the Chernoff bound
//! t = ceil(4 N (eps/2)^{-2} ln(1/delta)); adaptive mode instead runs until
//! a target number of acceptances is reached, which self-tunes to the true
//! acceptance rate at the cost of a small stopping bias.

use std::time::Instant;

use thiserror::Error;

use crate::bregman::{log_bregman_bound, BregmanError};
use crate::graph::WeightedDigraph;
use crate::sampler::{SamplerError, TrialOptions, TrialStream};
use crate::scaling::{pad_zeros, scale_with, ScaleError, ScaleOptions};

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error("epsilon must lie in (0, 1], got {0}")]
    EpsilonOutOfRange(f64),
    #[error("delta must lie in (0, 1], got {0}")]
    DeltaOutOfRange(f64),
    #[error("budget multiplier must be >= 1, got {0}")]
    BudgetOutOfRange(f64),
    #[error("target acceptances must be positive")]
    ZeroTarget,
    #[error("estimation requires order >= 2, got {0}")]
    OrderTooSmall(u32),
    #[error("density heuristic needs alpha in (0.75, 1], got {0}")]
    AlphaOutOfRange(f64),
    #[error("scaling failed: {0}")]
    Scaling(#[from] ScaleError),
    #[error("bound evaluation failed: {0}")]
    Bound(#[from] BregmanError),
    #[error("trial failed: {0}")]
    Trial(#[from] SamplerError),
}

/// How many trials to run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BudgetMode {
    /// Chernoff budget with multiplier N (ideally Br(C)/ham(C)).
    Fixed { budget: f64 },
    /// Run until this many acceptances, capped by `max_trials`.
    Adaptive { target_acceptances: u64 },
}

#[derive(Clone, Debug)]
pub struct EstimatorConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub mode: BudgetMode,
    pub seed: u64,
    pub max_trials: u64,
    /// Trial parallelism: 1 = calling thread, 0 = one worker per core.
    pub threads: usize,
    pub scale: ScaleOptions,
    pub trial: TrialOptions,
}

impl EstimatorConfig {
    pub fn new(
        epsilon: f64,
        delta: f64,
        mode: BudgetMode,
        seed: u64,
    ) -> Result<Self, EstimatorError> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(EstimatorError::EpsilonOutOfRange(epsilon));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(EstimatorError::DeltaOutOfRange(delta));
        }
        match mode {
            BudgetMode::Fixed { budget } if !(budget >= 1.0) => {
                return Err(EstimatorError::BudgetOutOfRange(budget));
            }
            BudgetMode::Adaptive {
                target_acceptances: 0,
            } => return Err(EstimatorError::ZeroTarget),
            _ => {}
        }
        Ok(Self {
            epsilon,
            delta,
            mode,
            seed,
            max_trials: 10_000_000,
            threads: 1,
            scale: ScaleOptions::default(),
            trial: TrialOptions::default(),
        })
    }

    /// Adaptive config with the default acceptance target for (eps, delta).
    pub fn adaptive(epsilon: f64, delta: f64, seed: u64) -> Result<Self, EstimatorError> {
        let target = default_adaptive_target(epsilon, delta)?;
        Self::new(
            epsilon,
            delta,
            BudgetMode::Adaptive {
                target_acceptances: target,
            },
            seed,
        )
    }
}

/// Trial count of the fixed budget: ceil(4 N (eps/2)^{-2} ln(1/delta)).
pub fn sample_budget(epsilon: f64, delta: f64, budget: f64) -> Result<u64, EstimatorError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(EstimatorError::EpsilonOutOfRange(epsilon));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(EstimatorError::DeltaOutOfRange(delta));
    }
    if !(budget >= 1.0) {
        return Err(EstimatorError::BudgetOutOfRange(budget));
    }
    let half = epsilon / 2.0;
    let t = 4.0 * budget * (1.0 / delta).ln() / (half * half);
    Ok(t.ceil() as u64)
}

/// Acceptance target of adaptive mode: ceil(4 (eps/2)^{-2} ln(2/delta)).
pub fn default_adaptive_target(epsilon: f64, delta: f64) -> Result<u64, EstimatorError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(EstimatorError::EpsilonOutOfRange(epsilon));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(EstimatorError::DeltaOutOfRange(delta));
    }
    let half = epsilon / 2.0;
    Ok((4.0 * (2.0 / delta).ln() / (half * half)).ceil() as u64)
}

/// Heuristic prefill for the fixed-mode budget multiplier on an alpha-n
/// dense digraph: n^(0.5 + 0.5/(2 alpha - 1) + 1/(2 alpha - 1.5)), the
/// product of the known bound-to-permanent and permanent-to-Hamilton
/// growth rates, with unit constant. Advisory only.
pub fn suggest_budget(g: &WeightedDigraph, alpha: f64) -> Result<f64, EstimatorError> {
    if !(alpha > 0.75 && alpha <= 1.0) {
        return Err(EstimatorError::AlphaOutOfRange(alpha));
    }
    let exponent = 0.5 + 0.5 / (2.0 * alpha - 1.0) + 1.0 / (2.0 * alpha - 1.5);
    Ok(f64::from(g.order()).powf(exponent))
}

/// Everything a run produces. `log_estimate` is
/// -log l + log s - log t + log Br(C); `-inf` when no trial accepted.
#[derive(Clone, Debug)]
pub struct EstimateReport {
    pub n: u32,
    pub alpha: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub mode: BudgetMode,
    pub trials: u64,
    pub acceptances: u64,
    pub log_br_c: f64,
    pub log_scale: f64,
    pub log_estimate: f64,
    pub clamp_events: u64,
    pub scaling_sweeps: u64,
    pub wall_ms: u64,
}

impl EstimateReport {
    /// Linear estimate when it is representable in an f64.
    pub fn estimate(&self) -> Option<f64> {
        if self.log_estimate == f64::NEG_INFINITY {
            return Some(0.0);
        }
        let v = self.log_estimate.exp();
        v.is_finite().then_some(v)
    }

    /// Log of the trivial upper bound Br(C)/l; reported when s = 0 so the
    /// caller still sees the scale of the instance.
    pub fn log_upper_bound(&self) -> f64 {
        self.log_br_c - self.log_scale
    }

    fn mode_text(&self) -> String {
        match self.mode {
            BudgetMode::Fixed { budget } => format!("fixed(N={budget})"),
            BudgetMode::Adaptive { target_acceptances } => {
                format!("adaptive(target={target_acceptances})")
            }
        }
    }

    fn fmt_linear(v: f64) -> String {
        if v.is_finite() {
            format!("{v}")
        } else {
            "overflow".to_string()
        }
    }

    /// Key/value document, one concern per line. Keys are stable; every
    /// value except `wall_ms` is reproducible from (input, config, seed).
    pub fn to_text(&self) -> String {
        let estimate = if self.log_estimate == f64::NEG_INFINITY {
            "0".to_string()
        } else {
            Self::fmt_linear(self.log_estimate.exp())
        };
        format!(
            "n={}\nalpha={}\nepsilon={}\ndelta={}\nseed={}\nmode={}\nt={}\ns={}\n\
             log_br_c={}\nlog_l={}\nlog_estimate={}\nestimate={}\nclamp_events={}\n\
             scaling_iters={}\nwall_ms={}\n",
            self.n,
            self.alpha,
            self.epsilon,
            self.delta,
            self.seed,
            self.mode_text(),
            self.trials,
            self.acceptances,
            self.log_br_c,
            self.log_scale,
            self.log_estimate,
            estimate,
            self.clamp_events,
            self.scaling_sweeps,
            self.wall_ms,
        )
    }
}

/// Pad, scale and run trials on a digraph, then aggregate the estimate of
/// its total Hamiltonian cycle weight. An all-rejection run is not an
/// error: the report comes back with s = 0, a `-inf` log-estimate and the
/// Br(C)/l upper bound still readable.
pub fn estimate(
    g: &WeightedDigraph,
    cfg: &EstimatorConfig,
) -> Result<EstimateReport, EstimatorError> {
    if g.order() < 2 {
        return Err(EstimatorError::OrderTooSmall(g.order()));
    }
    let start = Instant::now();
    let padded = pad_zeros(&g.adjacency_matrix(), cfg.epsilon)?;
    let inst = scale_with(&padded, &cfg.scale)?;
    let bound = log_bregman_bound(&inst.c)?;

    let mut trials = 0u64;
    let mut acceptances = 0u64;
    let mut clamp_events = bound.clamped_entries;

    let mut stream = TrialStream::new(&inst, cfg.seed, cfg.threads, cfg.trial)?;
    match cfg.mode {
        BudgetMode::Fixed { budget } => {
            let t_target = sample_budget(cfg.epsilon, cfg.delta, budget)?.min(cfg.max_trials);
            while trials < t_target {
                let outcome = stream.next().expect("trial stream is endless")?;
                trials += 1;
                clamp_events += outcome.clamp_events;
                if outcome.accepted {
                    acceptances += 1;
                }
            }
        }
        BudgetMode::Adaptive { target_acceptances } => {
            while acceptances < target_acceptances && trials < cfg.max_trials {
                let outcome = stream.next().expect("trial stream is endless")?;
                trials += 1;
                clamp_events += outcome.clamp_events;
                if outcome.accepted {
                    acceptances += 1;
                }
            }
        }
    }

    let log_estimate = if acceptances == 0 {
        f64::NEG_INFINITY
    } else {
        -inst.log_scale + (acceptances as f64).ln() - (trials as f64).ln() + bound.log_br
    };

    Ok(EstimateReport {
        n: g.order(),
        alpha: g.density().alpha,
        epsilon: cfg.epsilon,
        delta: cfg.delta,
        seed: cfg.seed,
        mode: cfg.mode,
        trials,
        acceptances,
        log_br_c: bound.log_br,
        log_scale: inst.log_scale,
        log_estimate,
        clamp_events,
        scaling_sweeps: inst.diagnostics.sweeps,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::hamilton_dp;
    use crate::graph::{gen_dense_digraph, WeightedDigraph};

    #[test]
    fn budget_frozen_values() {
        // 4 * 1 * (1/2)^{-2} * ln(e) = 16
        let t = sample_budget(1.0, (-1.0f64).exp(), 1.0).unwrap();
        assert_eq!(t, 16);
        // 4 * 1 * (1/4)^{-2} * 1 = 64
        let t = sample_budget(0.5, (-1.0f64).exp(), 1.0).unwrap();
        assert_eq!(t, 64);
        // Linearity in N, up to the ceiling.
        let a = sample_budget(0.37, 0.2, 10.0).unwrap();
        let b = sample_budget(0.37, 0.2, 20.0).unwrap();
        assert!(b == 2 * a || b == 2 * a - 1 || b == 2 * a + 1);
        assert!(sample_budget(0.0, 0.5, 1.0).is_err());
        assert!(sample_budget(0.5, 1.5, 1.0).is_err());
        assert!(sample_budget(0.5, 0.5, 0.5).is_err());
    }

    #[test]
    fn suggested_budget_exponents() {
        let g = gen_dense_digraph(10, 0.85, 1).unwrap();
        let n = 10f64;
        let got = suggest_budget(&g, 0.85).unwrap();
        let exponent = got.ln() / n.ln();
        assert!((exponent - 6.214285714285714).abs() < 1e-9);
        let got = suggest_budget(&g, 1.0).unwrap();
        assert!((got.ln() / n.ln() - 3.0).abs() < 1e-9);
        assert!(matches!(
            suggest_budget(&g, 0.75),
            Err(EstimatorError::AlphaOutOfRange(_))
        ));
    }

    #[test]
    fn complete_digraph_estimate_lands_near_oracle() {
        let g = WeightedDigraph::complete(6);
        let truth = hamilton_dp(&g.adjacency_matrix()).unwrap().value(); // 120
        let cfg = EstimatorConfig::adaptive(0.25, 0.1, 42).unwrap();
        let report = estimate(&g, &cfg).unwrap();
        let est = report.estimate().unwrap();
        assert!(
            est >= (1.0 - 0.25) * truth && est <= (1.0 + 0.25) * (1.0 + 0.25 / 3.0) * truth,
            "estimate {est} vs oracle {truth}"
        );
        assert_eq!(report.acceptances, 767); // ceil(4*(1/8)^{-2} ln 20)
        assert!(report.trials >= report.acceptances);
    }

    #[test]
    fn acceptance_rate_matches_bound_ratio() {
        // s/t estimates ham(C)/Br(C); on the complete digraph the scaled
        // matrix is the adjacency itself, so the ratio is computable from
        // the oracles.
        let g = WeightedDigraph::complete(5);
        let padded = pad_zeros(&g.adjacency_matrix(), 0.25).unwrap();
        let inst = crate::scaling::scale(&padded).unwrap();
        let log_ham_c = hamilton_dp(&inst.c).unwrap().log_value();
        let log_br_c = log_bregman_bound(&inst.c).unwrap().log_br;
        let p = (log_ham_c - log_br_c).exp();

        // ~52k trials at this budget.
        let mut cfg =
            EstimatorConfig::new(0.25, 0.1, BudgetMode::Fixed { budget: 820.0 }, 7).unwrap();
        cfg.max_trials = 60_000;
        let report = estimate(&g, &cfg).unwrap();
        let rate = report.acceptances as f64 / report.trials as f64;
        let sigma = (p * (1.0 - p) / report.trials as f64).sqrt();
        assert!(
            (rate - p).abs() <= 3.0 * sigma,
            "rate {rate}, oracle ratio {p}, 3 sigma {}",
            3.0 * sigma
        );
    }

    #[test]
    fn identical_configs_give_identical_reports_across_threads() {
        let g = gen_dense_digraph(9, 0.8, 5).unwrap();
        let mut cfg = EstimatorConfig::adaptive(0.3, 0.2, 99).unwrap();
        cfg.threads = 1;
        let a = estimate(&g, &cfg).unwrap();
        cfg.threads = 4;
        let b = estimate(&g, &cfg).unwrap();
        assert_eq!(a.trials, b.trials);
        assert_eq!(a.acceptances, b.acceptances);
        assert_eq!(a.log_estimate, b.log_estimate);
        assert_eq!(a.clamp_events, b.clamp_events);
    }

    #[test]
    fn no_acceptance_reports_zero_and_upper_bound() {
        // Two disjoint directed triangles: no Hamiltonian cycle at all, so
        // only padded phantom cycles could ever be accepted.
        let g = WeightedDigraph::new(
            6,
            vec![
                (1, 2, 1.0),
                (2, 3, 1.0),
                (3, 1, 1.0),
                (4, 5, 1.0),
                (5, 6, 1.0),
                (6, 4, 1.0),
            ],
        )
        .unwrap();
        let mut cfg = EstimatorConfig::adaptive(0.25, 0.1, 3).unwrap();
        cfg.max_trials = 2_000;
        let report = estimate(&g, &cfg).unwrap();
        assert_eq!(report.acceptances, 0);
        assert_eq!(report.trials, 2_000);
        assert_eq!(report.log_estimate, f64::NEG_INFINITY);
        assert_eq!(report.estimate(), Some(0.0));
        assert!(report.log_upper_bound().is_finite());
        let text = report.to_text();
        assert!(text.contains("s=0\n"));
        assert!(text.contains("log_estimate=-inf\n"));
        assert!(text.contains("estimate=0\n"));
    }

    #[test]
    fn report_text_has_the_stable_keys_in_order(){
        let g = WeightedDigraph::complete(5);
        let cfg = EstimatorConfig::adaptive(0.5, 0.5, 1).unwrap();
        let report = estimate(&g, &cfg).unwrap();
        let text = report.to_text();
        let keys: Vec<&str> = text.lines().map(|l| l.split('=').next().unwrap()).collect();
        assert_eq!(
            keys,
            vec![
                "n",
                "alpha",
                "epsilon",
                "delta",
                "seed",
                "mode",
                "t",
                "s",
                "log_br_c",
                "log_l",
                "log_estimate",
                "estimate",
                "clamp_events",
                "scaling_iters",
                "wall_ms"
            ]
        );
    }
}
