//! Approximate counting and perfect sampling of Hamiltonian cycles in dense
//! weighted digraphs.
//!
//! The pipeline has three stages:
//!
//! 1. pad structural zeros of the adjacency matrix with a tiny positive value
//!    and rescale it to be nearly doubly stochastic with entries in `[0, 1]`
//!    ([`scaling`]),
//! 2. run sequential acceptance/rejection trials that either reject or select
//!    a Hamiltonian cycle with probability exactly proportional to its weight
//!    ([`sampler`]),
//! 3. turn the acceptance rate into an estimate of the total Hamiltonian
//!    cycle weight via the Bregman-style row-sum upper bound ([`bregman`],
//!    [`estimator`]).
//!
//! Exact brute-force and dynamic-programming oracles ([`exact`]) provide
//! ground truth at small orders, and [`experiments`] bundles reproducible
//! validation studies. All heavy quantities are carried in log space; see
//! [`matrix::LogMatrix`].

pub mod bregman;
pub mod estimator;
pub mod exact;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod numeric;
pub mod sampler;
pub mod scaling;

pub use estimator::{estimate, EstimateReport, EstimatorConfig};
pub use graph::{gen_dense_digraph, symmetric_lift, DensityProfile, UndirectedGraph, WeightedDigraph};
pub use matrix::LogMatrix;
pub use sampler::{run_trial, HamiltonianCycle, SelectionVector, TrialOutcome};
pub use scaling::{pad_zeros, scale, PaddedMatrix, ScaledInstance};
