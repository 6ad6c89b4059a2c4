//! User-to-cache-state association policies.
//!
//! Two baselines ([`assoc_random`], [`assoc_uniform`]), one policy driven by
//! activity probabilities ([`assoc_stat_greedy`]) and two driven by an
//! activity matrix ([`assoc_vector_scheduling`], [`assoc_sum_squares_greedy`]).
//! Greedy ties are broken by lowest state index, then lowest user index.

mod stat_greedy;
mod sum_squares;
mod vector_scheduling;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::Association;
use crate::synthetic::RngSeed;

pub use stat_greedy::{assoc_stat_greedy, dispersion_objective};
pub use sum_squares::{assoc_sum_squares_greedy, sum_of_squares};
pub use vector_scheduling::{
    assoc_vector_scheduling, scale_demands, vector_scheduling_alpha, VectorSchedulingOptions,
};

/// Output of an association algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgoReport {
    pub assoc: Association,
    /// Final value of the algorithm's own objective.
    pub objective: f64,
    /// Objective after each greedy step, in step order.
    pub objective_trace: Vec<f64>,
    /// `(user, state)` in the order the assignments were made.
    pub placements: Vec<(usize, usize)>,
    /// Users deferred to the second phase (vector scheduling only).
    pub residual_users: Vec<usize>,
    /// Potential base (vector scheduling only).
    pub alpha: Option<f64>,
    /// Largest per-slot scaled load among first-phase placements
    /// (vector scheduling only).
    pub phase_one_max_load: Option<f64>,
}

impl AlgoReport {
    fn greedy(assoc: Association, trace: Vec<f64>, placements: Vec<(usize, usize)>) -> Self {
        Self {
            assoc,
            objective: trace.last().copied().unwrap_or(0.0),
            objective_trace: trace,
            placements,
            residual_users: Vec::new(),
            alpha: None,
            phase_one_max_load: None,
        }
    }
}

/// Every user draws a state uniformly and independently.
pub fn assoc_random(num_users: usize, num_states: usize, seed: RngSeed) -> Result<Association> {
    if num_states == 0 {
        return Err(Error::InvalidConfig("number of cache states must be positive".into()));
    }
    let mut rng = seed.rng();
    let states = (0..num_users).map(|_| rng.gen_range(0..num_states)).collect();
    Association::new(states, num_states)
}

/// Round robin: user `k` gets state `k mod Λ`. Group sizes differ by at most
/// one, and are equal when `Λ` divides `K`.
pub fn assoc_uniform(num_users: usize, num_states: usize) -> Result<Association> {
    if num_states == 0 {
        return Err(Error::InvalidConfig("number of cache states must be positive".into()));
    }
    Association::new((0..num_users).map(|k| k % num_states).collect(), num_states)
}

/// Policy names accepted by the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Policy {
    Random,
    Uniform,
    StatGreedy,
    VectorScheduling,
    SumSquares,
}

impl Policy {
    pub const ALL: [Policy; 5] = [
        Policy::Random,
        Policy::Uniform,
        Policy::StatGreedy,
        Policy::VectorScheduling,
        Policy::SumSquares,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Random => "random",
            Policy::Uniform => "uniform",
            Policy::StatGreedy => "stat-greedy",
            Policy::VectorScheduling => "vecsched",
            Policy::SumSquares => "sumsq",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown algorithm {s:?} (expected random, uniform, stat-greedy, vecsched or sumsq)"
                ))
            })
    }
}
