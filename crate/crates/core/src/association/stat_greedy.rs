use crate::error::{Error, Result};
use crate::model::{ActivityProfile, Association};

use super::AlgoReport;

/// `Σ_i (σ²_i + (μ_i - μ)²)` for a (possibly partial) assignment, with `μ`
/// the mean of the per-state means. Unassigned users are `None`.
pub fn dispersion_objective(
    activity: &ActivityProfile,
    states: &[Option<usize>],
    num_states: usize,
) -> f64 {
    let mut mu = vec![0.0; num_states];
    let mut var = 0.0;
    for (&p, state) in activity.probs().iter().zip(states) {
        if let Some(s) = *state {
            mu[s] += p;
            var += p * (1.0 - p);
        }
    }
    let mean = mu.iter().sum::<f64>() / num_states as f64;
    var + mu.iter().map(|m| (m - mean).powi(2)).sum::<f64>()
}

/// Greedy minimization of the load dispersion from activity probabilities.
///
/// Runs `K` steps. Each step scores every (unassigned user, state) pair by the
/// dispersion the partial assignment would have with that pair added, and
/// commits the minimizer.
pub fn assoc_stat_greedy(activity: &ActivityProfile, num_states: usize) -> Result<AlgoReport> {
    if num_states == 0 {
        return Err(Error::InvalidConfig("number of cache states must be positive".into()));
    }
    let probs = activity.probs();
    let k = probs.len();
    let lambda = num_states as f64;

    // Running sums: Σσ², Σμ_i², Σμ_i, and per-state μ_i.
    let mut mu = vec![0.0f64; num_states];
    let (mut var_sum, mut mu_sq_sum, mut total) = (0.0f64, 0.0f64, 0.0f64);
    let mut state_of = vec![usize::MAX; k];
    let mut trace = Vec::with_capacity(k);
    let mut placements = Vec::with_capacity(k);

    for _ in 0..k {
        let mut best: Option<(f64, usize, usize)> = None;
        for (state, &m) in mu.iter().enumerate() {
            for (user, &p) in probs.iter().enumerate() {
                if state_of[user] != usize::MAX {
                    continue;
                }
                let new_total = total + p;
                // Σ(μ_i - μ)² = Σμ_i² - (Σμ_i)²/Λ
                let score = var_sum
                    + p * (1.0 - p)
                    + (mu_sq_sum - m * m + (m + p) * (m + p))
                    - new_total * new_total / lambda;
                if best.is_none_or(|(b, _, _)| score < b) {
                    best = Some((score, state, user));
                }
            }
        }
        let (score, state, user) = best.expect("an unassigned user remains");
        let p = probs[user];
        var_sum += p * (1.0 - p);
        mu_sq_sum += (mu[state] + p).powi(2) - mu[state].powi(2);
        mu[state] += p;
        total += p;
        state_of[user] = state;
        trace.push(score);
        placements.push((user, state));
    }

    let assoc = Association::new(state_of, num_states)?;
    Ok(AlgoReport::greedy(assoc, trace, placements))
}
