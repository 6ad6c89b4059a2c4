use crate::error::{Error, Result};
use crate::model::{ActivityMatrix, Association};

use super::AlgoReport;

/// `Σ_s Σ_λ v_{s,λ}²` over the assigned users; `None` entries are skipped.
pub fn sum_of_squares(demands: &ActivityMatrix, states: &[Option<usize>], num_states: usize) -> u64 {
    let mut total = 0u64;
    let mut loads = vec![0u64; num_states];
    for row in demands.rows() {
        loads.iter_mut().for_each(|l| *l = 0);
        for (&d, state) in row.iter().zip(states) {
            if let Some(s) = *state {
                loads[s] += d as u64;
            }
        }
        total += loads.iter().map(|l| l * l).sum::<u64>();
    }
    total
}

/// Greedy minimization of the per-slot sum of squared state populations.
///
/// Adding user `k` to state `λ` raises the objective by
/// `Σ_s d_{s,k} (2 v_{s,λ} + 1)`. That increment is kept per candidate pair
/// and refreshed through the pairwise co-activity counts, so each step is a
/// scan over `K·Λ` integers.
pub fn assoc_sum_squares_greedy(demands: &ActivityMatrix, num_states: usize) -> Result<AlgoReport> {
    if num_states == 0 {
        return Err(Error::InvalidConfig("number of cache states must be positive".into()));
    }
    let k = demands.num_users();
    let columns: Vec<Vec<u8>> = (0..k)
        .map(|u| (0..demands.num_slots()).map(|s| demands.get(s, u)).collect())
        .collect();
    let activity: Vec<u64> = columns
        .iter()
        .map(|c| c.iter().map(|&d| d as u64).sum())
        .collect();
    // cross[u][λ] = Σ_s d_{s,u} v_{s,λ}
    let mut cross = vec![vec![0u64; num_states]; k];
    let mut assigned = vec![false; k];
    let mut state_of = vec![0usize; k];
    let mut objective = 0u64;
    let mut trace = Vec::with_capacity(k);
    let mut placements = Vec::with_capacity(k);

    for _ in 0..k {
        let mut best: Option<(u64, usize, usize)> = None;
        for state in 0..num_states {
            for user in 0..k {
                if assigned[user] {
                    continue;
                }
                let delta = activity[user] + 2 * cross[user][state];
                if best.is_none_or(|(b, _, _)| delta < b) {
                    best = Some((delta, state, user));
                }
            }
        }
        let (delta, state, user) = best.expect("an unassigned user remains");
        assigned[user] = true;
        state_of[user] = state;
        objective += delta;
        trace.push(objective as f64);
        placements.push((user, state));
        let chosen = &columns[user];
        for other in 0..k {
            if assigned[other] {
                continue;
            }
            let overlap: u64 = columns[other]
                .iter()
                .zip(chosen)
                .map(|(&a, &b)| (a & b) as u64)
                .sum();
            cross[other][state] += overlap;
        }
    }

    let assoc = Association::new(state_of, num_states)?;
    let mut report = AlgoReport::greedy(assoc, trace, placements);
    report.objective = objective as f64;
    Ok(report)
}
