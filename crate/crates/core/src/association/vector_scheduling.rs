//! Vector-scheduling association: users are `S`-dimensional jobs (their
//! activity columns) and cache states are machines.
//!
//! Demands are first rescaled per slot so a slot with `d_s ≥ Λ` requests has
//! total scaled load `Λ`. Users are then placed one by one at the state that
//! minimizes an exponential potential over all (slot, state) loads, provided
//! the chosen state stays under `3α + 1` in every slot; users that would
//! break the cap are deferred and afterwards placed by a min-max rule.

use crate::error::{Error, Result};
use crate::model::{ActivityMatrix, Association};

use super::AlgoReport;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VectorSchedulingOptions {
    /// Count first-phase loads too when placing deferred users. Off by
    /// default: deferred users only see each other's loads.
    pub combined_residual_loads: bool,
    /// Replaces `α = 10 log S / log log S`.
    pub alpha: Option<f64>,
}

/// `α = 10 log₂S / log₂log₂S`; requires `S ≥ 4` so the denominator is positive.
pub fn vector_scheduling_alpha(num_slots: usize) -> Result<f64> {
    if num_slots < 4 {
        return Err(Error::Precondition(format!(
            "S must be ≥ 4 for vector scheduling (got S = {num_slots})"
        )));
    }
    let log_s = (num_slots as f64).log2();
    Ok(10.0 * log_s / log_s.log2())
}

/// `d̄_{s,k} = min(Λ d_{s,k} / d_s, 1)`, zero for idle slots; slot-major.
pub fn scale_demands(demands: &ActivityMatrix, num_states: usize) -> Vec<f64> {
    let k = demands.num_users();
    let mut scaled = vec![0.0; demands.num_slots() * k];
    for (s, row) in demands.rows().enumerate() {
        let d: usize = row.iter().map(|&x| x as usize).sum();
        if d == 0 {
            continue;
        }
        let share = (num_states as f64 / d as f64).min(1.0);
        for (user, &x) in row.iter().enumerate() {
            if x == 1 {
                scaled[s * k + user] = share;
            }
        }
    }
    scaled
}

pub fn assoc_vector_scheduling(
    demands: &ActivityMatrix,
    num_states: usize,
    options: VectorSchedulingOptions,
) -> Result<AlgoReport> {
    if num_states == 0 {
        return Err(Error::InvalidConfig("number of cache states must be positive".into()));
    }
    let num_slots = demands.num_slots();
    let alpha = match options.alpha {
        Some(a) if a > 0.0 => {
            if num_slots == 0 {
                return Err(Error::Precondition("activity matrix has no slots".into()));
            }
            a
        }
        Some(a) => return Err(Error::InvalidConfig(format!("alpha must be positive, got {a}"))),
        None => vector_scheduling_alpha(num_slots)?,
    };
    let k = demands.num_users();
    let scaled = scale_demands(demands, num_states);
    let scaled = &scaled;
    let column = |user: usize| (0..num_slots).map(move |s| scaled[s * k + user]);
    let cap = 3.0 * alpha + 1.0;
    let ln_alpha = alpha.ln();
    let rate = alpha / num_states as f64;

    // Phase one: potential-guided placement under the load cap.
    let mut loads = vec![0.0f64; num_slots * num_states];
    let mut totals = vec![0.0f64; num_slots];
    let mut state_of = vec![usize::MAX; k];
    let mut residual = Vec::new();
    let mut placements = Vec::with_capacity(k);
    let mut trace = Vec::with_capacity(k);
    let mut exponents = vec![0.0f64; num_slots * num_states];

    for user in 0..k {
        let job: Vec<f64> = column(user).collect();
        let mut best: Option<(f64, usize)> = None;
        for cand in 0..num_states {
            // log Φ = log Σ_{s,λ} α^{L_{s,λ} - (α/Λ) T_s}, tentative placement applied
            let mut peak = f64::NEG_INFINITY;
            for s in 0..num_slots {
                let drift = rate * (totals[s] + job[s]);
                for state in 0..num_states {
                    let mut load = loads[s * num_states + state];
                    if state == cand {
                        load += job[s];
                    }
                    let e = (load - drift) * ln_alpha;
                    exponents[s * num_states + state] = e;
                    peak = peak.max(e);
                }
            }
            let log_potential =
                peak + exponents.iter().map(|&e| (e - peak).exp()).sum::<f64>().ln();
            if best.is_none_or(|(b, _)| log_potential < b) {
                best = Some((log_potential, cand));
            }
        }
        let (log_potential, chosen) = best.expect("at least one state");
        let fits = (0..num_slots).all(|s| loads[s * num_states + chosen] + job[s] < cap);
        if fits {
            for s in 0..num_slots {
                loads[s * num_states + chosen] += job[s];
                totals[s] += job[s];
            }
            state_of[user] = chosen;
            placements.push((user, chosen));
            trace.push(log_potential);
        } else {
            residual.push(user);
        }
    }
    let phase_one_max_load = loads.iter().copied().fold(0.0, f64::max);

    // Phase two: deferred users minimize their state's worst-slot load.
    let mut second = if options.combined_residual_loads {
        loads.clone()
    } else {
        vec![0.0f64; num_slots * num_states]
    };
    for &user in &residual {
        let job: Vec<f64> = column(user).collect();
        let mut best: Option<(f64, usize)> = None;
        for cand in 0..num_states {
            let worst = (0..num_slots)
                .map(|s| second[s * num_states + cand] + job[s])
                .fold(0.0, f64::max);
            if best.is_none_or(|(b, _)| worst < b) {
                best = Some((worst, cand));
            }
        }
        let (_, chosen) = best.expect("at least one state");
        for s in 0..num_slots {
            second[s * num_states + chosen] += job[s];
        }
        state_of[user] = chosen;
        placements.push((user, chosen));
    }

    // Final objective: the largest combined scaled load over (slot, state).
    let mut combined = vec![0.0f64; num_slots * num_states];
    for (user, &state) in state_of.iter().enumerate() {
        for (s, d) in column(user).enumerate() {
            combined[s * num_states + state] += d;
        }
    }
    let objective = combined.iter().copied().fold(0.0, f64::max);

    Ok(AlgoReport {
        assoc: Association::new(state_of, num_states)?,
        objective,
        objective_trace: trace,
        placements,
        residual_users: residual,
        alpha: Some(alpha),
        phase_one_max_load: Some(phase_one_max_load),
    })
}
