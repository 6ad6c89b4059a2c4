//! Binomial CDF, per-state load statistics and bounds on the expected
//! maximum load `E[l_1]`.
//!
//! The load of a state is a Poisson-binomial variable. Its CDF is sandwiched
//! by the binomial CDF with the same mean (Hoeffding), on either side of the
//! mean; those one-sided surrogates feed order-statistic bounds on the
//! maximum over states.

use crate::error::{Error, Result};
use crate::model::{ActivityProfile, Association};

/// Partial sums are cut short once the CDF passes this value.
pub const CDF_SATURATION: f64 = 1.0 - 1e-12;

/// Slack used when comparing an integer abscissa to a floating-point mean,
/// so a mean of `2 - 1e-15` behaves like `2`.
const MEAN_SLACK: f64 = 1e-9;

/// `P[Bin(n, q) <= x]`.
pub fn binom_cdf(n: u64, q: f64, x: i64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidProbability(q));
    }
    if x < 0 {
        return Ok(0.0);
    }
    let x = x as u64;
    if x >= n {
        return Ok(1.0);
    }
    Ok(binom_cdf_table(n, q, x as usize)[x as usize])
}

/// `[P[Bin(n, q) <= x] for x in 0..=upto]`, from the term recurrence
/// `b(i) = b(i-1) * (n-i+1)/i * q/(1-q)` carried in log space.
///
/// `q` must already be validated.
pub fn binom_cdf_table(n: u64, q: f64, upto: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(upto + 1);
    if q <= 0.0 {
        out.resize(upto + 1, 1.0);
        return out;
    }
    if q >= 1.0 {
        out.extend((0..=upto).map(|x| if x as u64 >= n { 1.0 } else { 0.0 }));
        return out;
    }
    let log_odds = q.ln() - (-q).ln_1p();
    let mut log_term = n as f64 * (-q).ln_1p();
    let mut acc = 0.0f64;
    for x in 0..=upto {
        if x as u64 >= n || acc >= CDF_SATURATION {
            out.push(if x as u64 >= n { 1.0 } else { acc.min(1.0) });
            continue;
        }
        if x > 0 {
            log_term += ((n - x as u64 + 1) as f64 / x as f64).ln() + log_odds;
        }
        acc += log_term.exp();
        out.push(acc.min(1.0));
    }
    out
}

/// Mean and variance of the number of active users in one state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GroupStats {
    pub mean: f64,
    pub variance: f64,
    pub size: usize,
}

impl GroupStats {
    /// Success probability of the binomial surrogate, `μ/|G|`.
    fn surrogate_q(&self) -> f64 {
        (self.mean / self.size as f64).clamp(0.0, 1.0)
    }
}

/// Statistics of state `state` (0-indexed).
pub fn group_stats(assoc: &Association, activity: &ActivityProfile, state: usize) -> GroupStats {
    let mut stats = GroupStats::default();
    for (user, &p) in activity.probs().iter().enumerate() {
        if assoc.state_of(user) == state {
            stats.mean += p;
            stats.variance += p * (1.0 - p);
            stats.size += 1;
        }
    }
    stats
}

pub fn all_group_stats(assoc: &Association, activity: &ActivityProfile) -> Vec<GroupStats> {
    let mut stats = vec![GroupStats::default(); assoc.num_states()];
    for (user, &p) in activity.probs().iter().enumerate() {
        let s = &mut stats[assoc.state_of(user)];
        s.mean += p;
        s.variance += p * (1.0 - p);
        s.size += 1;
    }
    stats
}

/// Lower and upper surrogates of one state's load CDF on `x = 0..len`.
///
/// * lower: `0` where `x < μ`, the binomial CDF where `x ≥ μ`;
/// * upper: the binomial CDF where `x ≤ μ - 1`, `1` above.
///
/// Empty groups hold a deterministic zero load, so both are `1`.
pub fn cdf_surrogates(stats: &GroupStats, len: usize) -> (Vec<f64>, Vec<f64>) {
    if stats.size == 0 || len == 0 {
        return (vec![1.0; len], vec![1.0; len]);
    }
    let table = binom_cdf_table(stats.size as u64, stats.surrogate_q(), len - 1);
    let lower = table
        .iter()
        .enumerate()
        .map(|(x, &f)| if x as f64 + MEAN_SLACK >= stats.mean { f } else { 0.0 })
        .collect();
    let upper = table
        .iter()
        .enumerate()
        .map(|(x, &f)| if x as f64 + 1.0 <= stats.mean + MEAN_SLACK { f } else { 1.0 })
        .collect();
    (lower, upper)
}

/// Brackets on `E[l_1]` from two independent arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxLoadBounds {
    /// `A - Σ_x Σ_λ F2(λ,x) / Λ`.
    pub cdf_lower: f64,
    /// `A - Σ_x max(0, 1 - Λ + Σ_λ F1(λ,x))`.
    pub cdf_upper: f64,
    /// `μ = K_p / Λ`.
    pub moment_lower: f64,
    /// `μ + sqrt((Λ-1)/Λ · Σ_λ (σ²_λ + (μ_λ - μ)²))`.
    pub moment_upper: f64,
}

impl MaxLoadBounds {
    /// Tightest lower bound.
    pub fn lower(&self) -> f64 {
        self.cdf_lower.max(self.moment_lower).min(self.upper())
    }

    /// Tightest upper bound.
    pub fn upper(&self) -> f64 {
        self.cdf_upper.min(self.moment_upper)
    }
}

/// Σ_x of the two CDF-surrogate sums used by the delay bracket:
/// `(Σ_x max(0, 1-Λ+Σ_λ F1), Σ_x Σ_λ F2 / Λ)` over `x = 0..A`.
pub(crate) fn surrogate_sums(stats: &[GroupStats], max_group: usize) -> (f64, f64) {
    let num_states = stats.len() as f64;
    let mut sum_f1 = vec![0.0; max_group];
    let mut sum_f2 = vec![0.0; max_group];
    for s in stats {
        let (f1, f2) = cdf_surrogates(s, max_group);
        for x in 0..max_group {
            sum_f1[x] += f1[x];
            sum_f2[x] += f2[x];
        }
    }
    let below = sum_f1
        .iter()
        .map(|&f| (1.0 - num_states + f).max(0.0))
        .sum();
    let above = sum_f2.iter().sum::<f64>() / num_states;
    (below, above)
}

/// Dispersion term `Σ_λ (σ²_λ + (μ_λ - μ)²)` with `μ` the mean of the `μ_λ`.
pub fn dispersion(stats: &[GroupStats]) -> f64 {
    let mu = stats.iter().map(|s| s.mean).sum::<f64>() / stats.len() as f64;
    stats
        .iter()
        .map(|s| s.variance + (s.mean - mu).powi(2))
        .sum()
}

pub fn max_load_expectation_bounds(
    assoc: &Association,
    activity: &ActivityProfile,
) -> Result<MaxLoadBounds> {
    assoc.check_users(activity.len(), "activity entries")?;
    let stats = all_group_stats(assoc, activity);
    let num_states = stats.len() as f64;
    let a = assoc.max_group_size();
    let (below, above) = surrogate_sums(&stats, a);
    let mu = activity.aggregate() / num_states;
    let spread = ((num_states - 1.0) / num_states * dispersion(&stats)).sqrt();
    Ok(MaxLoadBounds {
        cdf_lower: a as f64 - above,
        cdf_upper: a as f64 - below,
        moment_lower: mu,
        moment_upper: mu + spread,
    })
}
