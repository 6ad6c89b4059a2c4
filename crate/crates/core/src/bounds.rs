//! Analytical delay bounds, the Monte-Carlo (sampling-based) estimator and
//! scaling-law envelopes.

use rayon::prelude::*;

use crate::combinatorics::{self, binom_cdf_table, dispersion, surrogate_sums};
use crate::error::{Error, Result};
use crate::model::{ActivityMatrix, ActivityProfile, Association, SystemConfig};
use crate::synthetic::{unit_draw, RngSeed};

/// Which result produced a bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSource {
    /// Arbitrary activity and association (CDF surrogates).
    ArbitraryActivity,
    /// Uniform activity under the uniform association (exact `E[l_1]`).
    UniformActivity,
    /// Best-case profile per slot of an activity matrix.
    DataDriven,
    /// Order-of-magnitude envelope without constants.
    Envelope,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayBounds {
    pub lower: f64,
    pub upper: f64,
    pub source: BoundSource,
}

impl DelayBounds {
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        self.lower - tol <= value && value <= self.upper + tol
    }

    /// `upper / lower`; infinite when the lower bound is zero.
    pub fn gap(&self) -> f64 {
        self.upper / self.lower
    }
}

fn require_multiple_states(config: &SystemConfig) -> Result<()> {
    if config.num_states() < 2 {
        return Err(Error::InvalidConfig(
            "delay bounds need at least two cache states".into(),
        ));
    }
    Ok(())
}

/// Combines bounds on `E[l_1]` into delay bounds:
/// `T ≤ (Λ-t)/(1+t) E[l_1]` and
/// `T ≥ (Λ-t)/(1+t) (E[l_1] t/(Λ-1) + K_p/Λ (Λ-t-1)/(Λ-1))`.
fn delay_from_max_load(
    config: &SystemConfig,
    max_load_lower: f64,
    max_load_upper: f64,
    expected_active: f64,
) -> (f64, f64) {
    let lambda = config.num_states() as f64;
    let t = config.t() as f64;
    let unit = config.unit_delay();
    let upper = unit * max_load_upper;
    let lower = if config.t() == config.num_states() {
        0.0
    } else {
        unit * (max_load_lower * t / (lambda - 1.0)
            + expected_active / lambda * (lambda - t - 1.0) / (lambda - 1.0))
    };
    (lower, upper)
}

/// Bracket on the average delay for any activity vector and association.
pub fn arbitrary_activity_bounds(
    assoc: &Association,
    activity: &ActivityProfile,
    config: &SystemConfig,
) -> Result<DelayBounds> {
    require_multiple_states(config)?;
    assoc.check_config(config)?;
    assoc.check_users(activity.len(), "activity entries")?;
    let stats = combinatorics::all_group_stats(assoc, activity);
    let a = assoc.max_group_size();
    let (below, above) = surrogate_sums(&stats, a);
    let (lower, upper) = delay_from_max_load(
        config,
        a as f64 - above,
        a as f64 - below,
        activity.aggregate(),
    );
    Ok(DelayBounds {
        lower: lower.min(upper),
        upper,
        source: BoundSource::ArbitraryActivity,
    })
}

/// `E[l_1] = I - Σ_{x=0}^{I-1} F_bin(I, p, x)^Λ` for `Λ` states with `I`
/// users each, all active with probability `p`. Powers are taken in log space.
pub fn uniform_expected_max_load(users_per_state: usize, num_states: usize, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if users_per_state == 0 {
        return Ok(0.0);
    }
    let cdf = binom_cdf_table(users_per_state as u64, p, users_per_state - 1);
    let lambda = num_states as f64;
    let mass: f64 = cdf
        .iter()
        .map(|&f| if f <= 0.0 { 0.0 } else { (lambda * f.ln()).exp() })
        .sum();
    Ok(users_per_state as f64 - mass)
}

/// Bracket for uniform activity `p` under the uniform association with
/// `I = K/Λ` users per state.
pub fn uniform_activity_bounds(
    config: &SystemConfig,
    users_per_state: usize,
    p: f64,
) -> Result<DelayBounds> {
    require_multiple_states(config)?;
    let lambda = config.num_states();
    if !config.num_users().is_multiple_of(lambda) {
        return Err(Error::Precondition(format!(
            "K = {} is not divisible by Lambda = {lambda}",
            config.num_users()
        )));
    }
    if users_per_state * lambda != config.num_users() {
        return Err(Error::DimensionMismatch {
            what: "users per state",
            expected: config.num_users() / lambda,
            actual: users_per_state,
        });
    }
    let max_load = uniform_expected_max_load(users_per_state, lambda, p)?;
    let (lower, upper) =
        delay_from_max_load(config, max_load, max_load, config.num_users() as f64 * p);
    Ok(DelayBounds {
        lower: lower.min(upper),
        upper,
        source: BoundSource::UniformActivity,
    })
}

/// Lower bound on the best achievable data-driven delay: each slot's `d_s`
/// requests spread as evenly as possible over the states.
pub fn data_driven_lower_bound(demands: &ActivityMatrix, config: &SystemConfig) -> Result<f64> {
    if demands.num_slots() == 0 {
        return Err(Error::Precondition("activity matrix has no slots".into()));
    }
    let lambda = config.num_states();
    let t = config.t();
    let unit = config.unit_delay();
    let mut total = 0.0;
    for s in 0..demands.num_slots() {
        let d = demands.slot_demand(s);
        let (base, rem) = (d / lambda, d % lambda);
        total += (base + 1) as f64 * unit;
        if rem + t < lambda {
            total -= tail_ratio(lambda - rem, lambda, t);
        }
    }
    Ok(total / demands.num_slots() as f64)
}

/// `C(a, t+1) / C(n, t)` for `a ≤ n`, as a product of ratios.
fn tail_ratio(a: usize, n: usize, t: usize) -> f64 {
    if t + 1 > a {
        return 0.0;
    }
    // C(a,t+1)/C(a,t) = (a-t)/(t+1); C(a,t)/C(n,t) = Π_j (n-j-t)/(n-j)
    let step = (a - t) as f64 / (t + 1) as f64;
    let shrink: f64 = (0..n - a)
        .map(|j| (n - j - t) as f64 / (n - j) as f64)
        .product();
    step * shrink
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbnEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub num_samples: usize,
}

/// Samples per independent substream.
const SBN_BLOCK: usize = 4096;

/// Sampling-based estimate of the average delay: draws independent activity
/// realizations and averages their delivery times. Reproducible for a given
/// `(seed, num_samples)` regardless of the rayon thread count.
pub fn sbn_estimate(
    assoc: &Association,
    activity: &ActivityProfile,
    config: &SystemConfig,
    num_samples: usize,
    seed: RngSeed,
) -> Result<SbnEstimate> {
    assoc.check_config(config)?;
    assoc.check_users(activity.len(), "activity entries")?;
    if num_samples == 0 {
        return Err(Error::Precondition("at least one sample is required".into()));
    }
    let weights = config.delivery_weights();
    let blocks = num_samples.div_ceil(SBN_BLOCK);
    let partials: Vec<(usize, f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = SBN_BLOCK.min(num_samples - b * SBN_BLOCK);
            let mut rng = seed.derive(b as u64).rng();
            let mut loads = vec![0u32; assoc.num_states()];
            let (mut mean, mut m2) = (0.0, 0.0);
            for i in 0..n {
                loads.iter_mut().for_each(|l| *l = 0);
                for (user, &p) in activity.probs().iter().enumerate() {
                    if unit_draw(&mut rng) < p {
                        loads[assoc.state_of(user)] += 1;
                    }
                }
                let x = weights.delay_of_loads(&mut loads);
                let delta = x - mean;
                mean += delta / (i + 1) as f64;
                m2 += delta * (x - mean);
            }
            (n, mean, m2)
        })
        .collect();
    let (mut n, mut mean, mut m2) = (0usize, 0.0, 0.0);
    for (nb, mb, m2b) in partials {
        let total = n + nb;
        let delta = mb - mean;
        mean += delta * nb as f64 / total as f64;
        m2 += m2b + delta * delta * (n as f64 * nb as f64) / total as f64;
        n = total;
    }
    let std_error = if n > 1 {
        (m2.max(0.0) / (n - 1) as f64 / n as f64).sqrt()
    } else {
        0.0
    };
    Ok(SbnEstimate {
        mean,
        std_error,
        num_samples: n,
    })
}

/// Scaling-law envelopes (values of the `Θ`/`O`/`Ω` expressions without
/// their unknown constants).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingRegime {
    /// Uniform activity with `Ip = Ω(log Λ)`: `Kp(1-γ)/(1+t)`.
    Dense { p: f64 },
    /// Uniform activity with `Ip` between `1/polylog Λ` and `o(log Λ)`:
    /// `Kp(1-γ) log Λ / ((1+t) Ip log(log Λ / Ip))`, base-2 logarithms.
    Sparse { p: f64 },
}

pub fn scaling_envelope(config: &SystemConfig, regime: ScalingRegime) -> Result<f64> {
    let k = config.num_users() as f64;
    let lambda = config.num_states() as f64;
    let gamma = config.gamma_f64();
    let t = config.t() as f64;
    match regime {
        ScalingRegime::Dense { p } => {
            check_prob(p)?;
            Ok(k * p * (1.0 - gamma) / (1.0 + t))
        }
        ScalingRegime::Sparse { p } => {
            check_prob(p)?;
            let ip = k / lambda * p;
            let log_ratio = (lambda.log2() / ip).log2();
            if ip <= 0.0 || log_ratio.is_nan() || log_ratio <= 0.0 {
                return Err(Error::Precondition(format!(
                    "sparse envelope needs log(log Lambda / Ip) > 0 (Ip = {ip})"
                )));
            }
            Ok(k * p * (1.0 - gamma) * lambda.log2() / ((1.0 + t) * ip * log_ratio))
        }
    }
}

fn check_prob(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

/// Association-dependent envelope pair for arbitrary activity:
/// lower `(K_p/Λ)(Λ-t)/(1+t)` (independent of the association) and upper
/// `(K_p/Λ + sqrt(Σ(σ²_i + (μ_i - μ)²)))(Λ-t)/(1+t)`.
pub fn arbitrary_activity_envelope(
    assoc: &Association,
    activity: &ActivityProfile,
    config: &SystemConfig,
) -> Result<DelayBounds> {
    assoc.check_config(config)?;
    assoc.check_users(activity.len(), "activity entries")?;
    let stats = combinatorics::all_group_stats(assoc, activity);
    let mu = activity.aggregate() / config.num_states() as f64;
    let unit = config.unit_delay();
    Ok(DelayBounds {
        lower: mu * unit,
        upper: (mu + dispersion(&stats).sqrt()) * unit,
        source: BoundSource::Envelope,
    })
}
