//! Synthetic workloads: power-law activity profiles and Bernoulli activity
//! matrices.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`. A uniform draw on `[0, 1)` is `(next_u64() >> 11) * 2^-53`
//! and a user is active when that draw is strictly below `p_k`, so `p = 0`
//! never fires and `p = 1` always does. Independent substreams are obtained
//! by mixing a parent seed with a stream index through SplitMix64.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{ActivityMatrix, ActivityProfile};

/// Number of equipopulated activity classes.
pub const PARETO_GROUPS: usize = 5;
/// Power-law exponent across the classes.
pub const PARETO_EXPONENT: f64 = 2.7;

/// Seed of a generator stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Deterministic child seed for substream `stream`.
    pub fn derive(self, stream: u64) -> RngSeed {
        RngSeed(splitmix64(self.0 ^ splitmix64(stream.wrapping_add(0x5851_F42D_4C95_7F2D))))
    }
}

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        RngSeed(seed)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw on `[0, 1)` with 53 random bits.
pub fn unit_draw<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Pareto-principle profile with the default five classes and exponent 2.7.
pub fn pareto_activity(num_users: usize) -> Result<ActivityProfile> {
    pareto_activity_with(num_users, PARETO_GROUPS, PARETO_EXPONENT)
}

/// Users split into `groups` equal classes; class `i` (1-based) is active with
/// probability `i^-exponent / Σ_j j^-exponent`.
pub fn pareto_activity_with(
    num_users: usize,
    groups: usize,
    exponent: f64,
) -> Result<ActivityProfile> {
    if groups == 0 || !num_users.is_multiple_of(groups) {
        return Err(Error::Precondition(format!(
            "K must be divisible by {groups} (got K = {num_users})"
        )));
    }
    let weights: Vec<f64> = (1..=groups).map(|i| (i as f64).powf(-exponent)).collect();
    let norm: f64 = weights.iter().sum();
    let per_group = num_users / groups;
    let probs = weights
        .iter()
        .flat_map(|w| std::iter::repeat_n(w / norm, per_group))
        .collect();
    ActivityProfile::new(probs)
}

/// `S` independent slots with entry `(s, k)` active with probability `p_k`.
/// Draws are taken slot by slot, user by user within a slot.
pub fn sample_activity_matrix(
    activity: &ActivityProfile,
    num_slots: usize,
    seed: RngSeed,
) -> Result<ActivityMatrix> {
    if num_slots == 0 {
        return Err(Error::Precondition("number of slots must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let k = activity.len();
    let mut demands = Vec::with_capacity(num_slots * k);
    for _ in 0..num_slots {
        demands.extend(
            activity
                .probs()
                .iter()
                .map(|&p| u8::from(unit_draw(&mut rng) < p)),
        );
    }
    ActivityMatrix::new(num_slots, k, demands)
}
