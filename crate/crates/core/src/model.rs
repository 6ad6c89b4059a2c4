//! Network model: dimensions, activity, associations, loads and the
//! worst-case delivery time of the shared-cache multi-round scheme.
//!
//! Users and cache states are 0-indexed throughout the library. The CSV
//! readers and writers in [`crate::io`] translate to and from the 1-indexed
//! external formats.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Normalized cache size as an exact fraction of the library.
pub type Gamma = Ratio<u64>;

/// Default limit on the number of users for [`exact_avg_delay`].
pub const DEFAULT_ENUMERATION_LIMIT: usize = 25;

/// Parses a cache fraction given as `"num/den"`, or a bare integer (`"0"`, `"1"`).
pub fn parse_gamma(text: &str) -> Result<Gamma> {
    let text = text.trim();
    let gamma = match text.split_once('/') {
        Some((num, den)) => {
            let num: u64 = num
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad gamma numerator in {text:?}")))?;
            let den: u64 = den
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad gamma denominator in {text:?}")))?;
            if den == 0 {
                return Err(Error::Parse(format!("zero denominator in gamma {text:?}")));
            }
            Ratio::new(num, den)
        }
        None => {
            let whole: u64 = text
                .parse()
                .map_err(|_| Error::Parse(format!("gamma must be \"num/den\", got {text:?}")))?;
            Ratio::from_integer(whole)
        }
    };
    if gamma > Ratio::from_integer(1) {
        return Err(Error::InvalidConfig(format!("gamma {gamma} exceeds 1")));
    }
    Ok(gamma)
}

/// Network dimensions.
///
/// `t = Λγ` is always an integer; constructing a config whose `Λγ` is not
/// integral fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemConfig {
    num_users: usize,
    num_states: usize,
    gamma: Gamma,
    t: usize,
    subpacketization_cap: Option<u64>,
}

impl SystemConfig {
    pub fn new(num_users: usize, num_states: usize, gamma: Gamma) -> Result<Self> {
        if num_users == 0 {
            return Err(Error::InvalidConfig("number of users must be positive".into()));
        }
        if num_states == 0 {
            return Err(Error::InvalidConfig("number of cache states must be positive".into()));
        }
        if gamma > Ratio::from_integer(1) {
            return Err(Error::InvalidConfig(format!("gamma {gamma} exceeds 1")));
        }
        let scaled = gamma * Ratio::from_integer(num_states as u64);
        if !scaled.is_integer() {
            return Err(Error::InvalidConfig(format!(
                "Lambda * gamma = {num_states} * {gamma} is not an integer"
            )));
        }
        Ok(Self {
            num_users,
            num_states,
            gamma,
            t: scaled.to_integer() as usize,
            subpacketization_cap: None,
        })
    }

    /// Builds a config from the integer replication level `t`, i.e. `γ = t/Λ`.
    pub fn with_replication(num_users: usize, num_states: usize, t: usize) -> Result<Self> {
        if num_states == 0 {
            return Err(Error::InvalidConfig("number of cache states must be positive".into()));
        }
        if t > num_states {
            return Err(Error::InvalidConfig(format!("t = {t} exceeds Lambda = {num_states}")));
        }
        Self::new(num_users, num_states, Ratio::new(t as u64, num_states as u64))
    }

    /// Accepts a floating-point cache fraction, snapping it to the nearest
    /// multiple of `1/Λ`. Rejected if `Λγ` is further than `1e-9` from an integer.
    pub fn from_float_gamma(num_users: usize, num_states: usize, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidConfig(format!("gamma {gamma} is outside [0, 1]")));
        }
        let scaled = gamma * num_states as f64;
        let rounded = scaled.round();
        if (scaled - rounded).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "Lambda * gamma = {scaled} is not an integer"
            )));
        }
        Self::with_replication(num_users, num_states, rounded as usize)
    }

    /// Attaches a subpacketization cap; `C(Λ, t)` must not exceed it.
    pub fn with_cap(mut self, cap: u64) -> Result<Self> {
        if cap == 0 {
            return Err(Error::InvalidConfig("subpacketization cap must be positive".into()));
        }
        match binomial_u128(self.num_states as u64, self.t as u64) {
            Some(b) if b <= cap as u128 => {}
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "subpacketization C({}, {}) exceeds cap {cap}",
                    self.num_states, self.t
                )))
            }
        }
        self.subpacketization_cap = Some(cap);
        Ok(self)
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn gamma(&self) -> Gamma {
        self.gamma
    }

    pub fn gamma_f64(&self) -> f64 {
        *self.gamma.numer() as f64 / *self.gamma.denom() as f64
    }

    /// Replication level `t = Λγ`.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn subpacketization_cap(&self) -> Option<u64> {
        self.subpacketization_cap
    }

    /// `(Λ - t) / (1 + t)`: the delay of one active user per state.
    pub fn unit_delay(&self) -> f64 {
        (self.num_states - self.t) as f64 / (1 + self.t) as f64
    }

    pub fn delivery_weights(&self) -> DeliveryWeights {
        DeliveryWeights::new(self.num_states, self.t)
    }
}

/// Per-rank weights `C(Λ-λ, t) / C(Λ, t)` for `λ = 1..=Λ-t`.
///
/// Built as running products of ratios no larger than one, so no factorial
/// is ever formed.
#[derive(Debug, Clone, PartialEq)]
pub struct DeliveryWeights {
    num_states: usize,
    weights: Vec<f64>,
}

impl DeliveryWeights {
    pub fn new(num_states: usize, t: usize) -> Self {
        assert!(t <= num_states, "t must not exceed the number of states");
        let len = num_states - t;
        let mut weights = Vec::with_capacity(len);
        let mut w = 1.0;
        for j in 0..len {
            // C(Λ-j-1, t) / C(Λ-j, t) = (Λ-j-t) / (Λ-j)
            w *= (num_states - j - t) as f64 / (num_states - j) as f64;
            weights.push(w);
        }
        Self { num_states, weights }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    /// Delay of an already sorted (descending) profile, unchecked.
    pub fn delay_sorted(&self, profile: &[u32]) -> f64 {
        self.weights
            .iter()
            .zip(profile)
            .map(|(w, &l)| w * l as f64)
            .sum()
    }

    /// Delay of an arbitrary load vector; sorts the buffer in place.
    pub fn delay_of_loads(&self, loads: &mut [u32]) -> f64 {
        loads.sort_unstable_by(|a, b| b.cmp(a));
        self.delay_sorted(loads)
    }
}

/// Per-user request probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityProfile {
    probs: Vec<f64>,
}

impl ActivityProfile {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProbability(bad));
        }
        Ok(Self { probs })
    }

    pub fn uniform(num_users: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; num_users])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Expected number of active users `K_p`.
    pub fn aggregate(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// User-to-cache-state map. Every user holds exactly one state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Association {
    num_states: usize,
    state_of: Vec<usize>,
}

impl Association {
    pub fn new(state_of: Vec<usize>, num_states: usize) -> Result<Self> {
        if num_states == 0 {
            return Err(Error::InvalidConfig("number of cache states must be positive".into()));
        }
        if let Some(&bad) = state_of.iter().find(|&&s| s >= num_states) {
            return Err(Error::IndexOutOfRange {
                what: "cache state",
                index: bad + 1,
                max: num_states,
            });
        }
        Ok(Self { num_states, state_of })
    }

    pub fn num_users(&self) -> usize {
        self.state_of.len()
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn state_of(&self, user: usize) -> usize {
        self.state_of[user]
    }

    pub fn states(&self) -> &[usize] {
        &self.state_of
    }

    /// Members of each state, in user order.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.num_states];
        for (user, &state) in self.state_of.iter().enumerate() {
            groups[state].push(user);
        }
        groups
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_states];
        for &state in &self.state_of {
            sizes[state] += 1;
        }
        sizes
    }

    /// Largest group size `A`.
    pub fn max_group_size(&self) -> usize {
        self.group_sizes().into_iter().max().unwrap_or(0)
    }

    pub(crate) fn check_users(&self, num_users: usize, what: &'static str) -> Result<()> {
        if self.num_users() != num_users {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.num_users(),
                actual: num_users,
            });
        }
        Ok(())
    }

    pub(crate) fn check_config(&self, config: &SystemConfig) -> Result<()> {
        if self.num_states != config.num_states() {
            return Err(Error::DimensionMismatch {
                what: "cache states",
                expected: config.num_states(),
                actual: self.num_states,
            });
        }
        Ok(())
    }
}

/// Binary demand history: `S` slots by `K` users, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityMatrix {
    num_slots: usize,
    num_users: usize,
    demands: Vec<u8>,
}

impl ActivityMatrix {
    pub fn new(num_slots: usize, num_users: usize, demands: Vec<u8>) -> Result<Self> {
        if demands.len() != num_slots * num_users {
            return Err(Error::DimensionMismatch {
                what: "matrix entries",
                expected: num_slots * num_users,
                actual: demands.len(),
            });
        }
        if let Some(&bad) = demands.iter().find(|&&d| d > 1) {
            return Err(Error::Parse(format!("activity entries must be 0 or 1, got {bad}")));
        }
        Ok(Self {
            num_slots,
            num_users,
            demands,
        })
    }

    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Self> {
        let num_slots = rows.len();
        let num_users = rows.first().map_or(0, Vec::len);
        let mut demands = Vec::with_capacity(num_slots * num_users);
        for row in rows {
            if row.len() != num_users {
                return Err(Error::DimensionMismatch {
                    what: "columns per row",
                    expected: num_users,
                    actual: row.len(),
                });
            }
            demands.extend(row);
        }
        Self::new(num_slots, num_users, demands)
    }

    pub fn zeros(num_slots: usize, num_users: usize) -> Self {
        Self {
            num_slots,
            num_users,
            demands: vec![0; num_slots * num_users],
        }
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn get(&self, slot: usize, user: usize) -> u8 {
        self.demands[slot * self.num_users + user]
    }

    pub fn row(&self, slot: usize) -> &[u8] {
        &self.demands[slot * self.num_users..(slot + 1) * self.num_users]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.demands.chunks(self.num_users.max(1)).take(self.num_slots)
    }

    /// Number of requests `d_s` in a slot.
    pub fn slot_demand(&self, slot: usize) -> usize {
        self.row(slot).iter().map(|&d| d as usize).sum()
    }

    pub fn active_users(&self, slot: usize) -> Vec<usize> {
        self.row(slot)
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 1)
            .map(|(k, _)| k)
            .collect()
    }

    /// Fraction of slots in which each user is active.
    pub fn column_means(&self) -> Vec<f64> {
        let mut counts = vec![0usize; self.num_users];
        for row in self.rows() {
            for (c, &d) in counts.iter_mut().zip(row) {
                *c += d as usize;
            }
        }
        let slots = self.num_slots.max(1) as f64;
        counts.into_iter().map(|c| c as f64 / slots).collect()
    }
}

/// Number of active users per cache state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadVector(pub Vec<u32>);

/// Load vector sorted in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileVector(Vec<u32>);

impl ProfileVector {
    /// Wraps an already-sorted profile; rejects ascending steps.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::UnsortedProfile);
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }
}

impl fmt::Display for ProfileVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Counts active users per state.
pub fn load_vector(
    assoc: &Association,
    active_users: &[usize],
    config: &SystemConfig,
) -> Result<LoadVector> {
    assoc.check_config(config)?;
    let mut loads = vec![0u32; assoc.num_states()];
    for &user in active_users {
        if user >= assoc.num_users() {
            return Err(Error::IndexOutOfRange {
                what: "user",
                index: user + 1,
                max: assoc.num_users(),
            });
        }
        loads[assoc.state_of(user)] += 1;
    }
    Ok(LoadVector(loads))
}

pub fn profile(loads: &LoadVector) -> ProfileVector {
    let mut sorted = loads.0.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    ProfileVector(sorted)
}

/// Worst-case delivery time `Σ_{λ=1}^{Λ-t} l_λ C(Λ-λ,t)/C(Λ,t)`.
pub fn delivery_time(profile: &ProfileVector, config: &SystemConfig) -> Result<f64> {
    if profile.0.len() != config.num_states() {
        return Err(Error::DimensionMismatch {
            what: "profile entries",
            expected: config.num_states(),
            actual: profile.0.len(),
        });
    }
    if profile.0.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::UnsortedProfile);
    }
    Ok(config.delivery_weights().delay_sorted(&profile.0))
}

/// `C(n, k)` as `u128`, or `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Largest `k ≤ K` with `kγ` integral and `C(k, kγ) ≤ B_max`.
pub fn max_cache_states(num_users: usize, gamma: Gamma, cap: u64) -> Result<usize> {
    if cap == 0 {
        return Err(Error::InvalidConfig("subpacketization cap must be positive".into()));
    }
    if gamma == Ratio::from_integer(0) || gamma > Ratio::from_integer(1) {
        return Err(Error::InvalidConfig(format!("gamma {gamma} must lie in (0, 1]")));
    }
    (1..=num_users)
        .rev()
        .find(|&k| {
            let kt = gamma * Ratio::from_integer(k as u64);
            kt.is_integer()
                && binomial_u128(k as u64, kt.to_integer())
                    .is_some_and(|b| b <= cap as u128)
        })
        .ok_or_else(|| {
            Error::NoFeasibleStates(format!(
                "no k <= {num_users} with integral k*{gamma} and C(k, k*{gamma}) <= {cap}"
            ))
        })
}

/// Subpacket index sets `τ` (0-indexed) cached by state `state`: all
/// `t`-subsets of the states that contain `state`.
pub fn cache_state_contents(config: &SystemConfig, state: usize) -> Result<Vec<Vec<usize>>> {
    let n = config.num_states();
    if state >= n {
        return Err(Error::IndexOutOfRange {
            what: "cache state",
            index: state + 1,
            max: n,
        });
    }
    let t = config.t();
    if t == 0 {
        return Ok(Vec::new());
    }
    let others: Vec<usize> = (0..n).filter(|&s| s != state).collect();
    let (m, r) = (others.len(), t - 1);
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..r).collect();
    loop {
        let mut tau: Vec<usize> = pick.iter().map(|&i| others[i]).collect();
        tau.push(state);
        tau.sort_unstable();
        out.push(tau);
        let Some(i) = (0..r).rev().find(|&i| pick[i] < m - r + i) else {
            return Ok(out);
        };
        pick[i] += 1;
        for j in i + 1..r {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// Average delay over the slots of an activity matrix.
pub fn avg_delay_data(
    assoc: &Association,
    demands: &ActivityMatrix,
    config: &SystemConfig,
) -> Result<f64> {
    assoc.check_config(config)?;
    assoc.check_users(demands.num_users(), "matrix columns")?;
    if demands.num_slots() == 0 {
        return Err(Error::Precondition("activity matrix has no slots".into()));
    }
    let weights = config.delivery_weights();
    let mut loads = vec![0u32; assoc.num_states()];
    let mut total = 0.0;
    for row in demands.rows() {
        loads.iter_mut().for_each(|l| *l = 0);
        for (user, &d) in row.iter().enumerate() {
            loads[assoc.state_of(user)] += d as u32;
        }
        total += weights.delay_of_loads(&mut loads);
    }
    Ok(total / demands.num_slots() as f64)
}

/// Exact average delay by enumerating all `2^K` active sets.
pub fn exact_avg_delay(
    assoc: &Association,
    activity: &ActivityProfile,
    config: &SystemConfig,
) -> Result<f64> {
    exact_avg_delay_with_limit(assoc, activity, config, DEFAULT_ENUMERATION_LIMIT)
}

pub fn exact_avg_delay_with_limit(
    assoc: &Association,
    activity: &ActivityProfile,
    config: &SystemConfig,
    max_users: usize,
) -> Result<f64> {
    assoc.check_config(config)?;
    assoc.check_users(activity.len(), "activity entries")?;
    if activity.len() > max_users {
        return Err(Error::EnumerationLimit {
            users: activity.len(),
            limit: max_users,
        });
    }
    let weights = config.delivery_weights();
    let mut loads = vec![0u32; assoc.num_states()];
    let mut scratch = vec![0u32; assoc.num_states()];
    Ok(enumerate_subsets(
        0,
        1.0,
        assoc,
        activity.probs(),
        &weights,
        &mut loads,
        &mut scratch,
    ))
}

fn enumerate_subsets(
    user: usize,
    prob: f64,
    assoc: &Association,
    probs: &[f64],
    weights: &DeliveryWeights,
    loads: &mut [u32],
    scratch: &mut [u32],
) -> f64 {
    if prob == 0.0 {
        return 0.0;
    }
    if user == probs.len() {
        scratch.copy_from_slice(loads);
        return prob * weights.delay_of_loads(scratch);
    }
    let p = probs[user];
    let state = assoc.state_of(user);
    let idle = enumerate_subsets(user + 1, prob * (1.0 - p), assoc, probs, weights, loads, scratch);
    loads[state] += 1;
    let active = enumerate_subsets(user + 1, prob * p, assoc, probs, weights, loads, scratch);
    loads[state] -= 1;
    idle + active
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(k: usize, lambda: usize, t: usize) -> SystemConfig {
        SystemConfig::with_replication(k, lambda, t).unwrap()
    }

    #[test]
    fn delivery_time_hand_example() {
        let p = ProfileVector::new(vec![2, 1, 1, 0]).unwrap();
        let d = delivery_time(&p, &cfg(4, 4, 2)).unwrap();
        assert!((d - 7.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn delivery_time_degenerate_cases() {
        let zeros = ProfileVector::new(vec![0; 5]).unwrap();
        assert_eq!(delivery_time(&zeros, &cfg(5, 5, 2)).unwrap(), 0.0);
        let full = ProfileVector::new(vec![4, 2, 1]).unwrap();
        assert_eq!(delivery_time(&full, &cfg(7, 3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn delivery_time_rejects_bad_profiles() {
        let c = cfg(4, 4, 1);
        assert!(matches!(
            delivery_time(&ProfileVector(vec![0, 1, 0, 0]), &c),
            Err(Error::UnsortedProfile)
        ));
        assert!(matches!(
            delivery_time(&ProfileVector::new(vec![1, 0]).unwrap(), &c),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(ProfileVector::new(vec![0, 3]).is_err());
    }

    #[test]
    fn load_vector_counts() {
        let c = cfg(4, 2, 1);
        let assoc = Association::new(vec![0, 0, 1, 1], 2).unwrap();
        assert_eq!(load_vector(&assoc, &[0, 2], &c).unwrap().0, vec![1, 1]);
        assert_eq!(load_vector(&assoc, &[], &c).unwrap().0, vec![0, 0]);
        assert!(matches!(
            load_vector(&assoc, &[4], &c),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn load_vector_full_activity_uniform() {
        let c = cfg(6, 3, 1);
        let assoc = Association::new((0..6).map(|k| k % 3).collect(), 3).unwrap();
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(load_vector(&assoc, &all, &c).unwrap().0, vec![2, 2, 2]);
    }

    #[test]
    fn profile_sorts_descending() {
        assert_eq!(profile(&LoadVector(vec![0, 3, 1])).as_slice(), &[3, 1, 0]);
        assert_eq!(profile(&LoadVector(vec![3, 1, 0])).as_slice(), &[3, 1, 0]);
        assert_eq!(profile(&LoadVector(vec![2, 2, 2])).as_slice(), &[2, 2, 2]);
    }

    #[test]
    fn max_cache_states_enumeration() {
        assert_eq!(max_cache_states(10, Ratio::new(1, 2), 6).unwrap(), 4);
        // C(10, 5) = 252
        assert_eq!(max_cache_states(10, Ratio::new(1, 2), 252).unwrap(), 10);
        assert!(matches!(
            max_cache_states(4, Ratio::new(1, 2), 1),
            Err(Error::NoFeasibleStates(_))
        ));
        // 1/3 has no integral multiple at k <= 2
        assert!(max_cache_states(2, Ratio::new(1, 3), 100).is_err());
    }

    #[test]
    fn cache_contents() {
        let c = cfg(3, 3, 2);
        assert_eq!(
            cache_state_contents(&c, 0).unwrap(),
            vec![vec![0, 1], vec![0, 2]]
        );
        let full = cfg(4, 4, 4);
        for s in 0..4 {
            assert_eq!(cache_state_contents(&full, s).unwrap(), vec![vec![0, 1, 2, 3]]);
        }
        assert!(cache_state_contents(&cfg(4, 4, 0), 1).unwrap().is_empty());
        assert!(cache_state_contents(&c, 3).is_err());
    }

    #[test]
    fn cache_contents_cardinality() {
        for lambda in 1..=7usize {
            for t in 1..=lambda {
                let c = cfg(lambda, lambda, t);
                let expected = binomial_u128(lambda as u64 - 1, t as u64 - 1).unwrap() as usize;
                for s in 0..lambda {
                    let contents = cache_state_contents(&c, s).unwrap();
                    assert_eq!(contents.len(), expected, "Λ={lambda} t={t}");
                    assert!(contents.iter().all(|tau| tau.len() == t && tau.contains(&s)));
                }
            }
        }
    }

    #[test]
    fn avg_delay_data_examples() {
        let c = cfg(2, 2, 1);
        let assoc = Association::new(vec![0, 1], 2).unwrap();
        let d = ActivityMatrix::from_rows(vec![vec![1, 1]]).unwrap();
        assert!((avg_delay_data(&assoc, &d, &c).unwrap() - 0.5).abs() < 1e-12);
        let z = ActivityMatrix::zeros(3, 2);
        assert_eq!(avg_delay_data(&assoc, &z, &c).unwrap(), 0.0);
        let wrong = ActivityMatrix::zeros(3, 3);
        assert!(avg_delay_data(&assoc, &wrong, &c).is_err());
    }

    #[test]
    fn exact_avg_delay_examples() {
        let c = cfg(2, 2, 1);
        let assoc = Association::new(vec![0, 1], 2).unwrap();
        let p = ActivityProfile::new(vec![0.5, 0.5]).unwrap();
        assert!((exact_avg_delay(&assoc, &p, &c).unwrap() - 0.375).abs() < 1e-12);

        let ones = ActivityProfile::uniform(2, 1.0).unwrap();
        assert!((exact_avg_delay(&assoc, &ones, &c).unwrap() - 0.5).abs() < 1e-12);
        let zeros = ActivityProfile::uniform(2, 0.0).unwrap();
        assert_eq!(exact_avg_delay(&assoc, &zeros, &c).unwrap(), 0.0);
    }

    #[test]
    fn exact_avg_delay_guard() {
        let c = cfg(30, 2, 1);
        let assoc = Association::new(vec![0; 30], 2).unwrap();
        let p = ActivityProfile::uniform(30, 0.5).unwrap();
        assert!(matches!(
            exact_avg_delay(&assoc, &p, &c),
            Err(Error::EnumerationLimit { users: 30, limit: 25 })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(SystemConfig::new(10, 4, Ratio::new(1, 3)).is_err());
        let c = SystemConfig::new(10, 6, Ratio::new(1, 3)).unwrap();
        assert_eq!(c.t(), 2);
        let snapped = SystemConfig::from_float_gamma(10, 10, 0.2).unwrap();
        assert_eq!(snapped.t(), 2);
        assert_eq!(snapped.gamma(), Ratio::new(1, 5));
        assert!(SystemConfig::from_float_gamma(10, 4, 0.3).is_err());
        assert!(c.clone().with_cap(14).is_err());
        assert_eq!(c.with_cap(15).unwrap().subpacketization_cap(), Some(15));
        assert_eq!(parse_gamma("1/5").unwrap(), Ratio::new(1, 5));
        assert_eq!(parse_gamma("1").unwrap(), Ratio::from_integer(1));
        assert!(parse_gamma("3/2").is_err());
        assert!(parse_gamma("a/b").is_err());
        assert!(parse_gamma("1/0").is_err());
    }

    #[test]
    fn weights_match_binomial_ratios() {
        for lambda in 1..=20usize {
            for t in 0..=lambda {
                let w = DeliveryWeights::new(lambda, t);
                let denom = binomial_u128(lambda as u64, t as u64).unwrap() as f64;
                for (i, &wi) in w.as_slice().iter().enumerate() {
                    let num = binomial_u128((lambda - i - 1) as u64, t as u64).unwrap() as f64;
                    assert!((wi - num / denom).abs() < 1e-12);
                }
            }
        }
    }
}
