//! Reference implementations shared by the integration tests. They follow
//! the textbook definitions directly and share no code with the library.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Delivery time of an unsorted load vector as an exact rational.
pub fn delay_exact(loads: &[u32], t: usize) -> BigRational {
    let mut sorted = loads.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let lambda = sorted.len() as u64;
    let denom = binom(lambda, t as u64);
    let mut total = BigRational::zero();
    for (i, &l) in sorted.iter().enumerate() {
        let rank = i as u64 + 1;
        if rank + t as u64 > lambda {
            break;
        }
        let num = binom(lambda - rank, t as u64) * BigUint::from(l);
        total += BigRational::new(num.into(), denom.clone().into());
    }
    total
}

pub fn delay_f64(loads: &[u32], t: usize) -> f64 {
    delay_exact(loads, t).to_f64().unwrap()
}

/// Average delay by enumerating every subset of active users as a bitmask.
pub fn expected_delay_bruteforce(states: &[usize], probs: &[f64], lambda: usize, t: usize) -> f64 {
    let k = states.len();
    let mut total = 0.0;
    for mask in 0u32..(1u32 << k) {
        let mut prob = 1.0;
        let mut loads = vec![0u32; lambda];
        for u in 0..k {
            if mask >> u & 1 == 1 {
                prob *= probs[u];
                loads[states[u]] += 1;
            } else {
                prob *= 1.0 - probs[u];
            }
        }
        if prob > 0.0 {
            total += prob * delay_f64(&loads, t);
        }
    }
    total
}

pub fn data_delay(states: &[usize], rows: &[Vec<u8>], lambda: usize, t: usize) -> f64 {
    let mut total = 0.0;
    for row in rows {
        let mut loads = vec![0u32; lambda];
        for (u, &d) in row.iter().enumerate() {
            loads[states[u]] += d as u32;
        }
        total += delay_f64(&loads, t);
    }
    total / rows.len() as f64
}

pub fn sum_of_squares(states: &[Option<usize>], rows: &[Vec<u8>], lambda: usize) -> u64 {
    rows.iter()
        .map(|row| {
            let mut v = vec![0u64; lambda];
            for (u, &d) in row.iter().enumerate() {
                if let Some(s) = states[u] {
                    v[s] += d as u64;
                }
            }
            v.iter().map(|x| x * x).sum::<u64>()
        })
        .sum()
}

pub fn random_probs<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    (0..k)
        .map(|_| match rng.gen_range(0..10) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen::<f64>(),
        })
        .collect()
}

pub fn random_states<R: Rng>(rng: &mut R, k: usize, lambda: usize) -> Vec<usize> {
    (0..k).map(|_| rng.gen_range(0..lambda)).collect()
}

pub fn random_rows<R: Rng>(rng: &mut R, probs: &[f64], slots: usize) -> Vec<Vec<u8>> {
    (0..slots)
        .map(|_| probs.iter().map(|&p| (rng.gen::<f64>() < p) as u8).collect())
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}
