//! Delivery time of one slot and the exact average over random activity.

use ccsim::model::{
    cache_state_contents, delivery_time, exact_avg_delay, load_vector, max_cache_states, parse_gamma,
    profile, ActivityProfile, Association, SystemConfig,
};

fn main() -> ccsim::Result<()> {
    let gamma = parse_gamma("1/4")?;
    // the largest number of cache states whose subpacketization stays below 100
    let lambda = max_cache_states(12, gamma, 100)?;
    let config = SystemConfig::new(12, lambda, gamma)?;
    println!("K=12 gamma={gamma}: Lambda={lambda}, t={}", config.t());
    println!("state 1 caches subpackets {:?}", cache_state_contents(&config, 0)?);

    let assoc = Association::new((0..12).map(|k| k % lambda).collect(), lambda)?;
    let loads = load_vector(&assoc, &[0, 1, 2, 4, 8, 11], &config)?;
    let sorted = profile(&loads);
    println!("loads {:?} -> profile {sorted}: T = {:.4}", loads.0, delivery_time(&sorted, &config)?);

    let activity = ActivityProfile::new(vec![0.9, 0.1, 0.5, 0.3, 0.7, 0.2, 0.6, 0.4, 0.8, 0.05, 0.15, 0.25])?;
    println!("exact average delay: {:.4}", exact_avg_delay(&assoc, &activity, &config)?);
    Ok(())
}
