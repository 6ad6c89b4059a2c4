//! Association from activity probabilities alone, compared with round robin.
//! Every tenth user is heavy, so round robin stacks them on one state.

use ccsim::association::{assoc_stat_greedy, assoc_uniform};
use ccsim::bounds::{arbitrary_activity_bounds, sbn_estimate};
use ccsim::combinatorics::{all_group_stats, dispersion};
use ccsim::model::{ActivityProfile, SystemConfig};
use ccsim::synthetic::RngSeed;

fn main() -> ccsim::Result<()> {
    let (k, lambda) = (100, 10);
    let config = SystemConfig::with_replication(k, lambda, 2)?;
    let activity = ActivityProfile::new((0..k).map(|u| if u % 10 == 0 { 0.9 } else { 0.05 }).collect())?;
    let greedy = assoc_stat_greedy(&activity, lambda)?;
    let round_robin = assoc_uniform(k, lambda)?;
    for (name, assoc) in [("stat-greedy", &greedy.assoc), ("uniform", &round_robin)] {
        let spread = dispersion(&all_group_stats(assoc, &activity));
        let b = arbitrary_activity_bounds(assoc, &activity, &config)?;
        let est = sbn_estimate(assoc, &activity, &config, 20_000, RngSeed(7))?;
        println!(
            "{name:>12}: dispersion {spread:7.3}, delay {:.4} ± {:.4}, bracket [{:.3}, {:.3}]",
            est.mean, est.std_error, b.lower, b.upper
        );
    }
    println!("group sizes under stat-greedy: {:?}", greedy.assoc.group_sizes());
    Ok(())
}
